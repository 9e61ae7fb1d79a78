#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace apqho {

/// Invalid configuration (grid sizes, tolerances, cutoff parameters).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Input sequence does not cover the requested index range.
class RangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Malformed text input; carries the 1-based line (or row) number.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Numerical procedure did not reach its tolerance.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Adaptive quadrature ran out of subdivisions. The best estimate and its
/// error bound are kept so callers can decide whether to accept them.
class QuadratureError : public NumericError {
public:
    QuadratureError(double best_re, double best_im, double error_bound)
        : NumericError("quadrature tolerance not reached (error bound " +
                       std::to_string(error_bound) + ")"),
          best_re_(best_re), best_im_(best_im), error_bound_(error_bound) {}

    double best_estimate_real() const noexcept { return best_re_; }
    double best_estimate_imag() const noexcept { return best_im_; }
    double error_bound() const noexcept { return error_bound_; }

private:
    double best_re_;
    double best_im_;
    double error_bound_;
};

/// Element-wise failures of a batched evaluation, reported by index.
class BatchError : public NumericError {
public:
    BatchError(std::vector<std::size_t> indices, const std::string& first_message)
        : NumericError(describe(indices, first_message)), indices_(std::move(indices)) {}

    const std::vector<std::size_t>& indices() const noexcept { return indices_; }

private:
    static std::string describe(const std::vector<std::size_t>& idx, const std::string& msg) {
        std::string s = std::to_string(idx.size()) + " element(s) failed, first at index ";
        s += idx.empty() ? std::string("?") : std::to_string(idx.front());
        return s + ": " + msg;
    }
    std::vector<std::size_t> indices_;
};

}  // namespace apqho
