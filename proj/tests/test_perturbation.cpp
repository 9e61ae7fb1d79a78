#include <cmath>
#include <numbers>
#include <sstream>

#include "apqho/errors.hpp"
#include "apqho/perturbation.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace apqho;

namespace {
const cplx I{0.0, 1.0};

PerturbationSpec mixed() {
    return PerturbationSpec({{2.0, 1.0}, {1.0 + I, 2.2}}, {{DecayKind::rational, 1.0, 1.0}, {DecayKind::gaussian, 0.5, 2.0}});
}
}  // namespace

TEST_SUITE("perturbation") {

TEST_CASE("evaluation follows the term definitions") {
    const auto q = mixed();
    for (double x : {0.0, 0.7, -3.1, 12.0}) {
        const cplx expect = 2.0 * std::cos(x) + (1.0 + I) * std::cos(2.2 * x) + 1.0 / (1.0 + x * x) +
                            0.5 * std::exp(-x * x / 4.0);
        CHECK(std::abs(eval_q(q, x) - expect) < 1e-15);
        const cplx r = 1.0 / (1.0 + x * x) + 0.5 * std::exp(-x * x / 4.0);
        CHECK(std::abs(eval_decay(q, x) - r) < 1e-15);
        CHECK(eval_decay_abs(q, x) >= std::abs(r) - 1e-15);
    }
}

TEST_CASE("derivative and primitive agree with finite differences and quadrature") {
    const auto q = mixed();
    for (double x : {0.3, 2.0, 9.5}) {
        const double h = 1e-5;
        const cplx fd = (eval_q(q, x + h) - eval_q(q, x - h)) / (2 * h);
        CHECK(std::abs(eval_q_prime(q, x) - fd) < 1e-8);
        auto re = [&](double t) { return eval_q(q, t).real(); };
        auto im = [&](double t) { return eval_q(q, t).imag(); };
        const cplx Q{oracle::gl5(re, 0.0, x, 200), oracle::gl5(im, 0.0, x, 200)};
        CHECK(std::abs(eval_primitive_Q(q, x) - Q) < 1e-12);
    }
    CHECK(eval_primitive_Q(q, 0.0) == cplx{});
}

TEST_CASE("Bohr coefficients") {
    const auto q = mixed();
    CHECK(std::abs(bohr_coefficient(q, 1.0) - cplx(1.0)) < 1e-15);
    CHECK(std::abs(bohr_coefficient(q, 2.2) - 0.5 * (1.0 + I)) < 1e-15);
    CHECK(std::abs(bohr_coefficient(q, 1.6)) == 0.0);
    const PerturbationSpec c({{3.0, 0.0}}, {});
    CHECK(bohr_coefficient(c, 0.0) == cplx(3.0));
    // Oracle: the mean (1/T) int_0^T p cos(nu t) dt at a large T.
    const double T = 2000.0;
    auto f = [&](double t) { return (eval_q(q, t) - eval_decay(q, t)).real() * std::cos(t); };
    CHECK(oracle::gl5(f, 0.0, T, 20000) / T == doctest::Approx(1.0).epsilon(2e-3));
}

TEST_CASE("Besicovitch seminorm estimate of the decaying part tends to zero") {
    const auto q = mixed();
    const double a = besicovitch_seminorm_estimate(q, 100.0);
    const double b = besicovitch_seminorm_estimate(q, 1000.0);
    // (1/T) int_0^T 1/(1+x^2) + 0.5 e^{-x^2/4}  ->  (atan T + sqrt(pi)/2) / T
    CHECK(b == doctest::Approx((std::atan(1000.0) + std::sqrt(std::numbers::pi) / 2) / 1000.0).epsilon(1e-9));
    CHECK(b < a);
}

TEST_CASE("sup bounds dominate sampled values") {
    const auto q = mixed();
    double mq = 0, mqp = 0, mQ = 0;
    for (double x = 0; x < 60; x += 0.01) {
        mq = std::max(mq, std::abs(eval_q(q, x)));
        mqp = std::max(mqp, std::abs(eval_q_prime(q, x)));
        mQ = std::max(mQ, std::abs(eval_primitive_Q(q, x)));
    }
    CHECK(sup_q(q) >= mq);
    CHECK(sup_q_prime(q) >= mqp);
    CHECK(sup_primitive(q) >= mQ);
    const PerturbationSpec c({{1.0, 0.0}}, {});
    CHECK(std::isinf(sup_primitive(c)));
}

TEST_CASE("constructor validation") {
    CHECK_THROWS_AS(PerturbationSpec({{1.0, -1.0}}, {}), DomainError);
    CHECK_THROWS_AS(PerturbationSpec({{1.0, 1.0}, {2.0, 1.0}}, {}), DomainError);
    CHECK_THROWS_AS(PerturbationSpec({}, {{DecayKind::gaussian, 1.0, 0.0}}), DomainError);
    CHECK(PerturbationSpec().empty());
    CHECK(mixed().is_real() == false);
    CHECK(PerturbationSpec({{2.0, 1.0}}, {}).is_real());
    CHECK(mixed().max_frequency() == 2.2);
    CHECK(mixed().min_scale() == 1.0);
}

TEST_CASE("spec algebra") {
    const PerturbationSpec a({{1.0, 1.0}}, {});
    const PerturbationSpec b({{2.0, 3.0}}, {});
    const auto s = (a + b).scaled(2.0 * I);
    for (double x : {0.0, 1.5})
        CHECK(std::abs(eval_q(s, x) - 2.0 * I * (std::cos(x) + 2.0 * std::cos(3 * x))) < 1e-15);
    CHECK_THROWS_AS(a + a, DomainError);
}

TEST_CASE("spec files parse, report line numbers and round-trip") {
    const auto q = parse_spec_string("# header\n\ncos 2 0 1.0\ncos 1 1 2.2\nrational 1 0 1\ngauss 0.5 0 2\n");
    CHECK(q.cos_terms().size() == 2);
    CHECK(q.decay_terms().size() == 2);
    const auto again = parse_spec_string(format_spec(q));
    for (double x : {0.0, 0.37, 11.0}) CHECK(eval_q(again, x) == eval_q(q, x));

    auto line_of = [](const std::string& text) {
        try {
            parse_spec_string(text);
        } catch (const ParseError& e) {
            return static_cast<long>(e.line());
        }
        return -1L;
    };
    CHECK(line_of("cos 1 0 1\nsine 1 0 1\n") == 2);
    CHECK(line_of("cos 1 0\n") == 1);
    CHECK(line_of("cos 1 0 1\n# c\ncos 1 0 -2\n") == 3);
    CHECK(line_of("cos 1 0 1\ncos 2 0 1\n") == 2);
    CHECK(line_of("gauss 1 0 0\n") == 1);
    CHECK(line_of("cos 1 0 x\n") == 1);
    CHECK(parse_spec_string("").empty());
}

}
