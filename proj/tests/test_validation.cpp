#include <cmath>

#include "apqho/errors.hpp"
#include "apqho/validation.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace apqho;

TEST_SUITE("validation") {

TEST_CASE("log-log slope") {
    const std::vector<double> x{1, 2, 4, 8};
    std::vector<double> y;
    for (double v : x) y.push_back(3.0 * std::pow(v, -0.7));
    CHECK(loglog_slope(x, y) == doctest::Approx(-0.7).epsilon(1e-12));
    CHECK(loglog_slope(x, y) == doctest::Approx(oracle::slope(x, y)));
    CHECK_THROWS_AS(loglog_slope({1.0}, {1.0}), DomainError);
}

TEST_CASE("measurement relations") {
    Measurement m;
    m.value = 0.5, m.limit = 1.0;
    CHECK(m.pass());
    m.relation = Relation::at_least;
    CHECK_FALSE(m.pass());
    m.relation = Relation::within, m.limit = 0.4, m.limit_hi = 0.6;
    CHECK(m.pass());
    m.value = NAN;
    CHECK_FALSE(m.pass());
    m.informational = true;
    CHECK(m.pass());
}

TEST_CASE("fast suites pass and keep their samples") {
    for (const char* name : {"bessel", "roundtrip", "remark2", "lemma2"}) {
        const SuiteReport r = run_suite(name);
        CHECK_MESSAGE(r.passed(), r.summary());
        CHECK_FALSE(r.diagnostic_csv.empty());
        CHECK(r.summary().find(std::string(name) + ": PASS") != std::string::npos);
    }
    CHECK_THROWS_AS(run_suite("nope"), ConfigError);
    CHECK(suite_names().size() == 7);
}

TEST_CASE("audit corpus has no constant terms") {
    const auto corpus = audit_corpus();
    CHECK(corpus.size() == 6);
    for (const auto& q : corpus) CHECK(std::isfinite(sup_primitive(q)));
}

}
