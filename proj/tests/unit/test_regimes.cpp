// test_regimes.cpp — regime grading, coupling bounds, usefulness window

#include "doctest.h"

#include <cmath>
#include <limits>

#include "dimerdyn/error.hpp"
#include "dimerdyn/regimes.hpp"

using namespace dimerdyn;

namespace {

std::pair<DimerParams, SpectralModel> fig1_point(double eta, double y)
{
    DimensionlessParams d;
    d.eps = 150.0 / 37.88;
    d.v = 25.0 / 37.88;
    d.eps_c = {y, y};
    d.eta = {eta, eta};
    d.p = {0.5, 0.5};
    return from_dimensionless(d, 1.0 / 37.88);
}

} // namespace

TEST_SUITE("regimes") {

TEST_CASE("grading thresholds")
{
    CHECK(grade("a", 0.05, 1.0).verdict == Verdict::Satisfied);
    CHECK(grade("a", 0.1, 1.0).verdict == Verdict::Satisfied);
    CHECK(grade("a", 0.5, 1.0).verdict == Verdict::Marginal);
    CHECK(grade("a", 1.0, 1.0).verdict == Verdict::Violated);
    CHECK(grade("a", 1.0, 0.0).verdict == Verdict::Violated);
    CHECK(grade("a", -0.05, 1.0).ratio == doctest::Approx(0.05));
}

TEST_CASE("Marcus regime at eta = 0.1 and eta = 1")
{
    auto [d1, m1] = fig1_point(0.1, 4.0);
    CHECK(check_marcus_regime(d1, m1).overall() == Verdict::Satisfied);
    auto [d2, m2] = fig1_point(1.0, 4.0);
    const RegimeReport r = check_marcus_regime(d2, m2);
    CHECK(r.overall() == Verdict::Violated);
    CHECK(r.checks[0].name == "omega_c<<T");
    CHECK(r.checks[0].verdict == Verdict::Violated);
    CHECK_FALSE(r.summary().empty());
}

TEST_CASE("local Marcus regime is checked per reservoir")
{
    const DimerParams d{150.0, 25.0, 0.5, 0.5, 1.0 / 37.88};
    const auto m = SpectralModel::local({0.5, 3.788, 1.0}, {0.5, 37.88, 1.0});
    const RegimeReport r = check_marcus_regime(d, m);
    REQUIRE(r.checks.size() == 4);
    CHECK(r.checks[0].verdict == Verdict::Satisfied);
    CHECK(r.checks[2].verdict == Verdict::Violated);
}

TEST_CASE("high-temperature partial regime")
{
    const DimerParams d{0.1, 1.0, 0.005, -0.005, 0.01};
    const auto m = SpectralModel::collective({0.5, 2.0, 1.0});
    CHECK(check_high_temp_partial_regime(d, m).overall() == Verdict::Satisfied);
    const DimerParams far{100.0, 1.0, 0.01, -0.01, 0.01};
    CHECK(check_high_temp_partial_regime(far, m).overall() == Verdict::Violated);
}

TEST_CASE("coupling constraints")
{
    const DimerParams d{1.0, 0.001, 0.3, 0.1, 1.0};
    const auto m = SpectralModel::collective({0.5, 1.0, 1.0});
    const CouplingBounds b = coupling_constraints(d, m, 0.5);
    CHECK(b.xi == doctest::Approx(0.2));
    CHECK(b.born == doctest::Approx(1.0 / 1.04));
    CHECK(b.v0_bound == doctest::Approx(std::min({b.born, b.separation, b.backreaction})));
    CHECK(b.admissible);

    const DimerParams sym{1.0, 0.001, 0.2, 0.2, 1.0};
    const CouplingBounds s = coupling_constraints(sym, m, 0.0);
    CHECK(s.xi == 0.0);
    CHECK(s.v0_bound == 0.0);
    CHECK_FALSE(s.admissible);

    const auto loc = SpectralModel::local({0.5, 1.0, 1.0}, {0.5, 1.0, 1.0});
    CHECK(coupling_constraints(d, loc, 0.5).xi == doctest::Approx(0.3));
    CHECK(coupling_constraints(d, m, 0.5, 3.0).born == doctest::Approx(3.0 * b.born));
}

TEST_CASE("usefulness window")
{
    const UsefulnessWindow w = usefulness_window(0.5, 0.01, 1.0, 0.48);
    CHECK(w.t_min == 2.0);
    CHECK(w.t_max == 100.0);
    CHECK_FALSE(w.degenerate);
    REQUIRE(w.t_min_p_inf);
    CHECK(*w.t_min_p_inf == doctest::Approx(1.0 / 0.48));
    REQUIRE(w.t_min_high_t);
    CHECK(*w.t_min_high_t == 2.0);

    CHECK(std::isinf(usefulness_window(1.0, 0.0, 1.0).t_max));
    CHECK(usefulness_window(0.1, 1.0, 1.0).degenerate);
    CHECK_THROWS_AS(usefulness_window(0.0, 1.0, 1.0), DomainError);
}

}
