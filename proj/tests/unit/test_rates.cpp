// test_rates.cpp — exact rate integral, Marcus forms, level-shift route

#include "doctest.h"

#include <cmath>
#include <numbers>

#include "dimerdyn/error.hpp"
#include "dimerdyn/rates.hpp"

using namespace dimerdyn;

namespace {

DimensionlessParams collective(double eps, double x, double y, double eta, double p)
{
    DimensionlessParams d;
    d.topology = Topology::Collective;
    d.eps = eps;
    d.v = 0.5;
    d.eps_c = {y + x, y - x};
    d.eta = {eta, eta};
    d.p = {p, p};
    return d;
}

} // namespace

TEST_SUITE("rates") {

TEST_CASE("dimensionless rate against frozen mpmath integrals")
{
    // ∫₀^∞ cos((ε−x)τ) cos(y𝒬₁) e^{−y𝒬₂} dτ, mpmath at 30 digits
    const auto d1 = collective(3.9, -4.0, 1.0, 0.1, 0.5);
    CHECK(rate_dimensionless(d1, KernelBundle::dimensionless(d1)).gamma_over_beta_v2
          == doctest::Approx(1.1860426248357412e-5).epsilon(1e-7));
    const auto d2 = collective(3.9, 2.0, 1.0, 0.1, 0.5);
    CHECK(rate_dimensionless(d2, KernelBundle::dimensionless(d2)).gamma_over_beta_v2
          == doctest::Approx(0.41064067850548218).epsilon(1e-9));
}

TEST_CASE("physical and dimensionless routes agree")
{
    const auto d = collective(3.96, 0.5, 3.0, 0.5, 0.5);
    const double beta = 1.0 / 37.88;
    auto [dimer, model] = from_dimensionless(d, beta);
    const RateReport r = gamma_exact(dimer, model, KernelBundle::make(model, beta));
    const double g = rate_dimensionless(d, KernelBundle::dimensionless(d)).gamma_over_beta_v2;
    CHECK(r.gamma == doctest::Approx(g * dimer.V * dimer.V * beta).epsilon(1e-9));
    REQUIRE(r.lamb_shift);
}

TEST_CASE("symmetric coupling gives zero rate")
{
    const DimerParams d{150.0, 25.0, 0.2, 0.2, 1.0 / 37.88};
    const auto model = SpectralModel::collective({0.5, 3.788, 1.0});
    const RateReport r = gamma_exact(d, model, KernelBundle::make(model, d.beta));
    CHECK(r.gamma == 0.0);
}

TEST_CASE("lambda1 = 0: collective equals local")
{
    const BathSpectrum b{0.5, 3.788, 1.0};
    const DimerParams d{150.0, 25.0, 0.0, 0.15, 1.0 / 37.88};
    const auto c = SpectralModel::collective(b);
    const auto l = SpectralModel::local(b, b);
    const double gc = gamma_exact(d, c, KernelBundle::make(c, d.beta)).gamma;
    const double gl = gamma_exact(d, l, KernelBundle::make(l, d.beta)).gamma;
    CHECK(gc == doctest::Approx(gl).epsilon(1e-10));
}

TEST_CASE("level-shift route and detailed balance")
{
    const auto d = collective(1.2, 0.3, 1.5, 1.0, 0.5);
    const double beta = 0.7;
    auto [dimer, model] = from_dimensionless(d, beta);
    const auto k = KernelBundle::make(model, beta);
    const double exact = gamma_exact(dimer, model, k).gamma;
    CHECK(gamma_from_level_shift(dimer, model, k).gamma == doctest::Approx(exact).epsilon(1e-9));
    const LevelShiftPair x = level_shift_values(dimer, model, k);
    CHECK(x.backward == doctest::Approx(std::exp(-x.beta_eps_hat) * x.forward).epsilon(1e-9));
}

TEST_CASE("abel integral without channels")
{
    const std::vector<Channel> none;
    CHECK(abel_integral(2.0, none, Quadrature::Cos).value == doctest::Approx(0.0).scale(1.0));
    CHECK(abel_integral(2.0, none, Quadrature::Sin).value == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("sub-ohmic and ohmic baths (full decoherence)")
{
    for (double p : {-0.25, 0.0}) {
        const auto d = collective(3.0, 0.0, 2.0, 1.0, p);
        const auto r = rate_dimensionless(d, KernelBundle::dimensionless(d));
        CHECK(std::isfinite(r.gamma_over_beta_v2));
        CHECK(r.gamma_over_beta_v2 > 0.0);
    }
}

TEST_CASE("zero effective frequency with partial decoherence is flagged")
{
    const auto d = collective(1.0, 1.0, 0.5, 1.0, 0.5);
    const auto r = rate_dimensionless(d, KernelBundle::dimensionless(d));
    CHECK_FALSE(r.cos_part.diagnostics.empty());
}

TEST_CASE("generalized Marcus reduces to the standard form")
{
    const double beta = 1.0 / 37.88, V = 25.0;
    const double g = gamma_marcus_dimensionless(3.96, 2.5, 2.5, beta, V);
    const DimerParams dimer{3.96 / beta, V, 0.0, 0.0, beta};
    const RateReport s = gamma_marcus_standard(dimer, 2.5 / beta);
    CHECK(g == doctest::Approx(s.gamma).epsilon(1e-13));
    REQUIRE(s.gamma_classic);
    CHECK(*s.gamma_classic < s.gamma);
    CHECK_THROWS_AS(gamma_marcus_dimensionless(3.96, 0.0, 0.0, beta, V), DomainError);
}

TEST_CASE("upper bound")
{
    CHECK(marcus_upper_bound(25.0, 3.788) == doctest::Approx(2 * std::sqrt(2 * std::numbers::pi) * 156.25 / 3.788));
    const double beta = 1.0 / 37.88;
    for (double y = 0.05; y < 10; y *= 1.5)
        CHECK(gamma_marcus_dimensionless(3.96, y, y, beta, 25.0) <= marcus_upper_bound(25.0, 0.1 / beta));
}

TEST_CASE("high-temperature partial rate")
{
    const DimerParams d{1.0, 2.0, 0.05, -0.05, 0.1};
    const BathSpectrum b{0.5, 0.2, 1.0};
    const auto model = SpectralModel::collective(b);
    const RateReport r = gamma_high_temp_partial(d, model);
    const double expo = 2.0 * 10.0 / std::numbers::pi * *b.b_coefficient() * 0.01;
    CHECK(r.gamma == doctest::Approx(4.0 / 0.2 * (1 - std::exp(-expo))));
    CHECK_THROWS_AS(gamma_high_temp_partial(d, SpectralModel::collective({0.0, 0.2, 1.0})), DomainError);
}

}
