// test_kernels.cpp — 𝒬₁, 𝒬₂ against frozen quadrature values and limits

#include "doctest.h"

#include <cmath>

#include "dimerdyn/error.hpp"
#include "dimerdyn/kernels.hpp"
#include "dimerdyn/specfun.hpp"

using namespace dimerdyn;

namespace {

struct Frozen {
    double p, eta, tau, q1, q2;
};

// Direct mpmath quadrature of the defining integrals (30 digits).
const Frozen kFrozen[] = {
    {0.5, 0.1, 3.0, 2.5250399797996801, 8.3292986414135182},
    {0.5, 1.0, 2.5, 0.047562425683709869, 1.0149964946140944},
    {1.5, 1.0, 7.0, -5.376e-5, 0.29135006013753494},
    {-0.25, 1.0, 2.0, 0.70315516850828586, 2.3387056417407029},
    {-0.25, 0.1, 10.0, 6.435942529055826, 79.075900917284381},
    {0.0, 1.0, 3.0, 0.3, 2.4703927512233675},
    {0.5, 5.0, 1.0, 0.0014792899408284024, 0.10960551233898891},
    {0.5, 1.0, 40.0, 1.5605487045299998e-5, 1.1443096521759085},
};

} // namespace

TEST_SUITE("kernels") {

TEST_CASE("closed form matches frozen values")
{
    for (const auto& f : kFrozen) {
        CAPTURE(f.p);
        CAPTURE(f.eta);
        CAPTURE(f.tau);
        const KernelSet ks(f.p, f.eta);
        CHECK(ks.q1(f.tau) == doctest::Approx(f.q1).epsilon(1e-11));
        CHECK(ks.q2(f.tau) == doctest::Approx(f.q2).epsilon(1e-11));
    }
}

TEST_CASE("quadrature branch matches frozen values")
{
    for (const auto& f : kFrozen) {
        CAPTURE(f.p);
        CAPTURE(f.tau);
        const KernelSet ks(f.p, f.eta, KernelMethod::Quadrature);
        CHECK(ks.q1(f.tau) == doctest::Approx(f.q1).epsilon(1e-8).scale(1e-3));
        CHECK(ks.q2(f.tau) == doctest::Approx(f.q2).epsilon(1e-8));
    }
}

TEST_CASE("Q0 frozen values and asymptotes")
{
    CHECK(*KernelSet(0.5, 0.1).q0() == doctest::Approx(100.16633568168575).epsilon(1e-12));
    CHECK(*KernelSet(0.5, 1.0).q0() == doctest::Approx(1.1449340668482264).epsilon(1e-12));
    CHECK(*KernelSet(0.5, 5.0).q0() == doctest::Approx(0.11013901764339023).epsilon(1e-12));
    CHECK_FALSE(KernelSet(-0.25, 1.0).q0());
    CHECK_FALSE(KernelSet(0.0, 1.0).q0());

    CHECK(*KernelSet(0.5, 0.01).q0() == doctest::Approx(q0_small_eta(0.5, 0.01)).epsilon(3e-3));
    CHECK(*KernelSet(0.5, 50.0).q0() == doctest::Approx(q0_large_eta(0.5, 50.0)).epsilon(1e-3));
}

TEST_CASE("values at tau = 0 and small tau")
{
    for (double p : {-0.25, 0.0, 0.5, 1.5}) {
        const KernelSet ks(p, 1.0);
        CHECK(ks.q1(0.0) == 0.0);
        CHECK(ks.q2(0.0) == 0.0);
        CHECK(ks.q1(1e-6) == doctest::Approx(1e-6).epsilon(1e-6));
        CHECK(ks.q2(1e-3) >= 0.0);
    }
}

TEST_CASE("Q2 approaches Q0 and behaves as recorded")
{
    const KernelSet a(0.5, 0.1);
    CHECK(a.q2(2000.0) == doctest::Approx(*a.q0()).epsilon(1e-3));
    double prev = 0.0;
    for (int i = 1; i <= 200; ++i) {
        const double v = a.q2(0.25 * i);
        CHECK(v >= prev);
        CHECK(v <= *a.q0());
        prev = v;
    }
    // p = 3/2 overshoots its limit before settling
    const KernelSet b(1.5, 1.0);
    double peak = 0.0;
    for (int i = 1; i <= 400; ++i)
        peak = std::max(peak, b.q2(0.05 * i));
    CHECK(peak > *b.q0());
    // sub-ohmic: unbounded logarithmic-type growth
    const KernelSet c(-0.25, 1.0);
    CHECK(c.q2(1000.0) > 2.0 * c.q2(10.0));
}

TEST_CASE("saturation time")
{
    const KernelSet ks(0.5, 1.0);
    const double t = ks.saturation_time(1e-2);
    CHECK(t == doctest::Approx(9.27).epsilon(1e-2));
    for (double s : {t, 2 * t, 4 * t})
        CHECK(std::abs(ks.q2(s) - *ks.q0()) <= 1e-2 * *ks.q0() * (1 + 1e-9));
    CHECK(ks.saturation_time(2.0) == 0.0);
    CHECK_THROWS_AS(KernelSet(-0.25, 1.0).saturation_time(1e-2), DomainError);
}

TEST_CASE("saturation integral")
{
    const KernelSet ks(0.5, 1.0);
    CHECK(ks.saturation_integral(0.0) == doctest::Approx(*ks.q0()).epsilon(1e-12));
    const KernelSet sub(-0.25, 1.0);
    CHECK(std::isinf(sub.saturation_integral(0.0)));
    CHECK(sub.saturation_integral(1e-6) > 10 * sub.saturation_integral(1e-2));
}

TEST_CASE("physical kernels scale with beta nu")
{
    const BathSpectrum b{0.5, 3.788, 1.0};
    const double beta = 1.0 / 37.88;
    const KernelSet phys(b, beta);
    const KernelSet dim(0.5, beta * 3.788);
    CHECK(phys.Q2(0.1) == doctest::Approx(beta * b.nu() * dim.q2(0.1 / beta)));
    CHECK(phys.Q1(0.1) == doctest::Approx(beta * b.nu() * dim.q1(0.1 / beta)));
    CHECK_THROWS(dim.Q1(1.0));
}

TEST_CASE("memoization returns identical values")
{
    const KernelSet ks(0.5, 1.0);
    const double a = ks.q2(3.3);
    const std::size_t n = ks.cache_size();
    CHECK(ks.q2(3.3) == a);
    CHECK(ks.cache_size() == n);
}

TEST_CASE("asymptotic tables")
{
    const KernelSet hi(0.5, 0.05);
    const auto st = q_asymptotic(hi, 0.01, KernelRegime::ShortTimeHighT);
    CHECK(st.q2 == doctest::Approx(hi.q2(0.01)).epsilon(0.05));
    const KernelSet lo(0.5, 20.0);
    const auto lt = q_asymptotic(lo, 50.0, KernelRegime::LongTimeLowT);
    CHECK(lt.preconditions_hold);
    CHECK(lt.q2 == doctest::Approx(lo.q2(50.0)).epsilon(0.05));
    const auto bad = q_asymptotic(lo, 50.0, KernelRegime::ShortTimeHighT);
    CHECK_FALSE(bad.preconditions_hold);
}

TEST_CASE("domain")
{
    CHECK_THROWS_AS(KernelSet(-0.5, 1.0), DomainError);
    CHECK_THROWS_AS(KernelSet(0.5, 0.0), DomainError);
    CHECK_THROWS_AS(KernelSet(0.5, 1.0).q2(-1.0), DomainError);
}

}
