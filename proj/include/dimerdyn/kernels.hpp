// kernels.hpp — bath kernels Q₁, Q₂ in dimensionless (τ = t/β) and physical form

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dimerdyn/spectral.hpp"

namespace dimerdyn {

enum class KernelMethod { ClosedForm, Quadrature };

struct KernelValues {
    double q1{0.0};
    double q2{0.0};
};

// Dimensionless kernels of one reservoir with J(ω) = A_p ω^{2p+2} e^{−ω/ω_c}:
//
//   𝒬₁(τ) = 1/(ηΓ(2p+2)) ∫ z^{2p} e^{−z} sin(ητz) dz
//   𝒬₂(τ) = 1/(ηΓ(2p+2)) ∫ z^{2p} e^{−z} (1 − cos ητz) coth(ηz/2) dz
//
// with η = βω_c. The closed forms go through the Hurwitz zeta function
// (digamma at p = 0). Physical kernels are Q(t) = βν 𝒬(t/β).
//
// Evaluations are memoized per τ. Copies share the cache; concurrent
// readers are safe and results do not depend on insertion order.
class KernelSet {
public:
    KernelSet(double p, double eta, KernelMethod method = KernelMethod::ClosedForm,
              bool memoize = true);
    KernelSet(const BathSpectrum& bath, double beta,
              KernelMethod method = KernelMethod::ClosedForm, bool memoize = true);

    double p() const { return p_; }
    double eta() const { return eta_; }
    KernelMethod method() const { return method_; }

    double q1(double tau) const { return at(tau).q1; }
    double q2(double tau) const { return at(tau).q2; }
    KernelValues at(double tau) const;

    // lim 𝒬₂(τ) as τ → ∞; empty when p ≤ 0 (the limit is infinite).
    std::optional<double> q0() const;

    // A τ* with |𝒬₂(τ*) − 𝒬₀| ≤ tol·𝒬₀, located by doubling from 1/η until
    // the bound holds at three successive doublings, then bisecting the last
    // bracket. For p > 1/2 𝒬₂ overshoots 𝒬₀ before settling, so the bound is
    // not monotone in τ; the doubling guard skips the first upward crossing.
    // Throws DomainError for p ≤ 0.
    double saturation_time(double tol) const;

    // 1/(ηΓ(2p+2)) ∫_{z_min}^∞ z^{2p} e^{−z} coth(ηz/2) dz. Equals 𝒬₀ at
    // z_min = 0 for p > 0; diverges as z_min → 0 for p ≤ 0.
    double saturation_integral(double z_min) const;

    // Physical kernels at time t (ps). Only for sets built from a BathSpectrum.
    double Q1(double t) const;
    double Q2(double t) const;
    double beta() const { return beta_; }
    double scale() const { return scale_; }   // βν

    std::size_t cache_size() const;

    KernelValues closed_form(double tau) const;
    KernelValues quadrature(double tau) const;

private:
    struct Cache;

    double p_;
    double eta_;
    KernelMethod method_;
    double beta_{1.0};
    double scale_{1.0};
    bool physical_{false};
    std::shared_ptr<Cache> cache_;
};

// Named regimes of the asymptotic kernel tables.
enum class KernelRegime {
    ShortTimeHighT,     // η ≪ 1, ητ ≪ 1: 𝒬₂ ≈ τ²
    ShortTime,          // ητ ≪ 1: 𝒬₂ ≈ (p+1)(2ζ(2p+3,1/η) − η^{2p+3})τ²/η^{2p+2}
    LongTimeLowT,       // η ≫ 1, ητ ≫ 1, p > 0
    LongTimeSubOhmic,   // ητ ≫ 1, −1/2 < p < 0
    HighT               // η ≪ 1, τ > 0 (same expression as LongTimeSubOhmic)
};

struct AsymptoticEstimate {
    double q1{0.0};
    double q2{0.0};
    bool preconditions_hold{true};
    std::vector<std::string> warnings;
};

// 𝒬₁ uses τ when ητ < 1 and the ητ ≫ 1 expansion otherwise.
AsymptoticEstimate q_asymptotic(const KernelSet& ks, double tau, KernelRegime regime);

// 𝒬₀ ≈ 1/((2p+1)pη²) for η ≪ 1
double q0_small_eta(double p, double eta);
// 𝒬₀ ≈ 1/((2p+1)η) + 2ζ(2p+1)/((2p+1)η^{2p+2}) − 2ζ(2p+2)/η^{2p+3} for η ≫ 1
double q0_large_eta(double p, double eta);

const char* to_string(KernelRegime r);
const char* to_string(KernelMethod m);

} // namespace dimerdyn
