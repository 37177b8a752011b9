// rates.hpp — relaxation rates, Lamb shift and Marcus-type approximations

#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dimerdyn/kernels.hpp"
#include "dimerdyn/regimes.hpp"
#include "dimerdyn/spectral.hpp"

namespace dimerdyn {

enum class RateMethod { ExactIntegral, GeneralizedMarcus, StandardMarcus, HighTempPartial, LevelShiftTrace };

struct RateReport {
    double gamma{0.0};                   // ps⁻¹
    std::optional<double> lamb_shift;    // ps⁻¹
    std::optional<double> gamma_classic; // standard Marcus: single-exponential form
    RateMethod method{RateMethod::ExactIntegral};
    double tail_contribution{0.0};       // part of gamma from [τ_split, ∞), ps⁻¹
    double split_tau{0.0};               // dimensionless
    std::size_t evaluations{0};
    std::vector<std::string> diagnostics;
};

// Kernel sets for the two sites. For the collective topology both point
// to the same object.
struct KernelBundle {
    std::shared_ptr<const KernelSet> site1;
    std::shared_ptr<const KernelSet> site2;

    static KernelBundle make(const SpectralModel& model, double beta,
                             KernelMethod method = KernelMethod::ClosedForm);
    static KernelBundle dimensionless(const DimensionlessParams& d,
                                      KernelMethod method = KernelMethod::ClosedForm);
};

struct RateOptions {
    double split_tol{1e-4};     // saturation tolerance fixing τ_split (p > 0)
    double phase_tol{1e-6};     // |phase(τ_split)| bound
    double panel_abs_tol{1e-12};
    double panel_rel_tol{1e-10};
    double envelope_floor{1e-17};
    double tau_limit{1e7};
};

// Oscillatory time integrals of the rate theory in dimensionless form,
//
//   I_cos = Abel ∫ cos(ωτ) cos Φ(τ) e^{−Δ(τ)} dτ
//   I_sin = Abel ∫ sin(ωτ) cos Φ(τ) e^{−Δ(τ)} dτ
//   X     = Abel ∫ cos(ωτ − Φ(τ)) e^{−Δ(τ)} dτ
//
// with Φ = Σ_j w_j 𝒬₁^{(j)}, Δ = Σ_j w_j 𝒬₂^{(j)}. The head [0, τ_end] is
// integrated on panels; the rest uses the constant limit C = e^{−Σ w_j 𝒬₀^{(j)}}
// (zero when a channel has p ≤ 0) in closed form plus an integration-by-parts
// expansion for the decaying remainder.
enum class Quadrature { Cos, Sin, LevelShift };

struct Channel {
    const KernelSet* kernels{nullptr};
    double weight{0.0};
};

struct AbelIntegral {
    double value{0.0};
    double head{0.0};
    double tail{0.0};          // constant-limit term + remainder expansion
    double tail_constant{0.0}; // C
    double split_tau{0.0};
    std::size_t evaluations{0};
    std::vector<std::string> diagnostics;
};

AbelIntegral abel_integral(double omega, const std::vector<Channel>& channels, Quadrature kind,
                           const RateOptions& opt = {});

// Exact rate γ = V² Abel ∫ cos(ε̂t) cos[...] exp[...] dt, with the Lamb shift
// x_LS = (V²/2) Abel ∫ sin(ε̂t) cos[...] exp[...] dt filled in as well.
RateReport gamma_exact(const DimerParams& dimer, const SpectralModel& model,
                       const KernelBundle& kernels, const RateOptions& opt = {});

double lamb_shift(const DimerParams& dimer, const SpectralModel& model,
                  const KernelBundle& kernels, const RateOptions& opt = {});

// Dimensionless route: γ/(βV²) from (ε, ε₁, ε₂, η, p) with effective
// frequency ε − (ε₁−ε₂)/2. Returns the cosine and sine integrals.
struct DimensionlessRate {
    double gamma_over_beta_v2{0.0};
    double lamb_over_beta_v2{0.0};
    AbelIntegral cos_part;
};
DimensionlessRate rate_dimensionless(const DimensionlessParams& d, const KernelBundle& kernels,
                                     const RateOptions& opt = {});

// Generalized Marcus formula with both Gaussians, for either topology.
RateReport gamma_marcus_generalized(const DimerParams& dimer, const SpectralModel& model);

// Same formula in dimensionless variables: γ = β(V/2)² √(2π/(ε₁+ε₂)) {…}.
double gamma_marcus_dimensionless(double eps, double eps1, double eps2, double beta, double V);

// Classic single-exponential Marcus rate (gamma_classic) and the symmetric
// two-term form (gamma) for reorganization energy eps_rec.
RateReport gamma_marcus_standard(const DimerParams& dimer, double eps_rec);

// High-temperature partial-decoherence rate V²/ω_c (1 − exp(−(2T/π)·B λ²)).
RateReport gamma_high_temp_partial(const DimerParams& dimer, const SpectralModel& model);

// Appendix route through the level-shift operator trace:
// γ = (V²/2)(1 + e^{−βε̂}) x(ε̂).
RateReport gamma_from_level_shift(const DimerParams& dimer, const SpectralModel& model,
                                  const KernelBundle& kernels, const RateOptions& opt = {});

// x(±ε̂) without the V² prefactor, in units of β (dimensionless X above).
struct LevelShiftPair {
    double forward{0.0};   // x(ε̂)
    double backward{0.0};  // x(−ε̂)
    double beta_eps_hat{0.0};
};
LevelShiftPair level_shift_values(const DimerParams& dimer, const SpectralModel& model,
                                  const KernelBundle& kernels, const RateOptions& opt = {});

// 2√(2π)(V/2)²/ω_c
double marcus_upper_bound(double V, double omega_c);

const char* to_string(RateMethod m);

} // namespace dimerdyn
