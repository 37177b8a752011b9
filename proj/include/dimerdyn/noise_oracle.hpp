// noise_oracle.hpp — Monte-Carlo check of the V = 0 decoherence law

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dimerdyn/spectral.hpp"

namespace dimerdyn {

// Classical Gaussian dephasing with the symmetrized bath correlation
// C(t) = (1/π) ∫ J(ω) coth(βω/2) cos(ωt) dω, so that the phase
// φ(t) = 2λ ∫₀ᵗ ξ ds has ⟨φ²⟩/2 = (4λ²/π) Q₂(t). Times are in τ = t/β.
struct NoiseSimConfig {
    std::size_t n_paths{10000};
    double dt{0.05};
    double t_max{5.0};
    std::uint64_t seed{1};
    double lambda{0.0};
    BathSpectrum bath{};
    double beta{1.0};
    std::size_t n_freq{2048};
    double f_min{1e-4};          // grid bounds in units of ω_c
    double f_max{50.0};
    unsigned threads{1};
    std::size_t block{256};      // paths per GEMM block

    double eta() const { return beta * bath.omega_c; }
    // (4λ²βν/π), the weight of 𝒬₂ in the target exponent
    double weight() const;
    void validate() const;
};

struct NoiseSimResult {
    std::vector<double> tau;
    std::vector<double> mean_re;   // ⟨cos φ⟩
    std::vector<double> mean_im;   // −⟨sin φ⟩
    std::vector<double> se_re;
    std::vector<double> se_im;
    std::vector<double> target;    // e^{−(4λ²/π)Q₂}
    std::vector<double> synthesized_target; // same exponent from the discrete frequency grid
};

NoiseSimResult simulate_dephasing(const NoiseSimConfig& cfg);

struct CovarianceCheck {
    double lag_tau{0.0};
    double sample{0.0};
    double standard_error{0.0};
    double target{0.0};
};

// Sample covariance of dφ/dτ at the given lags (multiples of dt) against the
// continuum value (2λβ)² C(βτ).
std::vector<CovarianceCheck> check_covariance(const NoiseSimConfig& cfg, const std::vector<int>& lags);

// (2λβ)² C(βτ) by quadrature.
double noise_covariance(const NoiseSimConfig& cfg, double lag_tau);

// Fraction of points with |mean − target| ≤ k·SE (SE = 0 demands exact equality).
double fraction_within(const NoiseSimResult& r, double k);

} // namespace dimerdyn
