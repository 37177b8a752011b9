// dynamics.hpp — population and coherence main terms, V = 0 decoherence factor

#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "dimerdyn/rates.hpp"
#include "dimerdyn/spectral.hpp"

namespace dimerdyn {

using cplx = std::complex<double>;

struct Trajectory {
    std::vector<double> times;          // ps
    std::vector<double> p;              // population of level 1
    std::vector<double> rho12_abs;
    std::vector<double> rho12_phase;    // unwrapped, radians
    std::vector<double> envelope;       // e^{−γt/2}
    std::vector<double> d_factor;       // |D(t)|
    std::vector<double> gamma_of_tau;   // Γ(t/β)
    double p0{0.0};
    cplx rho12_0{0.0, 0.0};
    std::string label{"main term"};
};

// p∞ = 1/(1 + e^{βε̂})
double equilibrium_population(double beta_eps_hat);
double equilibrium_population(const DimerParams& dimer, const SpectralModel& model);

// p(t) = p∞ + e^{−γt}(p(0) − p∞)
Trajectory population_trajectory(double p_inf, double gamma, double p0, const std::vector<double>& times);

// Exact V = 0 factor: collective e^{−i(λ₁²−λ₂²)Q₁/π} e^{−(λ₁−λ₂)²Q₂/π}, local
// e^{−i[λ₁²Q₁⁽¹⁾ − λ₂²Q₁⁽²⁾]/π} e^{−[λ₁²Q₂⁽¹⁾ + λ₂²Q₂⁽²⁾]/π}. t in ps.
cplx decoherence_factor(const DimerParams& dimer, const SpectralModel& model,
                        const KernelBundle& kernels, double t);

// Γ(τ) = Σ_j w_j 𝒬₂^{(j)}(τ), with w = (ε₁+ε₂)/2 (collective) or ε_j/2 (local)
double gamma_of_tau(const DimerParams& dimer, const SpectralModel& model,
                    const KernelBundle& kernels, double tau);

// lim Γ(τ); empty when it diverges (some p_j ≤ 0 with nonzero weight).
std::optional<double> gamma_infinity(const DimerParams& dimer, const SpectralModel& model,
                                     const KernelBundle& kernels);

// Main term e^{−γt/2} e^{−it(ε̂+x_LS)} e^{−Γ∞} ρ₁₂(0). With V = 0 the exact law
// e^{−iε̂t} D(t) ρ₁₂(0) is used instead and x_LS is ignored. Throws
// RegimeError when V ≠ 0 and Γ∞ diverges.
Trajectory coherence_trajectory(const DimerParams& dimer, const SpectralModel& model,
                                double gamma, double lamb_shift, const KernelBundle& kernels,
                                cplx rho12_0, const std::vector<double>& times);

} // namespace dimerdyn
