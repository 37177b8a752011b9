// spectral.hpp — bath spectral densities, derived scalars and unit mappings

#pragma once

#include <array>
#include <functional>
#include <optional>
#include <utility>

namespace dimerdyn {

// ħ = 0.6582119569 meV·ps, so 1 meV = 1/0.6582119569 ps⁻¹.
inline constexpr double kHbarMevPs = 0.6582119569;
inline constexpr double kMevToPsInv = 1.0 / kHbarMevPs;

inline constexpr double mev_to_ps_inv(double mev) { return mev * kMevToPsInv; }
inline constexpr double ps_inv_to_mev(double w) { return w * kHbarMevPs; }

// Energies in ps⁻¹, times in ps, ħ = k_B = 1. λ² carries units of energy.
struct DimerParams {
    double epsilon{0.0};
    double V{0.0};
    double lambda1{0.0};
    double lambda2{0.0};
    double beta{1.0};

    double temperature() const { return 1.0 / beta; }
    void validate() const;
};

// J(ω) = A_p ω^{2p+2} exp(−ω/ω_c)
struct BathSpectrum {
    double p{0.5};
    double omega_c{1.0};
    double amplitude{1.0};   // A_p

    double J(double omega) const;
    double nu() const;                            // ∫ J(ω)/ω dω
    std::optional<double> b_coefficient() const;  // ∫ J(ω)/ω³ dω, finite for p > 0
    void validate() const;
};

enum class Topology { Collective, Local };

struct SpectralModel {
    Topology topology{Topology::Collective};
    BathSpectrum bath1{};
    BathSpectrum bath2{};   // ignored for the collective topology

    static SpectralModel collective(const BathSpectrum& b) { return {Topology::Collective, b, b}; }
    static SpectralModel local(const BathSpectrum& b1, const BathSpectrum& b2) {
        return {Topology::Local, b1, b2};
    }

    // Reservoir seen by site j (1 or 2).
    const BathSpectrum& bath(int j) const;
    bool identical_baths() const;
    void validate() const;
};

struct DerivedScalars {
    double nu1{0.0};
    double nu2{0.0};
    double alpha1{0.0};
    double alpha2{0.0};
    double epsilon_hat{0.0};
    // (2ν/π)(λ_j² − λ₁λ₂); only meaningful when both sites see the same bath.
    std::optional<std::array<double, 2>> eps_rec_collective;
    std::array<double, 2> eps_rec_local{};   // 2ν_jλ_j²/π
    std::optional<double> b1;
    std::optional<double> b2;
};

DerivedScalars derive_scalars(const DimerParams& dimer, const SpectralModel& model);

// Reconstruction energies relevant to the topology: ε_c for collective, ε_l for local.
std::array<double, 2> reconstruction_energies(const DimerParams& dimer, const SpectralModel& model);

struct DimensionlessParams {
    Topology topology{Topology::Collective};
    double eps{0.0};                 // βε
    double v{0.0};                   // βV
    std::array<double, 2> eps_c{};   // βε_{c,j}
    std::array<double, 2> eps_l{};   // βε_{l,j}
    std::array<double, 2> eta{};     // βω_{c,j}
    std::array<double, 2> p{};

    // x = (ε₁ − ε₂)/2, y = (ε₁ + ε₂)/2 of the topology's reconstruction pair
    double x() const;
    double y() const;
};

DimensionlessParams to_dimensionless(const DimerParams& dimer, const SpectralModel& model);

// Inverse map at fixed β. Amplitudes are set to A_p = 1 and the couplings are
// solved from the reconstruction energies (ε_c for collective, ε_l for local).
// Collective solutions take λ₁ ≥ λ₂; a zero sum gives λ₁ = λ₂ = 0.
std::pair<DimerParams, SpectralModel> from_dimensionless(const DimensionlessParams& d, double beta);

using SpectralFn = std::function<double(double)>;

// J(ω) = π ρ(ω) |g(ω)|²
double j_from_frequency_density(const SpectralFn& rho, const SpectralFn& g, double omega);

// J(ω) = (π/2) ω² ∫_{S²} |g(ω, θ, φ)|² dΣ
double j_from_dispersion_3d(const std::function<double(double, double, double)>& g, double omega);

} // namespace dimerdyn
