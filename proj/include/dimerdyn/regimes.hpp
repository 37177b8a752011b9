// regimes.hpp — validity diagnostics for the approximate rate formulas

#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "dimerdyn/spectral.hpp"

namespace dimerdyn {

// "a ≪ b" is graded by ratio = a/b: Satisfied at ≤ threshold, Violated at ≥ 1.
enum class Verdict { Satisfied, Marginal, Violated };

inline constexpr double kMuchLessThreshold = 0.1;

struct RegimeCheck {
    std::string name;
    double small_side{0.0};
    double large_side{0.0};
    double ratio{0.0};
    Verdict verdict{Verdict::Satisfied};
};

RegimeCheck grade(std::string name, double small_side, double large_side,
                  double threshold = kMuchLessThreshold);

struct RegimeReport {
    std::string regime;
    std::vector<RegimeCheck> checks;

    Verdict overall() const;   // worst verdict over all checks
    std::vector<std::string> summary() const;
};

// ω_c ≪ T and ω_c² ≪ T(ε₁ + ε₂); per reservoir for the local topology.
RegimeReport check_marcus_regime(const DimerParams& dimer, const SpectralModel& model);

// ω_c ≪ T, (λ₁−λ₂)²ν ≪ ω_c²/T and |ε − (ν/π)(λ₁²−λ₂²)| ≪ ω_c (collective);
// the local version uses λ_j²ν_j per reservoir and ν_j in the last check.
RegimeReport check_high_temp_partial_regime(const DimerParams& dimer, const SpectralModel& model);

struct CouplingBounds {
    double xi{0.0};            // |λ₁−λ₂| (collective) or max |λ_j| (local)
    double theta{0.0};         // min{|ε̂|, γ̃}
    double gamma_tilde{0.0};
    double born{0.0};          // C (1+ξ²)^{−1}
    double separation{0.0};    // C min{γ̃ (1+ξ⁶)^{−1}, √γ̃ ξ^{−5}}
    double backreaction{0.0};  // C min{θ, √θ (1+ξ⁶)^{−1}}
    double v0_bound{0.0};
    bool admissible{false};    // |V| ≤ v0_bound
};

// gamma_tilde = γ/V², i.e. the rate with V factored out.
CouplingBounds coupling_constraints(const DimerParams& dimer, const SpectralModel& model,
                                    double gamma_tilde, double c_const = 1.0);

struct UsefulnessWindow {
    double t_min{0.0};
    double t_max{std::numeric_limits<double>::infinity()};
    bool degenerate{false};
    std::optional<double> t_min_p_inf;   // C/p∞, when p(0) ≥ p∞
    std::optional<double> t_min_q_inf;   // C/q∞, when p(0) < p∞
    std::optional<double> t_min_high_t;  // 2C, when p∞ ≈ 1/2
};

// C/p(0) ≪ t ≪ 1/γ. A zero rate gives t_max = ∞.
UsefulnessWindow usefulness_window(double p0, double gamma, double c_const,
                                   std::optional<double> p_inf = std::nullopt);

const char* to_string(Verdict v);

} // namespace dimerdyn
