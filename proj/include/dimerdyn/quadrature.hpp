// quadrature.hpp — globally adaptive Gauss–Kronrod (G10/K21) integration

#pragma once

#include <cstddef>
#include <functional>

namespace dimerdyn::quad {

struct Result {
    double value{0.0};
    double error{0.0};       // Kronrod–Gauss error estimate (QUADPACK scaling)
    double l1{0.0};          // ∫|f| estimate, useful for relative tolerances
    std::size_t evaluations{0};
    bool converged{true};
};

struct Tolerance {
    double abs{1e-12};
    double rel{1e-12};
    std::size_t max_subdivisions{200};
};

using Integrand = std::function<double(double)>;

// ∫_a^b f over a finite interval; bisects the worst subinterval until
// error ≤ max(abs, rel·|value|) or the subdivision budget is spent.
Result integrate(const Integrand& f, double a, double b, const Tolerance& tol = {});

// One non-adaptive K21 pass over [a, b].
Result kronrod21(const Integrand& f, double a, double b);

// Integrates over [a, b] split into panels of width ≤ panel, each panel
// handled adaptively with its share of the absolute tolerance. Suited to
// oscillatory integrands when panel is about a half period.
Result integrate_panels(const Integrand& f, double a, double b, double panel,
                        const Tolerance& tol = {});

} // namespace dimerdyn::quad
