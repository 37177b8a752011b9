// regimes.cpp — regime inequalities, coupling constraints and time windows

#include "dimerdyn/regimes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "dimerdyn/error.hpp"

namespace dimerdyn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string indexed(const char* base, int j)
{
    return std::string(base) + "_" + std::to_string(j);
}

} // namespace

RegimeCheck grade(std::string name, double small_side, double large_side, double threshold)
{
    RegimeCheck c;
    c.name = std::move(name);
    c.small_side = small_side;
    c.large_side = large_side;
    if (large_side > 0.0)
        c.ratio = std::abs(small_side) / large_side;
    else
        c.ratio = kInf;
    // ratio == threshold counts as satisfied, up to rounding
    if (c.ratio <= threshold * (1.0 + 1e-9))
        c.verdict = Verdict::Satisfied;
    else if (c.ratio < 1.0)
        c.verdict = Verdict::Marginal;
    else
        c.verdict = Verdict::Violated;
    return c;
}

Verdict RegimeReport::overall() const
{
    Verdict worst = Verdict::Satisfied;
    for (const auto& c : checks)
        worst = std::max(worst, c.verdict);
    return worst;
}

std::vector<std::string> RegimeReport::summary() const
{
    std::vector<std::string> out;
    for (const auto& c : checks) {
        char buf[256];
        std::snprintf(buf, sizeof buf, "%s/%s: %s (ratio %.4g = %.6g / %.6g)", regime.c_str(),
                      c.name.c_str(), to_string(c.verdict), c.ratio, c.small_side, c.large_side);
        out.emplace_back(buf);
    }
    return out;
}

RegimeReport check_marcus_regime(const DimerParams& dimer, const SpectralModel& model)
{
    const DerivedScalars s = derive_scalars(dimer, model);
    const double T = dimer.temperature();

    RegimeReport r;
    r.regime = "marcus";
    if (model.topology == Topology::Collective) {
        const double wc = model.bath1.omega_c;
        const auto& ec = *s.eps_rec_collective;
        r.checks.push_back(grade("omega_c<<T", wc, T));
        r.checks.push_back(grade("omega_c^2<<T*(eps_c1+eps_c2)", wc * wc, T * (ec[0] + ec[1])));
    } else {
        const double lam[2] = {dimer.lambda1, dimer.lambda2};
        const double nu[2] = {s.nu1, s.nu2};
        for (int j = 1; j <= 2; ++j) {
            const double wc = model.bath(j).omega_c;
            const double l = lam[j - 1];
            r.checks.push_back(grade(indexed("omega_c<<T", j), wc, T));
            r.checks.push_back(grade(indexed("omega_c^2<<lambda^2*T*nu", j), wc * wc, l * l * T * nu[j - 1]));
        }
    }
    return r;
}

RegimeReport check_high_temp_partial_regime(const DimerParams& dimer, const SpectralModel& model)
{
    const DerivedScalars s = derive_scalars(dimer, model);
    const double T = dimer.temperature();
    const double l1 = dimer.lambda1;
    const double l2 = dimer.lambda2;

    RegimeReport r;
    r.regime = "high_temp_partial";
    if (model.topology == Topology::Collective) {
        const double wc = model.bath1.omega_c;
        const double d = l1 - l2;
        r.checks.push_back(grade("omega_c<<T", wc, T));
        r.checks.push_back(grade("(lambda1-lambda2)^2*nu<<omega_c^2/T", d * d * s.nu1, wc * wc / T));
        const double shift = dimer.epsilon - s.nu1 / std::numbers::pi * (l1 * l1 - l2 * l2);
        r.checks.push_back(grade("|eps-nu/pi*(lambda1^2-lambda2^2)|<<omega_c", shift, wc));
    } else {
        const double lam[2] = {l1, l2};
        const double nu[2] = {s.nu1, s.nu2};
        for (int j = 1; j <= 2; ++j) {
            const double wc = model.bath(j).omega_c;
            r.checks.push_back(grade(indexed("omega_c<<T", j), wc, T));
            r.checks.push_back(grade(indexed("lambda^2*nu<<omega_c^2/T", j),
                                     lam[j - 1] * lam[j - 1] * nu[j - 1], wc * wc / T));
        }
        const double shift = dimer.epsilon - (s.nu1 * l1 * l1 - s.nu2 * l2 * l2) / std::numbers::pi;
        const double wc = std::min(model.bath1.omega_c, model.bath2.omega_c);
        r.checks.push_back(grade("|eps-(nu1*lambda1^2-nu2*lambda2^2)/pi|<<omega_c", shift, wc));
    }
    return r;
}

CouplingBounds coupling_constraints(const DimerParams& dimer, const SpectralModel& model,
                                    double gamma_tilde, double c_const)
{
    if (gamma_tilde < 0.0)
        throw DomainError("gamma_tilde must be nonnegative");
    const DerivedScalars s = derive_scalars(dimer, model);

    CouplingBounds b;
    b.xi = (model.topology == Topology::Collective)
        ? std::abs(dimer.lambda1 - dimer.lambda2)
        : std::max(std::abs(dimer.lambda1), std::abs(dimer.lambda2));
    b.gamma_tilde = gamma_tilde;
    b.theta = std::min(std::abs(s.epsilon_hat), gamma_tilde);

    const double xi = b.xi;
    const double xi6 = std::pow(xi, 6.0);
    const double sep_root = (xi > 0.0) ? std::sqrt(gamma_tilde) / std::pow(xi, 5.0) : kInf;
    b.born = c_const / (1.0 + xi * xi);
    b.separation = c_const * std::min(gamma_tilde / (1.0 + xi6), sep_root);
    b.backreaction = c_const * std::min(b.theta, std::sqrt(b.theta) / (1.0 + xi6));
    b.v0_bound = std::min({b.born, b.separation, b.backreaction});
    b.admissible = std::abs(dimer.V) <= b.v0_bound;
    return b;
}

UsefulnessWindow usefulness_window(double p0, double gamma, double c_const, std::optional<double> p_inf)
{
    if (!(p0 > 0.0) || p0 > 1.0)
        throw DomainError("usefulness window requires 0 < p(0) <= 1");
    if (gamma < 0.0)
        throw DomainError("rate must be nonnegative");

    UsefulnessWindow w;
    w.t_min = c_const / p0;
    w.t_max = (gamma > 0.0) ? 1.0 / gamma : kInf;
    w.degenerate = !(w.t_min < w.t_max);
    if (p_inf) {
        const double pinf = *p_inf;
        if (p0 >= pinf && pinf > 0.0)
            w.t_min_p_inf = c_const / pinf;
        if (p0 < pinf && pinf < 1.0)
            w.t_min_q_inf = c_const / (1.0 - pinf);
        if (std::abs(pinf - 0.5) <= 0.05)
            w.t_min_high_t = 2.0 * c_const;
    }
    return w;
}

const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::Satisfied: return "satisfied";
    case Verdict::Marginal: return "marginal";
    case Verdict::Violated: return "violated";
    }
    return "unknown";
}

} // namespace dimerdyn
