// dynamics.cpp — time-domain observables of the dimer

#include "dimerdyn/dynamics.hpp"

#include <cmath>

#include "dimerdyn/error.hpp"

namespace dimerdyn {

namespace {

struct Weights {
    double phase1, phase2;   // multipliers of 𝒬₁ at sites 1, 2 in the D(t) phase
    double decay1, decay2;   // multipliers of 𝒬₂
};

Weights decoherence_weights(const DimerParams& dimer, const SpectralModel& model)
{
    const DimensionlessParams d = to_dimensionless(dimer, model);
    if (model.topology == Topology::Collective)
        return {d.x(), 0.0, d.y(), 0.0};
    return {0.5 * d.eps_l[0], -0.5 * d.eps_l[1], 0.5 * d.eps_l[0], 0.5 * d.eps_l[1]};
}

void phase_and_decay(const Weights& w, const KernelBundle& k, double tau, double& phase, double& decay)
{
    const KernelValues a = k.site1->at(tau);
    phase = w.phase1 * a.q1;
    decay = w.decay1 * a.q2;
    if (w.phase2 != 0.0 || w.decay2 != 0.0) {
        const KernelValues b = k.site2->at(tau);
        phase += w.phase2 * b.q1;
        decay += w.decay2 * b.q2;
    }
}

void check_times(const std::vector<double>& times)
{
    for (double t : times)
        if (!(t >= 0.0) || !std::isfinite(t))
            throw DomainError("time grid must be finite and nonnegative");
}

} // namespace

double equilibrium_population(double beta_eps_hat)
{
    if (beta_eps_hat >= 0.0) {
        const double e = std::exp(-beta_eps_hat);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(beta_eps_hat));
}

double equilibrium_population(const DimerParams& dimer, const SpectralModel& model)
{
    return equilibrium_population(dimer.beta * derive_scalars(dimer, model).epsilon_hat);
}

Trajectory population_trajectory(double p_inf, double gamma, double p0, const std::vector<double>& times)
{
    if (gamma < 0.0)
        throw DomainError("rate must be nonnegative");
    if (!(p0 >= 0.0 && p0 <= 1.0))
        throw DomainError("initial population must lie in [0, 1]");
    check_times(times);

    Trajectory tr;
    tr.times = times;
    tr.p0 = p0;
    tr.p.reserve(times.size());
    for (double t : times)
        tr.p.push_back(t == 0.0 ? p0 : p_inf + std::exp(-gamma * t) * (p0 - p_inf));
    return tr;
}

cplx decoherence_factor(const DimerParams& dimer, const SpectralModel& model,
                        const KernelBundle& kernels, double t)
{
    if (t < 0.0)
        throw DomainError("time must be nonnegative");
    const Weights w = decoherence_weights(dimer, model);
    double phase, decay;
    phase_and_decay(w, kernels, t / dimer.beta, phase, decay);
    return std::polar(std::exp(-decay), -phase);
}

double gamma_of_tau(const DimerParams& dimer, const SpectralModel& model,
                    const KernelBundle& kernels, double tau)
{
    const Weights w = decoherence_weights(dimer, model);
    double phase, decay;
    phase_and_decay(w, kernels, tau, phase, decay);
    return decay;
}

std::optional<double> gamma_infinity(const DimerParams& dimer, const SpectralModel& model,
                                     const KernelBundle& kernels)
{
    const Weights w = decoherence_weights(dimer, model);
    double total = 0.0;
    const std::pair<double, const KernelSet*> terms[2] = {{w.decay1, kernels.site1.get()},
                                                          {w.decay2, kernels.site2.get()}};
    for (const auto& [weight, ks] : terms) {
        if (weight == 0.0)
            continue;
        const auto q0 = ks->q0();
        if (!q0)
            return std::nullopt;
        total += weight * *q0;
    }
    return total;
}

Trajectory coherence_trajectory(const DimerParams& dimer, const SpectralModel& model,
                                double gamma, double lamb_shift, const KernelBundle& kernels,
                                cplx rho12_0, const std::vector<double>& times)
{
    check_times(times);
    if (gamma < 0.0)
        throw DomainError("rate must be nonnegative");

    const double eps_hat = derive_scalars(dimer, model).epsilon_hat;
    const Weights w = decoherence_weights(dimer, model);
    const bool exact = (dimer.V == 0.0);
    const double arg0 = std::arg(rho12_0);
    const double mod0 = std::abs(rho12_0);

    double saturation = 1.0;
    if (!exact) {
        const auto g_inf = gamma_infinity(dimer, model, kernels);
        if (!g_inf)
            throw RegimeError("Gamma_infinity diverges (p <= 0 with nonzero coupling difference); "
                              "use V = 0 for the exact decoherence law or report the modulus only");
        saturation = std::exp(-*g_inf);
    }

    Trajectory tr;
    tr.times = times;
    tr.rho12_0 = rho12_0;
    tr.label = exact ? "exact (V = 0)" : "main term";
    for (double t : times) {
        double phase, decay;
        phase_and_decay(w, kernels, t / dimer.beta, phase, decay);
        tr.d_factor.push_back(std::exp(-decay));
        tr.gamma_of_tau.push_back(decay);
        if (exact) {
            tr.envelope.push_back(1.0);
            tr.rho12_abs.push_back(mod0 * std::exp(-decay));
            tr.rho12_phase.push_back(arg0 - eps_hat * t - phase);
        } else {
            const double env = std::exp(-0.5 * gamma * t);
            tr.envelope.push_back(env);
            tr.rho12_abs.push_back(mod0 * env * saturation);
            tr.rho12_phase.push_back(arg0 - (eps_hat + lamb_shift) * t);
        }
    }
    return tr;
}

} // namespace dimerdyn
