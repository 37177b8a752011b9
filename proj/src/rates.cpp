// rates.cpp — Abel-regularized rate integrals and closed-form rate formulas

#include "dimerdyn/rates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "dimerdyn/error.hpp"
#include "dimerdyn/quadrature.hpp"

namespace dimerdyn {

namespace {

constexpr double kPi = std::numbers::pi;

// τ_end ≥ kOscillations/|ω| and ≥ kCorrelation/η so the remainder expansion
// sees many periods of a slowly varying amplitude.
constexpr double kOscillations = 40.0;
constexpr double kCorrelation = 20.0;
constexpr double kTailTol = 1e-10;   // relative size of the last remainder term

std::string format(const char* fmt, double a, double b = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, fmt, a, b);
    return buf;
}

struct Envelope {
    std::vector<Channel> channels;

    void eval(double tau, double& phase, double& decay) const
    {
        phase = 0.0;
        decay = 0.0;
        for (const auto& c : channels) {
            const KernelValues k = c.kernels->at(tau);
            phase += c.weight * k.q1;
            decay += c.weight * k.q2;
        }
    }

    // (a, b) with integrand a(τ) cos ωτ + b(τ) sin ωτ
    void amplitudes(double tau, Quadrature kind, double& a, double& b) const
    {
        double phase, decay;
        eval(tau, phase, decay);
        const double e = std::exp(-decay);
        switch (kind) {
        case Quadrature::Cos:
            a = std::cos(phase) * e;
            b = 0.0;
            break;
        case Quadrature::Sin:
            a = 0.0;
            b = std::cos(phase) * e;
            break;
        case Quadrature::LevelShift:
            a = std::cos(phase) * e;
            b = std::sin(phase) * e;
            break;
        }
    }
};

// ∫_T^∞ [u(τ) cos ωτ + v(τ) sin ωτ] dτ for slowly varying u, v → 0, by
// repeated integration by parts with five-point difference derivatives.
double remainder_expansion(const std::function<void(double, double&, double&)>& uv,
                           double omega, double T, double& last_term)
{
    const double d = 0.02 * T;
    double u[5], v[5];
    for (int k = 0; k < 5; ++k)
        uv(T + (k - 2) * d, u[k], v[k]);

    auto derivs = [d](const double* f, double& f0, double& f1, double& f2, double& f3) {
        f0 = f[2];
        f1 = (-f[4] + 8.0 * f[3] - 8.0 * f[1] + f[0]) / (12.0 * d);
        f2 = (-f[4] + 16.0 * f[3] - 30.0 * f[2] + 16.0 * f[1] - f[0]) / (12.0 * d * d);
        f3 = (f[4] - 2.0 * f[3] + 2.0 * f[1] - f[0]) / (2.0 * d * d * d);
    };
    double u0, u1, u2, u3, v0, v1, v2, v3;
    derivs(u, u0, u1, u2, u3);
    derivs(v, v0, v1, v2, v3);

    const double c = std::cos(omega * T);
    const double s = std::sin(omega * T);
    const double w = omega;
    const double w2 = w * w;
    const double w3 = w2 * w;
    const double w4 = w2 * w2;

    const double cos_part = -u0 * s / w - u1 * c / w2 + u2 * s / w3 + u3 * c / w4;
    const double sin_part = v0 * c / w - v1 * s / w2 - v2 * c / w3 + v3 * s / w4;
    last_term = std::abs(u3 * c / w4) + std::abs(v3 * s / w4);
    return cos_part + sin_part;
}

struct Setup {
    double omega{0.0};
    std::vector<Channel> channels;
};

void check_kernels(const KernelSet& ks, const BathSpectrum& bath, double beta)
{
    const double eta = beta * bath.omega_c;
    if (ks.p() != bath.p || std::abs(ks.eta() - eta) > 1e-12 * eta)
        throw DomainError("kernel set does not match the spectral model at this beta");
}

Setup physical_setup(const DimerParams& dimer, const SpectralModel& model, const KernelBundle& k)
{
    if (!k.site1 || !k.site2)
        throw DomainError("kernel bundle is empty");
    const DerivedScalars s = derive_scalars(dimer, model);
    const double b = dimer.beta;
    check_kernels(*k.site1, model.bath(1), b);
    check_kernels(*k.site2, model.bath(2), b);

    Setup out;
    out.omega = b * s.epsilon_hat;
    if (model.topology == Topology::Collective) {
        const auto& ec = *s.eps_rec_collective;
        out.channels.push_back({k.site1.get(), 0.5 * b * (ec[0] + ec[1])});
    } else {
        out.channels.push_back({k.site1.get(), 0.5 * b * s.eps_rec_local[0]});
        out.channels.push_back({k.site2.get(), 0.5 * b * s.eps_rec_local[1]});
    }
    return out;
}

void append(std::vector<std::string>& to, const std::vector<std::string>& from)
{
    to.insert(to.end(), from.begin(), from.end());
}

} // namespace

KernelBundle KernelBundle::make(const SpectralModel& model, double beta, KernelMethod method)
{
    model.validate();
    KernelBundle b;
    b.site1 = std::make_shared<const KernelSet>(model.bath1, beta, method);
    if (model.identical_baths())
        b.site2 = b.site1;
    else
        b.site2 = std::make_shared<const KernelSet>(model.bath2, beta, method);
    return b;
}

KernelBundle KernelBundle::dimensionless(const DimensionlessParams& d, KernelMethod method)
{
    KernelBundle b;
    b.site1 = std::make_shared<const KernelSet>(d.p[0], d.eta[0], method);
    if (d.topology == Topology::Collective || (d.p[0] == d.p[1] && d.eta[0] == d.eta[1]))
        b.site2 = b.site1;
    else
        b.site2 = std::make_shared<const KernelSet>(d.p[1], d.eta[1], method);
    return b;
}

AbelIntegral abel_integral(double omega, const std::vector<Channel>& channels, Quadrature kind,
                           const RateOptions& opt)
{
    if (!std::isfinite(omega))
        throw DomainError("effective frequency must be finite");

    Envelope env;
    for (const auto& c : channels) {
        if (c.weight < 0.0 || !std::isfinite(c.weight))
            throw DomainError("channel weights must be finite and nonnegative");
        if (c.weight > 0.0) {
            if (!c.kernels)
                throw DomainError("channel without kernels");
            env.channels.push_back(c);
        }
    }

    AbelIntegral out;

    if (env.channels.empty()) {
        // Φ = Δ = 0: Abel limits of ∫cos ωτ and ∫sin ωτ
        out.tail_constant = 1.0;
        if (omega == 0.0) {
            if (kind != Quadrature::Sin)
                out.diagnostics.emplace_back("zero effective frequency with vanishing coupling: integral diverges");
            return out;
        }
        out.value = (kind == Quadrature::Sin) ? 1.0 / omega : 0.0;
        out.tail = out.value;
        return out;
    }

    bool bounded = true;
    double weight_sum = 0.0;
    double eta_min = env.channels.front().kernels->eta();
    double c_exp = 0.0;
    for (const auto& c : env.channels) {
        weight_sum += c.weight;
        eta_min = std::min(eta_min, c.kernels->eta());
        if (auto q0 = c.kernels->q0())
            c_exp += c.weight * *q0;
        else
            bounded = false;
    }
    const double C = bounded ? std::exp(-c_exp) : 0.0;
    out.tail_constant = C;
    const double ca = (kind == Quadrature::Sin) ? 0.0 : C;
    const double cb = (kind == Quadrature::Sin) ? C : 0.0;

    double tau_split = 0.0;
    if (bounded) {
        for (const auto& c : env.channels)
            tau_split = std::max(tau_split, c.kernels->saturation_time(opt.split_tol));
        double phase, decay;
        env.eval(tau_split, phase, decay);
        while (std::abs(phase) > opt.phase_tol && tau_split < opt.tau_limit) {
            tau_split *= 1.5;
            env.eval(tau_split, phase, decay);
        }
        if (std::abs(phase) > opt.phase_tol)
            out.diagnostics.emplace_back(format("phase at tau_split = %.3g still %.3g", tau_split, phase));
    }
    out.split_tau = tau_split;

    const double aw = std::abs(omega);
    double tau_end = std::max(tau_split, kCorrelation / eta_min);
    bool open_ended = false;
    if (aw > 0.0) {
        tau_end = std::max(tau_end, kOscillations / aw);
    } else if (bounded && C > opt.envelope_floor) {
        out.diagnostics.emplace_back(
            "zero effective frequency with saturated decoherence: Abel limit of the tail diverges; reporting the head integral only");
    } else {
        open_ended = true;
        tau_end = opt.tau_limit;
    }

    auto integrand = [&](double tau) {
        double a = 0.0, b = 0.0;
        env.amplitudes(tau, kind, a, b);
        return a * std::cos(omega * tau) + b * std::sin(omega * tau);
    };

    const quad::Tolerance tol{opt.panel_abs_tol, opt.panel_rel_tol, 100};
    const double base_rate = weight_sum + std::sqrt(weight_sum) + 1.0;
    double tau = 0.0;
    double err = 0.0;
    bool stopped = false;
    for (;;) {
        while (tau < tau_end) {
            const double width = kPi / (aw + base_rate / (1.0 + eta_min * tau));
            const double hi = std::min(tau + width, tau_end);
            const quad::Result r = quad::integrate(integrand, tau, hi, tol);
            out.head += r.value;
            err += r.error;
            out.evaluations += r.evaluations;
            tau = hi;

            double phase, decay;
            env.eval(tau, phase, decay);
            const double envelope = std::exp(-decay);
            if (open_ended && envelope < 1e-12) {
                stopped = true;
                break;
            }
            if (envelope < opt.envelope_floor && C < opt.envelope_floor) {
                stopped = true;
                break;
            }
        }
        if (open_ended && !stopped)
            throw ConvergenceError(format("integrand envelope did not decay by tau = %.3g", tau_end));
        if (err > 1e-8)
            throw ConvergenceError(format("head integral error estimate %.3g exceeds 1e-8", err));

        if (!stopped && aw > 0.0) {
            const double T = tau;
            const double constant = ca * (-std::sin(omega * T) / omega) + cb * (std::cos(omega * T) / omega);
            auto uv = [&](double t, double& u, double& v) {
                double a = 0.0, b = 0.0;
                env.amplitudes(t, kind, a, b);
                u = a - ca;
                v = b - cb;
            };
            double last = 0.0;
            const double rest = remainder_expansion(uv, omega, T, last);
            out.evaluations += 5;
            out.tail = constant + rest;
            if (last > kTailTol * std::max(std::abs(out.head + out.tail), 1e-6)) {
                if (2.0 * T <= opt.tau_limit) {
                    tau_end = 2.0 * T;   // push the split outward and keep integrating
                    continue;
                }
                out.diagnostics.emplace_back(format("tail expansion truncation term %.3g at tau = %.4g", last, T));
            }
        }
        break;
    }
    out.split_tau = std::max(out.split_tau, 0.0);
    out.value = out.head + out.tail;
    return out;
}

RateReport gamma_exact(const DimerParams& dimer, const SpectralModel& model,
                       const KernelBundle& kernels, const RateOptions& opt)
{
    const Setup s = physical_setup(dimer, model, kernels);
    const double scale = dimer.V * dimer.V * dimer.beta;

    const AbelIntegral ic = abel_integral(s.omega, s.channels, Quadrature::Cos, opt);
    const AbelIntegral is = abel_integral(s.omega, s.channels, Quadrature::Sin, opt);

    RateReport r;
    r.method = RateMethod::ExactIntegral;
    r.gamma = scale * ic.value;
    r.lamb_shift = 0.5 * scale * is.value;
    r.tail_contribution = scale * ic.tail;
    r.split_tau = ic.split_tau;
    r.evaluations = ic.evaluations + is.evaluations;
    append(r.diagnostics, ic.diagnostics);
    if (r.gamma < -1e-8 * std::max(scale, 1e-300))
        r.diagnostics.emplace_back(format("negative rate %.6g beyond quadrature tolerance", r.gamma));
    return r;
}

double lamb_shift(const DimerParams& dimer, const SpectralModel& model,
                  const KernelBundle& kernels, const RateOptions& opt)
{
    const Setup s = physical_setup(dimer, model, kernels);
    const AbelIntegral is = abel_integral(s.omega, s.channels, Quadrature::Sin, opt);
    return 0.5 * dimer.V * dimer.V * dimer.beta * is.value;
}

DimensionlessRate rate_dimensionless(const DimensionlessParams& d, const KernelBundle& kernels,
                                     const RateOptions& opt)
{
    std::vector<Channel> ch;
    if (d.topology == Topology::Collective) {
        ch.push_back({kernels.site1.get(), d.y()});
    } else {
        ch.push_back({kernels.site1.get(), 0.5 * d.eps_l[0]});
        ch.push_back({kernels.site2.get(), 0.5 * d.eps_l[1]});
    }
    const double omega = d.eps - d.x();

    DimensionlessRate out;
    out.cos_part = abel_integral(omega, ch, Quadrature::Cos, opt);
    out.gamma_over_beta_v2 = out.cos_part.value;
    out.lamb_over_beta_v2 = 0.5 * abel_integral(omega, ch, Quadrature::Sin, opt).value;
    return out;
}

double gamma_marcus_dimensionless(double eps, double eps1, double eps2, double beta, double V)
{
    const double sum = eps1 + eps2;
    if (!(sum > 0.0))
        throw DomainError("generalized Marcus formula needs eps1 + eps2 > 0");
    const double pre = beta * 0.25 * V * V * std::sqrt(2.0 * kPi / sum);
    return pre * (std::exp(-(eps - eps1) * (eps - eps1) / (2.0 * sum))
                  + std::exp(-(eps + eps2) * (eps + eps2) / (2.0 * sum)));
}

RateReport gamma_marcus_generalized(const DimerParams& dimer, const SpectralModel& model)
{
    const auto e = reconstruction_energies(dimer, model);
    const double b = dimer.beta;
    const double sum = e[0] + e[1];
    if (!(sum > 0.0))
        throw DomainError("generalized Marcus formula needs a positive reconstruction-energy sum");

    RateReport r;
    r.method = RateMethod::GeneralizedMarcus;
    r.gamma = gamma_marcus_dimensionless(b * dimer.epsilon, b * e[0], b * e[1], b, dimer.V);
    const RegimeReport reg = check_marcus_regime(dimer, model);
    append(r.diagnostics, reg.summary());
    if (model.identical_baths()) {
        const double bound = marcus_upper_bound(dimer.V, model.bath1.omega_c);
        if (r.gamma > bound)
            r.diagnostics.emplace_back(format("rate %.6g exceeds 2*sqrt(2pi)(V/2)^2/omega_c = %.6g", r.gamma, bound));
    }
    return r;
}

RateReport gamma_marcus_standard(const DimerParams& dimer, double eps_rec)
{
    if (!(eps_rec > 0.0))
        throw DomainError("standard Marcus formula needs a positive reorganization energy");
    const double b = dimer.beta;
    const double pre = 0.25 * dimer.V * dimer.V * std::sqrt(kPi * b / eps_rec);
    const double lo = dimer.epsilon - eps_rec;
    const double hi = dimer.epsilon + eps_rec;

    RateReport r;
    r.method = RateMethod::StandardMarcus;
    r.gamma_classic = pre * std::exp(-b * lo * lo / (4.0 * eps_rec));
    r.gamma = *r.gamma_classic + pre * std::exp(-b * hi * hi / (4.0 * eps_rec));
    return r;
}

RateReport gamma_high_temp_partial(const DimerParams& dimer, const SpectralModel& model)
{
    const DerivedScalars s = derive_scalars(dimer, model);
    if (!s.b1 || !s.b2)
        throw DomainError("high-temperature partial-decoherence rate requires p > 0");
    const double T = dimer.temperature();
    const double l1 = dimer.lambda1;
    const double l2 = dimer.lambda2;

    RateReport r;
    r.method = RateMethod::HighTempPartial;
    double exponent, omega_c;
    if (model.topology == Topology::Collective) {
        exponent = 2.0 * T * *s.b1 / kPi * (l1 - l2) * (l1 - l2);
        omega_c = model.bath1.omega_c;
    } else {
        exponent = 2.0 * T / kPi * (*s.b1 * l1 * l1 + *s.b2 * l2 * l2);
        omega_c = 0.5 * (model.bath1.omega_c + model.bath2.omega_c);
        if (model.bath1.omega_c != model.bath2.omega_c)
            r.diagnostics.emplace_back(format("local cutoffs differ (%.6g, %.6g); using their mean",
                                              model.bath1.omega_c, model.bath2.omega_c));
    }
    r.gamma = -dimer.V * dimer.V / omega_c * std::expm1(-exponent);
    append(r.diagnostics, check_high_temp_partial_regime(dimer, model).summary());
    return r;
}

LevelShiftPair level_shift_values(const DimerParams& dimer, const SpectralModel& model,
                                  const KernelBundle& kernels, const RateOptions& opt)
{
    const Setup s = physical_setup(dimer, model, kernels);
    LevelShiftPair out;
    out.beta_eps_hat = s.omega;
    out.forward = abel_integral(s.omega, s.channels, Quadrature::LevelShift, opt).value;
    out.backward = abel_integral(-s.omega, s.channels, Quadrature::LevelShift, opt).value;
    return out;
}

RateReport gamma_from_level_shift(const DimerParams& dimer, const SpectralModel& model,
                                  const KernelBundle& kernels, const RateOptions& opt)
{
    const Setup s = physical_setup(dimer, model, kernels);
    const AbelIntegral x = abel_integral(s.omega, s.channels, Quadrature::LevelShift, opt);

    RateReport r;
    r.method = RateMethod::LevelShiftTrace;
    r.gamma = 0.5 * dimer.V * dimer.V * dimer.beta * (1.0 + std::exp(-s.omega)) * x.value;
    r.tail_contribution = 0.5 * dimer.V * dimer.V * dimer.beta * (1.0 + std::exp(-s.omega)) * x.tail;
    r.split_tau = x.split_tau;
    r.evaluations = x.evaluations;
    append(r.diagnostics, x.diagnostics);
    return r;
}

double marcus_upper_bound(double V, double omega_c)
{
    if (!(omega_c > 0.0))
        throw DomainError("omega_c must be positive");
    return 2.0 * std::sqrt(2.0 * kPi) * 0.25 * V * V / omega_c;
}

const char* to_string(RateMethod m)
{
    switch (m) {
    case RateMethod::ExactIntegral: return "exact_integral";
    case RateMethod::GeneralizedMarcus: return "generalized_marcus";
    case RateMethod::StandardMarcus: return "standard_marcus";
    case RateMethod::HighTempPartial: return "high_temp_partial";
    case RateMethod::LevelShiftTrace: return "level_shift_trace";
    }
    return "unknown";
}

} // namespace dimerdyn
