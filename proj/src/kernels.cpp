// kernels.cpp — closed-form and quadrature evaluation of the bath kernels

#include "dimerdyn/kernels.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <unordered_map>

#include "dimerdyn/error.hpp"
#include "dimerdyn/quadrature.hpp"
#include "dimerdyn/specfun.hpp"

namespace dimerdyn {

namespace {

using specfun::cplx;

constexpr std::size_t kCacheCap = std::size_t{1} << 21;

double coth_half(double x)   // coth(x/2)
{
    const double h = 0.5 * x;
    if (h < 1e-4)
        return 1.0 / h + h / 3.0;
    return 1.0 + 2.0 / std::expm1(x);
}

bool is_half_integer(double p)
{
    const double twice = 2.0 * p;
    return twice == std::round(twice);
}

cplx zeta_any(double s, cplx q)
{
    return (s > 1.0) ? specfun::hurwitz_zeta(s, q) : specfun::hurwitz_zeta_continued(s, q);
}

} // namespace

struct KernelSet::Cache {
    mutable std::shared_mutex mutex;
    std::unordered_map<std::uint64_t, KernelValues> table;
    bool enabled{true};
};

KernelSet::KernelSet(double p, double eta, KernelMethod method, bool memoize)
    : p_(p), eta_(eta), method_(method), cache_(std::make_shared<Cache>())
{
    if (!(p > -0.5) || !std::isfinite(p))
        throw DomainError("kernels require p > -1/2");
    if (!(eta > 0.0) || !std::isfinite(eta))
        throw DomainError("kernels require eta > 0");
    cache_->enabled = memoize;
}

KernelSet::KernelSet(const BathSpectrum& bath, double beta, KernelMethod method, bool memoize)
    : KernelSet(bath.p, beta * bath.omega_c, method, memoize)
{
    bath.validate();
    if (!(beta > 0.0))
        throw DomainError("beta must be positive");
    beta_ = beta;
    scale_ = beta * bath.nu();
    physical_ = true;
}

KernelValues KernelSet::at(double tau) const
{
    if (tau < 0.0 || std::isnan(tau))
        throw DomainError("kernels require tau >= 0");
    if (tau == 0.0)
        return {0.0, 0.0};

    const auto key = std::bit_cast<std::uint64_t>(tau);
    if (cache_->enabled) {
        std::shared_lock lock(cache_->mutex);
        auto it = cache_->table.find(key);
        if (it != cache_->table.end())
            return it->second;
    }

    const KernelValues v = (method_ == KernelMethod::ClosedForm) ? closed_form(tau) : quadrature(tau);

    if (cache_->enabled) {
        std::unique_lock lock(cache_->mutex);
        if (cache_->table.size() < kCacheCap)
            cache_->table.emplace(key, v);
    }
    return v;
}

KernelValues KernelSet::closed_form(double tau) const
{
    const double s = 2.0 * p_ + 1.0;
    const double a = 1.0 / eta_;
    const cplx it(0.0, tau);

    KernelValues v;
    v.q1 = std::exp(-s * std::log(cplx(1.0, -eta_ * tau))).imag() / (s * eta_);

    if (p_ == 0.0) {
        const cplx d = specfun::digamma(a + it) - specfun::digamma(cplx(a))
                     + specfun::digamma(a + 1.0 + it) - specfun::digamma(cplx(a + 1.0));
        v.q2 = d.real() / (eta_ * eta_);
    } else {
        const cplx d = zeta_any(s, cplx(a)) - zeta_any(s, a + it)
                     + zeta_any(s, cplx(a + 1.0)) - zeta_any(s, a + 1.0 + it);
        v.q2 = std::pow(eta_, -s) * d.real() / (s * eta_);
    }
    return v;
}

KernelValues KernelSet::quadrature(double tau) const
{
    const double s = 2.0 * p_ + 1.0;
    const double norm = 1.0 / (eta_ * std::tgamma(2.0 * p_ + 2.0));
    const double w = eta_ * tau;
    const double z_max = 50.0 + 8.0 * std::max(p_, 0.0);
    const double panel = std::min(2.0, std::numbers::pi / w);
    const quad::Tolerance tol{1e-11 / norm, 1e-13, 200};

    auto g1 = [&](double z) { return std::exp(-z) * std::sin(w * z); };
    auto g2 = [&](double z) {
        const double h = std::sin(0.5 * w * z);
        return std::exp(-z) * 2.0 * h * h * coth_half(eta_ * z);
    };

    // ∫ z^{2p} g(z) dz; below z0 the weight is absorbed by u = z^{2p+1}.
    auto integrate = [&](auto&& g) {
        double z0 = 0.0;
        double head = 0.0;
        if (!is_half_integer(p_)) {
            z0 = std::min(1.0, panel);
            auto flat = [&](double u) { return g(std::pow(u, 1.0 / s)) / s; };
            head = quad::integrate(flat, 0.0, std::pow(z0, s), tol).value;
        }
        auto full = [&](double z) { return z == 0.0 ? 0.0 : std::pow(z, 2.0 * p_) * g(z); };
        return head + quad::integrate_panels(full, z0, z_max, panel, tol).value;
    };

    return {norm * integrate(g1), norm * integrate(g2)};
}

std::optional<double> KernelSet::q0() const
{
    if (!(p_ > 0.0))
        return std::nullopt;
    const double s = 2.0 * p_ + 1.0;
    const double a = 1.0 / eta_;
    const double sum = specfun::hurwitz_zeta(s, cplx(a)).real() + specfun::hurwitz_zeta(s, cplx(a + 1.0)).real();
    return std::pow(eta_, -s) * sum / (s * eta_);
}

double KernelSet::saturation_time(double tol) const
{
    const auto limit = q0();
    if (!limit)
        throw DomainError("saturation time is undefined for p <= 0 (Q2 grows without bound)");
    if (!(tol > 0.0))
        throw DomainError("saturation tolerance must be positive");
    if (tol >= 1.0)
        return 0.0;

    const double target = *limit;
    auto close = [&](double t) { return std::abs(q2(t) - target) <= tol * target; };

    double hi = 1.0 / eta_;
    while (!(close(hi) && close(2.0 * hi) && close(4.0 * hi))) {
        hi *= 2.0;
        if (hi > 1e12)
            throw ConvergenceError("saturation time search exceeded tau = 1e12");
    }
    double lo = 0.5 * hi;
    if (close(lo))
        lo = 0.0;
    while (hi - lo > 1e-10 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (close(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

double KernelSet::saturation_integral(double z_min) const
{
    if (z_min < 0.0)
        throw DomainError("saturation integral requires z_min >= 0");
    if (z_min == 0.0 && !(p_ > 0.0))
        return std::numeric_limits<double>::infinity();

    const double norm = 1.0 / (eta_ * std::tgamma(2.0 * p_ + 2.0));
    const quad::Tolerance tol{1e-15, 1e-13, 400};
    // z coth(ηz/2) e^{−z} is smooth at 0, leaving the weight z^{2p−1}.
    auto smooth = [&](double z) { return z == 0.0 ? 2.0 / eta_ : z * coth_half(eta_ * z) * std::exp(-z); };

    double low = 0.0;
    if (z_min < 1.0) {
        if (p_ > 0.0) {
            // u = z^{2p}: z^{2p−1} dz = du/(2p)
            const double k = 2.0 * p_;
            auto f = [&](double u) { return smooth(std::pow(u, 1.0 / k)) / k; };
            low = quad::integrate(f, std::pow(z_min, k), 1.0, tol).value;
        } else {
            // v = ln z
            auto f = [&](double v) {
                const double z = std::exp(v);
                return std::pow(z, 2.0 * p_) * smooth(z);
            };
            low = quad::integrate_panels(f, std::log(z_min), 0.0, 1.0, tol).value;
        }
    }
    auto upper = [&](double z) { return std::pow(z, 2.0 * p_) * coth_half(eta_ * z) * std::exp(-z); };
    const double z_max = 60.0 + 8.0 * std::max(p_, 0.0);
    const double high = quad::integrate_panels(upper, std::max(z_min, 1.0), z_max, 4.0, tol).value;
    return norm * (low + high);
}

double KernelSet::Q1(double t) const
{
    if (!physical_)
        throw DomainError("physical kernels need a KernelSet built from a BathSpectrum");
    return scale_ * q1(t / beta_);
}

double KernelSet::Q2(double t) const
{
    if (!physical_)
        throw DomainError("physical kernels need a KernelSet built from a BathSpectrum");
    return scale_ * q2(t / beta_);
}

std::size_t KernelSet::cache_size() const
{
    std::shared_lock lock(cache_->mutex);
    return cache_->table.size();
}

AsymptoticEstimate q_asymptotic(const KernelSet& ks, double tau, KernelRegime regime)
{
    const double p = ks.p();
    const double eta = ks.eta();
    const double s = 2.0 * p + 1.0;
    const double et = eta * tau;
    constexpr double kMuch = 0.1;

    AsymptoticEstimate out;
    auto require = [&](bool ok, const char* what) {
        if (!ok) {
            out.preconditions_hold = false;
            out.warnings.emplace_back(what);
        }
    };

    if (et < 1.0) {
        out.q1 = tau;
    } else {
        const double pi_p = std::numbers::pi * p;
        out.q1 = tau * std::cos(pi_p) / (s * std::pow(et, s + 1.0)) + tau * std::sin(pi_p) / std::pow(et, s + 2.0);
    }

    auto long_time = [&](double power, double prefactor) {
        return prefactor * (1.0 - std::pow(cplx(1.0, et), -power)).real();
    };

    switch (regime) {
    case KernelRegime::ShortTimeHighT:
        require(eta <= kMuch, "eta << 1 not satisfied");
        require(et <= kMuch, "eta*tau << 1 not satisfied");
        out.q2 = tau * tau;
        break;
    case KernelRegime::ShortTime: {
        require(et <= kMuch, "eta*tau << 1 not satisfied");
        const double z = specfun::hurwitz_zeta(2.0 * p + 3.0, cplx(1.0 / eta)).real();
        out.q2 = (p + 1.0) * (2.0 * z - std::pow(eta, 2.0 * p + 3.0)) * tau * tau / std::pow(eta, 2.0 * p + 2.0);
        break;
    }
    case KernelRegime::LongTimeLowT:
        require(eta >= 1.0 / kMuch, "eta >> 1 not satisfied");
        require(et >= 1.0 / kMuch, "eta*tau >> 1 not satisfied");
        require(p > 0.0, "requires p > 0");
        out.q2 = long_time(s, 1.0 / (s * eta));
        break;
    case KernelRegime::LongTimeSubOhmic:
        require(et >= 1.0 / kMuch, "eta*tau >> 1 not satisfied");
        require(p < 0.0, "requires -1/2 < p < 0");
        out.q2 = long_time(2.0 * p, 1.0 / (s * p * eta * eta));
        break;
    case KernelRegime::HighT:
        require(eta <= kMuch, "eta << 1 not satisfied");
        require(tau > 0.0, "requires tau > 0");
        require(p != 0.0, "expression is singular at p = 0");
        out.q2 = long_time(2.0 * p, 1.0 / (s * p * eta * eta));
        break;
    }
    return out;
}

double q0_small_eta(double p, double eta)
{
    if (!(p > 0.0))
        throw DomainError("Q0 is finite only for p > 0");
    return 1.0 / ((2.0 * p + 1.0) * p * eta * eta);
}

double q0_large_eta(double p, double eta)
{
    if (!(p > 0.0))
        throw DomainError("Q0 is finite only for p > 0");
    const double s = 2.0 * p + 1.0;
    return 1.0 / (s * eta) + 2.0 * specfun::riemann_zeta(s) / (s * std::pow(eta, s + 1.0))
         - 2.0 * specfun::riemann_zeta(s + 1.0) / std::pow(eta, s + 2.0);
}

const char* to_string(KernelRegime r)
{
    switch (r) {
    case KernelRegime::ShortTimeHighT: return "short_time_high_t";
    case KernelRegime::ShortTime: return "short_time";
    case KernelRegime::LongTimeLowT: return "long_time_low_t";
    case KernelRegime::LongTimeSubOhmic: return "long_time_sub_ohmic";
    case KernelRegime::HighT: return "high_t";
    }
    return "unknown";
}

const char* to_string(KernelMethod m)
{
    return m == KernelMethod::ClosedForm ? "closed_form" : "quadrature";
}

} // namespace dimerdyn
