// noise_oracle.cpp — spectral synthesis of Gaussian dephasing paths

#include "dimerdyn/noise_oracle.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <thread>

#include <Eigen/Dense>

#include "dimerdyn/error.hpp"
#include "dimerdyn/kernels.hpp"
#include "dimerdyn/quadrature.hpp"

namespace dimerdyn {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Path i draws from its own stream, so the path set does not depend on how
// blocks are scheduled.
std::mt19937_64 path_stream(std::uint64_t seed, std::size_t i)
{
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(i)));
}

double pairwise_sum(const double* x, std::size_t n)
{
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            s += x[i];
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

double pairwise_sum(const std::vector<double>& x) { return pairwise_sum(x.data(), x.size()); }

double coth_half(double x)
{
    return x < 1e-4 ? 2.0 / x + x / 6.0 : 1.0 + 2.0 / std::expm1(x);
}

struct Synthesis {
    Eigen::VectorXd z;       // frequencies / ω_c
    Eigen::VectorXd amp;     // s_k, so that Var φ(τ) = Σ s_k² · 2(1 − cos ηz_kτ)
};

Synthesis build_synthesis(const NoiseSimConfig& cfg)
{
    const std::size_t n = cfg.n_freq;
    const double p = cfg.bath.p;
    const double eta = cfg.eta();
    const double h = std::log(cfg.f_max / cfg.f_min) / static_cast<double>(n - 1);
    const double norm = cfg.weight() / (eta * std::tgamma(2.0 * p + 2.0));

    Synthesis s;
    s.z.resize(static_cast<Eigen::Index>(n));
    s.amp.resize(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) {
        const double z = cfg.f_min * std::exp(h * static_cast<double>(k));
        const double w = z * h * ((k == 0 || k + 1 == n) ? 0.5 : 1.0);
        const double var = norm * w * std::pow(z, 2.0 * p) * std::exp(-z) * coth_half(eta * z);
        if (!std::isfinite(var) || var < 0.0)
            throw DomainError("covariance synthesis: non-finite spectral weight at z = " + std::to_string(z));
        const auto i = static_cast<Eigen::Index>(k);
        s.z[i] = z;
        s.amp[i] = std::sqrt(var);
    }
    return s;
}

std::vector<double> time_grid(const NoiseSimConfig& cfg)
{
    const auto n = static_cast<std::size_t>(std::floor(cfg.t_max / cfg.dt + 1e-9)) + 1;
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i)
        t[i] = cfg.dt * static_cast<double>(i);
    return t;
}

// Runs fn(block_index) for every block on cfg.threads workers.
template <class Fn>
void for_each_block(std::size_t n_blocks, unsigned threads, Fn&& fn)
{
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n_blocks)));
    if (workers == 1) {
        for (std::size_t b = 0; b < n_blocks; ++b)
            fn(b);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t b; (b = next.fetch_add(1)) < n_blocks;)
                fn(b);
        });
    for (auto& t : pool)
        t.join();
}

void draw_amplitudes(const NoiseSimConfig& cfg, std::size_t first, Eigen::Index cols, Eigen::Index k,
                     Eigen::MatrixXd& a, Eigen::MatrixXd& b)
{
    a.resize(k, cols);
    b.resize(k, cols);
    std::normal_distribution<double> normal;
    for (Eigen::Index j = 0; j < cols; ++j) {
        auto gen = path_stream(cfg.seed, first + static_cast<std::size_t>(j));
        for (Eigen::Index i = 0; i < k; ++i)
            a(i, j) = normal(gen);
        for (Eigen::Index i = 0; i < k; ++i)
            b(i, j) = normal(gen);
    }
}

} // namespace

double NoiseSimConfig::weight() const
{
    return 4.0 * lambda * lambda * beta * bath.nu() / std::numbers::pi;
}

void NoiseSimConfig::validate() const
{
    bath.validate();
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw DomainError("beta must be positive");
    if (n_paths < 100)
        throw DomainError("n_paths must be at least 100");
    if (!(dt > 0.0) || dt > 0.1 * std::min(1.0, 1.0 / eta()) * (1.0 + 1e-12))
        throw DomainError("dt must satisfy 0 < dt <= 0.1 min(1, 1/eta)");
    if (!(t_max >= dt))
        throw DomainError("t_max must be at least dt");
    if (n_freq < 2 || !(f_min > 0.0) || !(f_max > f_min))
        throw DomainError("frequency grid needs n_freq >= 2 and 0 < f_min < f_max");
    if (block == 0)
        throw DomainError("block must be positive");
    if (!std::isfinite(lambda))
        throw DomainError("lambda must be finite");
}

NoiseSimResult simulate_dephasing(const NoiseSimConfig& cfg)
{
    cfg.validate();
    const Synthesis syn = build_synthesis(cfg);
    const double eta = cfg.eta();

    NoiseSimResult r;
    r.tau = time_grid(cfg);
    const auto nt = static_cast<Eigen::Index>(r.tau.size());
    const auto nk = syn.z.size();

    Eigen::MatrixXd sin_basis(nt, nk), cos_basis(nt, nk);
    for (Eigen::Index i = 0; i < nt; ++i)
        for (Eigen::Index k = 0; k < nk; ++k) {
            const double arg = eta * syn.z[k] * r.tau[static_cast<std::size_t>(i)];
            const double half = std::sin(0.5 * arg);
            sin_basis(i, k) = syn.amp[k] * std::sin(arg);
            cos_basis(i, k) = syn.amp[k] * 2.0 * half * half;
        }

    const std::size_t n_blocks = (cfg.n_paths + cfg.block - 1) / cfg.block;
    // per block, per time: Σcos, Σcos², Σsin, Σsin²
    std::vector<std::array<std::vector<double>, 4>> partial(n_blocks);

    for_each_block(n_blocks, cfg.threads, [&](std::size_t blk) {
        const std::size_t first = blk * cfg.block;
        const auto cols = static_cast<Eigen::Index>(std::min(cfg.block, cfg.n_paths - first));
        Eigen::MatrixXd a, b;
        draw_amplitudes(cfg, first, cols, nk, a, b);
        Eigen::MatrixXd phase = sin_basis * a;
        phase.noalias() += cos_basis * b;

        auto& out = partial[blk];
        for (auto& v : out)
            v.resize(static_cast<std::size_t>(nt));
        std::vector<double> c(static_cast<std::size_t>(cols)), c2(c.size()), s(c.size()), s2(c.size());
        for (Eigen::Index i = 0; i < nt; ++i) {
            for (Eigen::Index j = 0; j < cols; ++j) {
                const double ph = phase(i, j);
                const auto u = static_cast<std::size_t>(j);
                c[u] = std::cos(ph);
                s[u] = std::sin(ph);
                c2[u] = c[u] * c[u];
                s2[u] = s[u] * s[u];
            }
            const auto ui = static_cast<std::size_t>(i);
            out[0][ui] = pairwise_sum(c);
            out[1][ui] = pairwise_sum(c2);
            out[2][ui] = pairwise_sum(s);
            out[3][ui] = pairwise_sum(s2);
        }
    });

    const KernelSet kernels(cfg.bath.p, eta);
    const double w = cfg.weight();
    const double n = static_cast<double>(cfg.n_paths);
    std::vector<double> acc(n_blocks);
    auto total = [&](int m, std::size_t i) {
        for (std::size_t b = 0; b < n_blocks; ++b)
            acc[b] = partial[b][static_cast<std::size_t>(m)][i];
        return pairwise_sum(acc);
    };
    auto std_error = [&](double sum, double sum_sq) {
        const double mean = sum / n;
        const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
        return std::sqrt(var / n);
    };

    for (std::size_t i = 0; i < r.tau.size(); ++i) {
        const double sc = total(0, i), sc2 = total(1, i), ss = total(2, i), ss2 = total(3, i);
        r.mean_re.push_back(sc / n);
        r.mean_im.push_back(-ss / n);
        r.se_re.push_back(std_error(sc, sc2));
        r.se_im.push_back(std_error(ss, ss2));
        r.target.push_back(w == 0.0 ? 1.0 : std::exp(-w * kernels.q2(r.tau[i])));
        const auto ii = static_cast<Eigen::Index>(i);
        r.synthesized_target.push_back(std::exp(-0.5 * (cos_basis.row(ii).array() * cos_basis.row(ii).array()
                                                         + sin_basis.row(ii).array() * sin_basis.row(ii).array()).sum()));
    }
    return r;
}

double noise_covariance(const NoiseSimConfig& cfg, double lag_tau)
{
    const double p = cfg.bath.p;
    const double eta = cfg.eta();
    const double norm = cfg.weight() * eta / std::tgamma(2.0 * p + 2.0);
    if (norm == 0.0)
        return 0.0;
    auto f = [&](double z) {
        if (z == 0.0)
            return 0.0;
        return std::pow(z, 2.0 * p + 2.0) * std::exp(-z) * coth_half(eta * z) * std::cos(eta * z * lag_tau);
    };
    const double panel = lag_tau > 0.0 ? std::min(2.0, std::numbers::pi / (eta * lag_tau)) : 2.0;
    const double z_max = 60.0 + 8.0 * std::max(p, 0.0);
    const auto res = quad::integrate_panels(f, 0.0, z_max, panel, {1e-13, 1e-11, 200});
    return norm * res.value;
}

std::vector<CovarianceCheck> check_covariance(const NoiseSimConfig& cfg, const std::vector<int>& lags)
{
    cfg.validate();
    const Synthesis syn = build_synthesis(cfg);
    const double eta = cfg.eta();
    const auto nk = syn.z.size();
    const auto nl = static_cast<Eigen::Index>(lags.size());

    // rows: χ(0) and χ(L dt) for each lag; χ = dφ/dτ
    Eigen::MatrixXd cos_rows(nl + 1, nk), sin_rows(nl + 1, nk);
    for (Eigen::Index k = 0; k < nk; ++k) {
        const double rate = syn.amp[k] * eta * syn.z[k];
        cos_rows(0, k) = rate;
        sin_rows(0, k) = 0.0;
        for (Eigen::Index l = 0; l < nl; ++l) {
            const double arg = eta * syn.z[k] * cfg.dt * lags[static_cast<std::size_t>(l)];
            cos_rows(l + 1, k) = rate * std::cos(arg);
            sin_rows(l + 1, k) = rate * std::sin(arg);
        }
    }

    const std::size_t n_blocks = (cfg.n_paths + cfg.block - 1) / cfg.block;
    std::vector<std::vector<double>> sums(n_blocks), sums_sq(n_blocks);
    for_each_block(n_blocks, cfg.threads, [&](std::size_t blk) {
        const std::size_t first = blk * cfg.block;
        const auto cols = static_cast<Eigen::Index>(std::min(cfg.block, cfg.n_paths - first));
        Eigen::MatrixXd a, b;
        draw_amplitudes(cfg, first, cols, nk, a, b);
        Eigen::MatrixXd chi = cos_rows * a;
        chi.noalias() += sin_rows * b;
        sums[blk].resize(lags.size());
        sums_sq[blk].resize(lags.size());
        std::vector<double> prod(static_cast<std::size_t>(cols)), prod2(prod.size());
        for (Eigen::Index l = 0; l < nl; ++l) {
            for (Eigen::Index j = 0; j < cols; ++j) {
                const double v = chi(0, j) * chi(l + 1, j);
                prod[static_cast<std::size_t>(j)] = v;
                prod2[static_cast<std::size_t>(j)] = v * v;
            }
            sums[blk][static_cast<std::size_t>(l)] = pairwise_sum(prod);
            sums_sq[blk][static_cast<std::size_t>(l)] = pairwise_sum(prod2);
        }
    });

    const double n = static_cast<double>(cfg.n_paths);
    std::vector<CovarianceCheck> out;
    std::vector<double> acc(n_blocks), acc2(n_blocks);
    for (std::size_t l = 0; l < lags.size(); ++l) {
        for (std::size_t b = 0; b < n_blocks; ++b) {
            acc[b] = sums[b][l];
            acc2[b] = sums_sq[b][l];
        }
        const double mean = pairwise_sum(acc) / n;
        const double var = std::max(0.0, (pairwise_sum(acc2) - n * mean * mean) / (n - 1.0));
        CovarianceCheck c;
        c.lag_tau = cfg.dt * lags[l];
        c.sample = mean;
        c.standard_error = std::sqrt(var / n);
        c.target = noise_covariance(cfg, c.lag_tau);
        out.push_back(c);
    }
    return out;
}

double fraction_within(const NoiseSimResult& r, double k)
{
    if (r.tau.empty())
        return 0.0;
    std::size_t ok = 0;
    for (std::size_t i = 0; i < r.tau.size(); ++i) {
        const double dev = std::abs(r.mean_re[i] - r.target[i]);
        if (r.se_re[i] == 0.0 ? dev == 0.0 : dev <= k * r.se_re[i])
            ++ok;
    }
    return static_cast<double>(ok) / static_cast<double>(r.tau.size());
}

} // namespace dimerdyn
