// acceptance.cpp — one PASS/FAIL line per acceptance criterion

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "dimerdyn/dynamics.hpp"
#include "dimerdyn/error.hpp"
#include "dimerdyn/kernels.hpp"
#include "dimerdyn/noise_oracle.hpp"
#include "dimerdyn/rates.hpp"
#include "dimerdyn/regimes.hpp"
#include "dimerdyn/runner.hpp"

using namespace dimerdyn;
namespace fs = std::filesystem;

namespace {

// tolerances
constexpr double kKernelRel = 1e-6;
constexpr double kKernelAbs = 1e-9;
constexpr double kQ0Rel = 0.03;
constexpr double kMarcusAgree = 0.10;
constexpr double kMarcusFail = 0.25;
constexpr double kNullScale = 1e-10;
constexpr double kBoundaryRel = 1e-6;
constexpr double kLsoRel = 1e-6;
constexpr double kAbelRel = 1e-5;
constexpr double kBoundRel = 0.01;
constexpr double kSlopeAbs = 1e-10;
constexpr double kGammaInfRel = 1e-8;
constexpr double kMcFraction = 0.95;

// reference dimer: ε = 150, V = 25, T = 37.88 (ps⁻¹)
constexpr double kEps = 150.0;
constexpr double kV = 25.0;
constexpr double kT = 37.88;
constexpr double kBeta = 1.0 / kT;

struct Outcome {
    bool pass{false};
    std::string detail;
};

struct Criterion {
    const char* name;
    bool known_deviation;
    std::function<Outcome()> check;
};

std::string fmt(const char* f, double a = 0, double b = 0, double c = 0, double d = 0)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

std::vector<double> linspace(double a, double b, int n)
{
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i)
        v[i] = (n == 1) ? a : a + (b - a) * i / (n - 1);
    return v;
}

DimensionlessParams collective(double eps, double x, double y, double eta, double p, double v = 1.0)
{
    DimensionlessParams d;
    d.topology = Topology::Collective;
    d.eps = eps;
    d.v = v;
    d.eps_c = {y + x, y - x};
    d.eta = {eta, eta};
    d.p = {p, p};
    return d;
}

// ------------------------------------------------------------------ kernels

Outcome kernel_closed_form()
{
    const auto taus = linspace(0.0, 50.0, 200);
    double worst = 0.0;
    std::string where;
    for (double p : {-0.25, 0.5, 1.5})
        for (double eta : {0.1, 1.0, 5.0}) {
            const KernelSet cf(p, eta, KernelMethod::ClosedForm, false);
            const KernelSet qd(p, eta, KernelMethod::Quadrature, false);
            for (double tau : taus) {
                const KernelValues a = cf.at(tau), b = qd.at(tau);
                const double e1 = std::abs(a.q1 - b.q1) / std::max(kKernelRel * std::abs(b.q1), kKernelAbs);
                const double e2 = std::abs(a.q2 - b.q2) / std::max(kKernelRel * std::abs(b.q2), kKernelAbs);
                if (std::max(e1, e2) > worst) {
                    worst = std::max(e1, e2);
                    where = fmt("p=%g eta=%g tau=%.4g", p, eta, tau);
                }
            }
        }
    return {worst <= 1.0, fmt("worst error / tolerance = %.3g", worst) + " at " + where};
}

Outcome q0_asymptote()
{
    const double p = 0.5, eta = 0.1;
    const double q0 = *KernelSet(p, eta).q0();
    const double asym = 1.0 / ((2 * p + 1) * p * eta * eta);
    const double rel = std::abs(q0 - asym) / asym;
    return {rel <= kQ0Rel, fmt("Q0 = %.6g, asymptote %.6g, rel %.3g", q0, asym, rel)};
}

// -------------------------------------------------------------- Marcus grid

struct GridStats {
    double max_rel{0.0};
    int over{0};
    int points{0};
    bool all_violated{true};
    double worst_x{0.0}, worst_y{0.0};
    double max_over_bound{0.0};
};

GridStats marcus_grid(double eta, double p, double threshold)
{
    GridStats s;
    const double eps = kBeta * kEps;
    const BathSpectrum bath{p, eta / kBeta, 1.0};
    const double bound = marcus_upper_bound(kV, bath.omega_c);
    const KernelBundle k = KernelBundle::dimensionless(collective(eps, 0, 1, eta, p));
    for (double x : linspace(-4, 4, 25))
        for (double y : linspace(1, 8, 25)) {
            const auto d = collective(eps, x, y, eta, p, kBeta * kV);
            auto [dimer, model] = from_dimensionless(d, kBeta);
            const double exact = rate_dimensionless(d, k).gamma_over_beta_v2 * kV * kV * kBeta;
            const double marcus = gamma_marcus_generalized(dimer, model).gamma;
            const double rel = std::abs(marcus - exact) / exact;
            ++s.points;
            if (rel > threshold)
                ++s.over;
            if (rel > s.max_rel) {
                s.max_rel = rel;
                s.worst_x = x;
                s.worst_y = y;
            }
            if (check_marcus_regime(dimer, model).overall() != Verdict::Violated)
                s.all_violated = false;
            s.max_over_bound = std::max(s.max_over_bound, marcus / bound);
        }
    return s;
}

Outcome marcus_agreement()
{
    const GridStats s = marcus_grid(0.1, 0.5, kMarcusAgree);
    return {s.max_rel <= kMarcusAgree,
            fmt("max rel dev %.3g at x=%g y=%g; ", s.max_rel, s.worst_x, s.worst_y)
                + std::to_string(s.over) + "/" + std::to_string(s.points) + " points above 10%"};
}

Outcome marcus_failure()
{
    const GridStats s = marcus_grid(1.0, 0.5, kMarcusFail);
    return {s.max_rel > kMarcusFail && s.all_violated,
            fmt("max rel dev %.3g at x=%g y=%g; regime ", s.max_rel, s.worst_x, s.worst_y)
                + (s.all_violated ? "violated at every point" : "not violated everywhere")};
}

// ------------------------------------------------------------ exact identities

Outcome symmetric_null()
{
    double worst = 0.0;
    for (double p : {-0.25, 0.5, 1.5})
        for (double eta : {0.1, 1.0, 5.0})
            for (double lam : {0.05, 0.3}) {
                const DimerParams d{kEps, kV, lam, lam, kBeta};
                const auto model = SpectralModel::collective({p, eta / kBeta, 1.0});
                const double g = gamma_exact(d, model, KernelBundle::make(model, kBeta)).gamma;
                worst = std::max(worst, std::abs(g) / (kV * kV / kBeta));
            }
    return {worst <= kNullScale, fmt("max |gamma| / (V^2 T) = %.3g over 18 cases", worst)};
}

Outcome boundary_coincidence()
{
    double worst = 0.0;
    int n = 0;
    for (double p : {-0.25, 0.5, 1.5})
        for (double eta : {0.1, 1.0})
            for (int which : {1, 2}) {
                const BathSpectrum b{p, eta / kBeta, 1.0};
                const auto c = SpectralModel::collective(b);
                const auto l = SpectralModel::local(b, b);
                // coupling sized so that the collective reconstruction y is 2
                DimerParams d{kEps, kV, 0.0, 0.0, kBeta};
                double& lam = (which == 1 ? d.lambda2 : d.lambda1);
                lam = 0.1;
                lam *= std::sqrt(2.0 / to_dimensionless(d, c).y());
                const auto k = KernelBundle::make(c, kBeta);
                const double gc = gamma_exact(d, c, k).gamma;
                const double gl = gamma_exact(d, l, k).gamma;
                worst = std::max(worst, std::abs(gc - gl) / std::abs(gl));
                ++n;
            }
    return {worst <= kBoundaryRel, fmt("max rel diff %.3g over %g cases", worst, n)};
}

Outcome level_shift_oracle()
{
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double ps[] = {-0.25, 0.5, 1.5};
    double worst_rate = 0.0, worst_db = 0.0;
    for (int i = 0; i < 10; ++i) {
        DimensionlessParams d;
        const double p = ps[i % 3];
        const double eta = 0.3 + 2.7 * u(rng);
        d.eps = 0.5 + 3.5 * u(rng);
        d.v = 0.5;
        d.p = {p, p};
        d.eta = {eta, eta};
        if (i % 2 == 0) {
            d.topology = Topology::Collective;
            const double y = 0.5 + 3.0 * u(rng);
            const double x = (2.0 * u(rng) - 1.0) * y;
            d.eps_c = {y + x, y - x};
        } else {
            d.topology = Topology::Local;
            d.eps_l = {0.3 + 3.0 * u(rng), 0.3 + 3.0 * u(rng)};
        }
        const double beta = 0.2 + u(rng);
        auto [dimer, model] = from_dimensionless(d, beta);
        const auto k = KernelBundle::make(model, beta);
        const double exact = gamma_exact(dimer, model, k).gamma;
        const double lso = gamma_from_level_shift(dimer, model, k).gamma;
        worst_rate = std::max(worst_rate, std::abs(lso - exact) / std::abs(exact));
        const LevelShiftPair x = level_shift_values(dimer, model, k);
        const double db = std::abs(x.backward - std::exp(-x.beta_eps_hat) * x.forward) / std::abs(x.backward);
        worst_db = std::max(worst_db, db);
    }
    return {worst_rate <= kLsoRel && worst_db <= kLsoRel,
            fmt("trace route max rel %.3g, detailed balance max rel %.3g", worst_rate, worst_db)};
}

// Laplace-regularized integral ∫ e^{−rτ} h(τ) cos ωτ dτ on [0, T] by composite
// Gauss–Legendre, with h frozen at h(T) beyond T (closed-form tail), then
// quadratic extrapolation r → 0.
double richardson_rate(const DimensionlessParams& d, const KernelSet& ks)
{
    using GL = boost::math::quadrature::gauss<double, 30>;
    const double omega = d.eps - d.x();
    const double y = d.y();
    const double T = 2000.0;
    const double width = std::min(0.5, std::numbers::pi / (2.0 * std::abs(omega)));
    const int panels = static_cast<int>(std::ceil(T / width));
    const double w = T / panels;

    std::vector<double> nodes, weights;
    for (int j = 0; j < panels; ++j) {
        const double a = j * w, m = a + 0.5 * w;
        auto add = [&](double off, double wt) {
            nodes.push_back(m + 0.5 * w * off);
            weights.push_back(0.5 * w * wt);
        };
        for (std::size_t i = 0; i < GL::abscissa().size(); ++i) {
            const double xi = GL::abscissa()[i], wi = GL::weights()[i];
            add(xi, wi);
            if (xi != 0.0)
                add(-xi, wi);
        }
    }
    std::vector<double> h(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const KernelValues k = ks.at(nodes[i]);
        h[i] = std::cos(y * k.q1) * std::exp(-y * k.q2) * std::cos(omega * nodes[i]);
    }
    const KernelValues kt = ks.at(T);
    const double hT = std::cos(y * kt.q1) * std::exp(-y * kt.q2);

    const double rs[] = {1e-2, 1e-3, 1e-4};
    double g[3];
    for (int m = 0; m < 3; ++m) {
        const double r = rs[m];
        double head = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            head += weights[i] * std::exp(-r * nodes[i]) * h[i];
        const double tail = hT * std::exp(-r * T) * (r * std::cos(omega * T) - omega * std::sin(omega * T))
                            / (r * r + omega * omega);
        g[m] = head + tail;
    }
    // Neville at r = 0
    double p01 = (rs[1] * g[0] - rs[0] * g[1]) / (rs[1] - rs[0]);
    double p12 = (rs[2] * g[1] - rs[1] * g[2]) / (rs[2] - rs[1]);
    return (rs[2] * p01 - rs[0] * p12) / (rs[2] - rs[0]);
}

Outcome abel_stability()
{
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        const double eta = 0.5 + 1.5 * u(rng);
        const double y = 0.3 + 2.7 * u(rng);
        const double x = (2.0 * u(rng) - 1.0) * y;
        double eps;
        do {
            eps = -4.0 + 8.0 * u(rng);
        } while (std::abs(eps - x) < 0.5);
        const auto d = collective(eps, x, y, eta, 0.5);
        const KernelSet ks(0.5, eta, KernelMethod::ClosedForm, false);
        const auto bundle = KernelBundle::dimensionless(d);
        const double split = rate_dimensionless(d, bundle).gamma_over_beta_v2;
        const double ref = richardson_rate(d, ks);
        worst = std::max(worst, std::abs(split - ref) / std::abs(ref));
    }
    return {worst <= kAbelRel, fmt("max rel diff split-tail vs Richardson %.3g", worst)};
}

// --------------------------------------------------------- bound and anchor

fs::path scratch(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / ("dimerdyn_acceptance_" + name);
    fs::remove_all(p);
    return p;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p)
{
    std::vector<std::vector<std::string>> out;
    std::ifstream in(p);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> r;
        std::istringstream ls(line);
        std::string f;
        while (std::getline(ls, f, ','))
            r.push_back(f);
        out.push_back(r);
    }
    return out;
}

std::size_t col(const std::vector<std::string>& header, const std::string& name)
{
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
        throw std::runtime_error("missing column " + name);
    return static_cast<std::size_t>(it - header.begin());
}

Outcome upper_bound()
{
    const double bound = marcus_upper_bound(kV, 0.1 * kT);
    const double rel = std::abs(bound - 206.0) / 206.0;
    double worst = 0.0;
    for (double eta : {0.1, 1.0})
        worst = std::max(worst, marcus_grid(eta, 0.5, 1.0).max_over_bound);
    // sweep far past the optimum as well
    for (double y = 0.01; y < 400; y *= 1.2)
        for (double x : {-1.0, 0.0, 1.0})
            worst = std::max(worst, gamma_marcus_dimensionless(kBeta * kEps, y + x * y, y - x * y, kBeta, kV)
                                        / marcus_upper_bound(kV, 0.1 * kT));
    return {rel <= kBoundRel && worst <= 1.0,
            fmt("bound %.5g ps^-1 (rel to 206: %.3g); max gamma/bound %.3g", bound, rel, worst)};
}

Outcome magnitude_anchor()
{
    const fs::path out = scratch("anchor");
    RunOptions o;
    o.command = "rates";
    o.preset = "fig1a";
    o.out_dir = out;
    run(o);
    const auto t = read_csv(out / "marcus_curve.csv");
    const std::size_t c = col(t[0], "gamma_marcus_std_ps_inv");
    double peak = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i)
        peak = std::max(peak, std::stod(t[i][c]));
    return {peak >= 1.0 && peak <= 10.0, fmt("red-curve peak %.4g ps^-1", peak)};
}

// ---------------------------------------------------------------- dynamics

Outcome decoherence_relation()
{
    const auto d = collective(kBeta * kEps, 0.5, 2.0, 0.5, 0.5, kBeta * kV);
    auto [dimer, model] = from_dimensionless(d, kBeta);
    const auto k = KernelBundle::make(model, kBeta);
    const RateReport r = gamma_exact(dimer, model, k);
    const double p_inf = equilibrium_population(dimer, model);
    const auto times = linspace(0.0, 2.0, 41);

    // γ recovered from the population trajectory by a log-linear fit
    const Trajectory pop = population_trajectory(p_inf, r.gamma, 0.9, times);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double ly = std::log(std::abs(pop.p[i] - p_inf));
        sx += times[i];
        sy += ly;
        sxx += times[i] * times[i];
        sxy += times[i] * ly;
    }
    const double gamma_fit = -(n * sxy - sx * sy) / (n * sxx - sx * sx);

    const Trajectory coh = coherence_trajectory(dimer, model, gamma_fit, *r.lamb_shift, k, {0.4, 0.1}, times);
    double worst = 0.0;
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double slope = (std::log(coh.rho12_abs[i]) - std::log(coh.rho12_abs[i - 1])) / (times[i] - times[i - 1]);
        worst = std::max(worst, std::abs(slope + 0.5 * gamma_fit));
    }
    return {worst <= kSlopeAbs, fmt("gamma %.8g (fit %.8g), max |slope + gamma/2| %.3g", r.gamma, gamma_fit, worst)};
}

Outcome gamma_infinity_dichotomy()
{
    const auto d = collective(kBeta * kEps, 0.7, 2.0, 0.5, 0.5, kBeta * kV);
    auto [dimer, model] = from_dimensionless(d, kBeta);
    const auto k = KernelBundle::make(model, kBeta);
    const auto g = gamma_infinity(dimer, model, k);
    const double expect = 0.5 * (d.eps_c[0] + d.eps_c[1]) * *KernelSet(0.5, 0.5).q0();
    const double rel = g ? std::abs(*g - expect) / expect : INFINITY;

    const auto ds = collective(kBeta * kEps, 0.7, 2.0, 0.5, -0.25, kBeta * kV);
    auto [dimer_s, model_s] = from_dimensionless(ds, kBeta);
    const auto ks = KernelBundle::make(model_s, kBeta);
    const bool diverges = !gamma_infinity(dimer_s, model_s, ks);
    const KernelSet sub(-0.25, 0.5);
    const double i2 = sub.saturation_integral(1e-2), i4 = sub.saturation_integral(1e-4), i6 = sub.saturation_integral(1e-6);
    const bool grows = i4 > 10 * i2 && i6 > 10 * i4;
    return {rel <= kGammaInfRel && diverges && grows,
            fmt("p=1/2 rel %.3g; p=-1/4 partial integrals %.4g, %.4g, %.4g", rel, i2, i4, i6)
                + (diverges ? "; divergence signalled" : "; no divergence signal")};
}

Outcome monte_carlo()
{
    NoiseSimConfig cfg;
    cfg.n_paths = 10000;
    cfg.seed = 12345;
    cfg.lambda = 0.5;
    cfg.bath = {0.5, 1.0, 1.0};
    cfg.beta = 1.0;
    cfg.dt = 0.05;
    cfg.t_max = 5.0;
    const NoiseSimResult r = simulate_dephasing(cfg);
    const double frac = fraction_within(r, 3.0);
    double min_target = 1.0;
    for (double t : r.target)
        min_target = std::min(min_target, t);
    return {frac >= kMcFraction,
            fmt("fraction %.4g of %g points within 3 SE (target decays to %.3g)", frac, r.tau.size(), min_target)};
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome determinism()
{
    int compared = 0;
    std::string bad;
    auto run_twice = [&](const std::string& command, const std::optional<std::string>& preset) {
        std::vector<fs::path> dirs;
        for (unsigned threads : {1u, 4u}) {
            RunOptions o;
            o.command = command;
            o.preset = preset;
            o.seed = 99;
            o.threads = threads;
            o.out_dir = scratch(command + "_" + preset.value_or("none") + "_" + std::to_string(threads));
            run(o);
            dirs.push_back(o.out_dir);
        }
        for (const auto& e : fs::directory_iterator(dirs[0])) {
            if (e.path().extension() != ".csv")
                continue;
            ++compared;
            if (slurp(e.path()) != slurp(dirs[1] / e.path().filename()))
                bad += " " + preset.value_or(command) + "/" + e.path().filename().string();
        }
    };
    for (const auto& p : preset_names())
        run_twice(command_accepts_preset("figures", p) ? "figures" : "rates", p);
    run_twice("oracle", std::nullopt);
    return {bad.empty() && compared > 0,
            std::to_string(compared) + " CSV pairs compared (1 vs 4 threads)" + (bad.empty() ? "" : "; differ:" + bad)};
}

} // namespace

int main(int argc, char** argv)
{
    std::optional<fs::path> report;
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--report") == 0 && i + 1 < argc)
            report = argv[++i];

    const std::vector<Criterion> criteria = {
        {"kernel closed form vs quadrature", false, kernel_closed_form},
        {"Q0 small-eta asymptote", false, q0_asymptote},
        {"Marcus agreement at eta = 0.1", true, marcus_agreement},
        {"Marcus failure at eta = 1", false, marcus_failure},
        {"symmetric-coupling null", false, symmetric_null},
        {"lambda_j = 0 boundary coincidence", false, boundary_coincidence},
        {"level-shift cross-oracle", false, level_shift_oracle},
        {"Abel-limit stability", false, abel_stability},
        {"Marcus upper bound", false, upper_bound},
        {"order-of-magnitude anchor", false, magnitude_anchor},
        {"decoherence relation", false, decoherence_relation},
        {"Gamma_infinity dichotomy", false, gamma_infinity_dichotomy},
        {"Monte-Carlo oracle", false, monte_carlo},
        {"determinism", false, determinism},
    };

    std::ostringstream log;
    int unexpected = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
            ++unexpected;
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::string line = std::string(o.pass ? "PASS" : "FAIL") + "  " + c.name + "  [" + fmt("%.1f s", secs) + "]  " + o.detail;
        if (c.known_deviation)
            line += o.pass ? "  (listed as a known deviation but passed)" : "  (known deviation)";
        if (o.pass == c.known_deviation)
            ++unexpected;
        std::cout << line << std::endl;
        log << line << '\n';
    }
    if (report) {
        std::ofstream out(*report);
        out << log.str();
    }
    return unexpected == 0 ? 0 : 1;
}
