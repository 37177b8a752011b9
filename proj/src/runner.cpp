// runner.cpp — command implementations behind the dimerdyn CLI

#include "dimerdyn/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

#include "dimerdyn/csv.hpp"
#include "dimerdyn/dynamics.hpp"
#include "dimerdyn/error.hpp"
#include "dimerdyn/kernels.hpp"
#include "dimerdyn/noise_oracle.hpp"
#include "dimerdyn/rates.hpp"
#include "dimerdyn/regimes.hpp"

#ifndef DIMERDYN_VERSION
#define DIMERDYN_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;

namespace dimerdyn {

namespace {

// ---------------------------------------------------------------- presets

const char* kDimer = "dimer.epsilon_ps_inv = 150\n"
                     "dimer.v_ps_inv = 25\n"
                     "dimer.temperature_ps_inv = 37.88\n";

const char* kCollectiveGrid = "topology = collective\n"
                              "coupling.x = 0\n"
                              "coupling.y = 4\n"
                              "sweep.x.min = -4\nsweep.x.max = 4\nsweep.x.count = 25\n"
                              "sweep.y.min = 1\nsweep.y.max = 8\nsweep.y.count = 25\n"
                              "red_curve.min = 1\nred_curve.max = 8\nred_curve.count = 57\n";

const char* kLocalGrid = "topology = local\n"
                         "coupling.eps1 = 4\n"
                         "coupling.eps2 = 4\n"
                         "sweep.eps1.min = 1\nsweep.eps1.max = 8\nsweep.eps1.count = 25\n"
                         "sweep.eps2.min = 1\nsweep.eps2.max = 8\nsweep.eps2.count = 25\n"
                         "red_curve.min = 1\nred_curve.max = 8\nred_curve.count = 57\n";

const char* kSurface = "surface.eta.min = 0.1\nsurface.eta.max = 5\nsurface.eta.count = 50\n"
                       "surface.tau.min = 0\nsurface.tau.max = 20\nsurface.tau.count = 101\n";

const std::map<std::string, std::string>& presets()
{
    static const std::map<std::string, std::string> table = [] {
        std::map<std::string, std::string> t;
        const std::string dimer = kDimer;
        t["fig1a"] = dimer + kCollectiveGrid + "bath.p = 0.5\nbath.eta = 0.1\n";
        t["fig1b"] = dimer + kCollectiveGrid + "bath.p = 0.5\nbath.eta = 1\n";
        t["fig1c"] = dimer + kCollectiveGrid + "bath.p = -0.25\nbath.eta = 1\n";
        t["fig1d"] = dimer + "topology = collective\ncoupling.x = 0\ncoupling.y = 4\n"
                             "sweep.y.min = 1\nsweep.y.max = 8\nsweep.y.count = 57\n"
                             "bath.p = 0.5\nbath.eta = 0.1\n"
                             "series.eta = 0.1, 1, 1\nseries.p = 0.5, 0.5, -0.25\n";
        t["fig2"] = "kernels.p = -0.25, -0.49, 0.5, 1.5\nkernels.eta = 0.1, 1\n"
                    "kernels.tau_max = 20\nkernels.count = 401\n";
        t["fig3a"] = dimer + kLocalGrid + "bath1.p = 0.5\nbath2.p = 0.5\nbath1.eta = 0.1\nbath2.eta = 0.1\n";
        t["fig3b"] = dimer + kLocalGrid + "bath1.p = 0.5\nbath2.p = 0.5\nbath1.eta = 0.1\nbath2.eta = 1\n";
        t["fig3c"] = dimer + kLocalGrid + "bath1.p = 0.5\nbath2.p = 0.5\nbath1.eta = 1\nbath2.eta = 0.1\n";
        t["fig3d"] = dimer + kLocalGrid + "bath1.p = -0.25\nbath2.p = -0.25\nbath1.eta = 0.1\nbath2.eta = 1\n";
        t["fig4"] = std::string("bath.p = 0.5\n") + kSurface;
        t["fig5"] = dimer + "topology = collective\nbath.p = 0.5\nbath.eta = 0.1\n"
                            "coupling.x = 0\ncoupling.y = 0.1\ncurves.eta = 0.1, 1, 5\n" + kSurface;
        t["fig6"] = dimer + "topology = local\nbath1.p = 0.5\nbath2.p = 0.5\n"
                            "bath1.eta = 0.1\nbath2.eta = 0.1\n"
                            "coupling.eps1 = 0.1\ncoupling.eps2 = 0.1\n"
                            "surface.eta1.min = 0.1\nsurface.eta1.max = 5\nsurface.eta1.count = 40\n"
                            "surface.eta2.min = 0.1\nsurface.eta2.max = 5\nsurface.eta2.count = 40\n";
        return t;
    }();
    return table;
}

// ------------------------------------------------------------- key schema

const std::set<std::string>& known_keys()
{
    static const std::set<std::string> keys = [] {
        std::set<std::string> k = {
            "run.command", "run.version", "run.preset", "run.seed", "topology",
            "bath.p", "bath.eta", "bath.amplitude", "bath1.p", "bath1.eta", "bath1.amplitude",
            "bath2.p", "bath2.eta", "bath2.amplitude",
            "coupling.x", "coupling.y", "coupling.eps1", "coupling.eps2",
            "coupling.lambda1", "coupling.lambda2",
            "series.eta", "series.p",
            "red_curve.min", "red_curve.max", "red_curve.count",
            "tol.split", "tol.phase", "tol.panel_abs", "tol.panel_rel",
            "init.p0", "init.rho12_re", "init.rho12_im",
            "time.t_max_ps", "time.tau_max", "time.count",
            "kernels.p", "kernels.eta", "kernels.tau_max", "kernels.count",
            "curves.eta", "validate.c_const",
            "oracle.n_paths", "oracle.dt", "oracle.t_max", "oracle.n_freq", "oracle.f_min",
            "oracle.f_max", "oracle.block", "oracle.lags",
        };
        for (const char* q : {"dimer.epsilon", "dimer.v", "dimer.temperature"})
            for (const char* u : {"_mev", "_ps_inv"})
                k.insert(std::string(q) + u);
        for (const char* prefix : {"sweep.", "surface."})
            for (const char* axis : {"x", "y", "eps1", "eps2", "eta", "eta1", "eta2", "tau"})
                for (const char* f : {"min", "max", "count", "scale"})
                    k.insert(std::string(prefix) + axis + "." + f);
        return k;
    }();
    return keys;
}

void check_keys(const Config& cfg)
{
    for (const auto& [key, e] : cfg.entries())
        if (!known_keys().count(key))
            throw ConfigError(e.source + ": unknown key '" + key + "'", e.line);
}

// ------------------------------------------------------------ accessors

// Reads a key, recording the default in the config so the manifest is complete.
double num(Config& c, const std::string& key, double fallback)
{
    if (!c.has(key))
        c.set(key, format_number(fallback), "default");
    return c.get_double(key);
}

long long integer(Config& c, const std::string& key, long long fallback)
{
    if (!c.has(key))
        c.set(key, std::to_string(fallback), "default");
    return c.get_int(key, fallback);
}

struct Axis {
    std::string name;
    std::vector<double> values;
};

std::optional<Axis> read_axis(Config& c, const std::string& prefix, const std::string& name)
{
    const std::string base = prefix + name + ".";
    if (!c.has(base + "min") && !c.has(base + "max") && !c.has(base + "count"))
        return std::nullopt;
    const double lo = c.get_double(base + "min");
    const double hi = c.get_double(base + "max");
    const long long n = c.get_int(base + "count", 0);
    const std::string scale = c.get_string(base + "scale", "linear");
    if (n <= 0)
        throw ConfigError("empty grid: '" + base + "count' must be positive");
    if (scale != "linear" && scale != "log")
        throw ConfigError("'" + base + "scale' must be linear or log");
    if (scale == "log" && !(lo > 0.0 && hi > 0.0))
        throw ConfigError("log scale needs positive bounds for '" + base + "'");
    if (!std::isfinite(lo) || !std::isfinite(hi) || hi < lo)
        throw ConfigError("'" + base + "' needs finite min <= max");
    Axis a{name, {}};
    for (long long i = 0; i < n; ++i) {
        const double f = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
        a.values.push_back(scale == "log" ? lo * std::pow(hi / lo, f) : lo + f * (hi - lo));
    }
    return a;
}

Axis axis_or_value(Config& c, const std::string& prefix, const std::string& name, const std::string& value_key)
{
    if (auto a = read_axis(c, prefix, name))
        return *a;
    return {name, {c.get_double(value_key)}};
}

Topology read_topology(Config& c)
{
    const std::string t = c.get_string("topology", "collective");
    c.set("topology", t, "resolved");
    if (t == "collective")
        return Topology::Collective;
    if (t == "local")
        return Topology::Local;
    throw ConfigError("topology must be collective or local, got '" + t + "'");
}

struct BathChoice {
    double p;
    double eta;
    double amplitude;
};

std::array<BathChoice, 2> read_baths(Config& c, Topology topo)
{
    if (topo == Topology::Collective)
        return {BathChoice{c.get_double("bath.p"), c.get_double("bath.eta"), c.get_double("bath.amplitude", 1.0)},
                BathChoice{}};
    std::array<BathChoice, 2> b;
    for (int j = 0; j < 2; ++j) {
        const std::string s = "bath" + std::to_string(j + 1) + ".";
        b[j].p = c.has(s + "p") ? c.get_double(s + "p") : c.get_double("bath.p");
        b[j].eta = c.has(s + "eta") ? c.get_double(s + "eta") : c.get_double("bath.eta");
        b[j].amplitude = c.has(s + "amplitude") ? c.get_double(s + "amplitude") : c.get_double("bath.amplitude", 1.0);
    }
    return b;
}

struct Physical {
    double epsilon;
    double V;
    double beta;
};

Physical read_physical(Config& c, bool need_v = true)
{
    Physical ph{};
    ph.epsilon = c.get_energy("dimer.epsilon");
    ph.V = need_v ? c.get_energy("dimer.v") : c.find_energy("dimer.v").value_or(0.0);
    const double T = c.get_energy("dimer.temperature");
    if (!(T > 0.0) || !std::isfinite(T))
        throw ConfigError("dimer.temperature must be positive");
    ph.beta = 1.0 / T;
    return ph;
}

struct Point {
    DimensionlessParams d;
    DimerParams dimer;
    SpectralModel model;
};

// (a, b) = (x, y) for collective, (ε₁, ε₂) for local, all dimensionless.
Point make_point(Topology topo, const Physical& ph, const std::array<BathChoice, 2>& baths, double a, double b)
{
    DimensionlessParams d;
    d.topology = topo;
    d.eps = ph.beta * ph.epsilon;
    d.v = ph.beta * ph.V;
    const BathChoice& b2 = topo == Topology::Collective ? baths[0] : baths[1];
    d.p = {baths[0].p, b2.p};
    d.eta = {baths[0].eta, b2.eta};
    if (topo == Topology::Collective) {
        if (b < 0.0)
            throw DomainError("collective y must be nonnegative");
        d.eps_c = {b + a, b - a};
    } else {
        if (a < 0.0 || b < 0.0)
            throw DomainError("local reconstruction energies must be nonnegative");
        d.eps_l = {a, b};
    }
    auto [dimer, model] = from_dimensionless(d, ph.beta);
    return {d, dimer, model};
}

// Coupling from coupling.lambda1/2 with amplitudes A_p from the config.
Point make_point_lambda(Topology topo, const Physical& ph, const std::array<BathChoice, 2>& baths,
                        double l1, double l2)
{
    DimerParams dimer{ph.epsilon, ph.V, l1, l2, ph.beta};
    const BathSpectrum s1{baths[0].p, baths[0].eta / ph.beta, baths[0].amplitude};
    SpectralModel model = topo == Topology::Collective
                              ? SpectralModel::collective(s1)
                              : SpectralModel::local(s1, {baths[1].p, baths[1].eta / ph.beta, baths[1].amplitude});
    dimer.validate();
    model.validate();
    return {to_dimensionless(dimer, model), dimer, model};
}

Point read_single_point(Config& c, Topology topo, const Physical& ph, const std::array<BathChoice, 2>& baths)
{
    if (c.has("coupling.lambda1") || c.has("coupling.lambda2"))
        return make_point_lambda(topo, ph, baths, c.get_double("coupling.lambda1"),
                                 c.get_double("coupling.lambda2"));
    if (topo == Topology::Collective)
        return make_point(topo, ph, baths, c.get_double("coupling.x", 0.0), c.get_double("coupling.y"));
    return make_point(topo, ph, baths, c.get_double("coupling.eps1"), c.get_double("coupling.eps2"));
}

RateOptions read_tolerances(Config& c)
{
    RateOptions o;
    o.split_tol = num(c, "tol.split", o.split_tol);
    o.phase_tol = num(c, "tol.phase", o.phase_tol);
    o.panel_abs_tol = num(c, "tol.panel_abs", o.panel_abs_tol);
    o.panel_rel_tol = num(c, "tol.panel_rel", o.panel_rel_tol);
    return o;
}

// ------------------------------------------------------------ parallel map

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn)
{
    std::vector<std::exception_ptr> errors(n);
    auto guarded = [&](std::size_t i) {
        try {
            fn(i);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i)
            guarded(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i; (i = next.fetch_add(1)) < n;)
                    guarded(i);
            });
        for (auto& t : pool)
            t.join();
    }
    // first failure by index, independent of scheduling
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

// ------------------------------------------------------------------ output

struct Output {
    std::vector<std::pair<std::string, CsvTable>> tables;
    std::vector<std::pair<std::string, std::string>> texts;
    std::vector<std::string> messages;
};

std::vector<double> linspace(double lo, double hi, long long n)
{
    if (n <= 0)
        throw ConfigError("empty grid");
    std::vector<double> v;
    for (long long i = 0; i < n; ++i)
        v.push_back(n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
    return v;
}

// ------------------------------------------------------------------- rates

void rates_command(Config& c, unsigned threads, Output& out)
{
    const Topology topo = read_topology(c);
    const Physical ph = read_physical(c);
    auto baths = read_baths(c, topo);
    const RateOptions ropt = read_tolerances(c);

    std::vector<std::array<BathChoice, 2>> series;
    const auto s_eta = c.get_list("series.eta");
    const auto s_p = c.get_list("series.p");
    if (!s_eta.empty() || !s_p.empty()) {
        if (topo != Topology::Collective)
            throw ConfigError("series.* is only supported for the collective topology");
        if (s_eta.size() != s_p.size())
            throw ConfigError("series.eta and series.p must have the same length");
        for (std::size_t i = 0; i < s_eta.size(); ++i)
            series.push_back({BathChoice{s_p[i], s_eta[i], baths[0].amplitude}, BathChoice{}});
    } else {
        series.push_back(baths);
    }

    const bool coll = topo == Topology::Collective;
    const Axis a = coll ? axis_or_value(c, "sweep.", "x", "coupling.x") : axis_or_value(c, "sweep.", "eps1", "coupling.eps1");
    const Axis b = coll ? axis_or_value(c, "sweep.", "y", "coupling.y") : axis_or_value(c, "sweep.", "eps2", "coupling.eps2");

    struct Task {
        std::size_t series;
        double a, b;
    };
    std::vector<Task> tasks;
    for (std::size_t s = 0; s < series.size(); ++s)
        for (double va : a.values)
            for (double vb : b.values)
                tasks.push_back({s, va, vb});

    std::vector<KernelBundle> bundles;
    for (const auto& sb : series) {
        DimensionlessParams d;
        d.topology = topo;
        d.p = {sb[0].p, coll ? sb[0].p : sb[1].p};
        d.eta = {sb[0].eta, coll ? sb[0].eta : sb[1].eta};
        bundles.push_back(KernelBundle::dimensionless(d));
    }

    CsvTable table({"index", "series", "p1", "p2", "eta1", "eta2", "x_dimensionless", "y_dimensionless",
                    "eps1_dimensionless", "eps2_dimensionless", "eps_dimensionless",
                    "gamma_exact_ps_inv", "gamma_marcus_gen_ps_inv", "gamma_marcus_std_ps_inv",
                    "gamma_high_temp_ps_inv", "lamb_shift_ps_inv", "rel_dev_marcus",
                    "marcus_regime", "high_temp_regime", "below_upper_bound"});
    std::vector<std::vector<Cell>> rows(tasks.size());
    const double v2b = ph.V * ph.V * ph.beta;

    parallel_for(tasks.size(), threads, [&](std::size_t i) {
        const Task& t = tasks[i];
        const Point pt = make_point(topo, ph, series[t.series], t.a, t.b);
        const auto& d = pt.d;
        const auto e = coll ? d.eps_c : d.eps_l;
        const DimensionlessRate r = rate_dimensionless(d, bundles[t.series], ropt);
        const double exact = r.gamma_over_beta_v2 * v2b;

        std::optional<double> gen, std_marcus, high_t, rel;
        if (e[0] + e[1] > 0.0) {
            gen = gamma_marcus_dimensionless(d.eps, e[0], e[1], ph.beta, ph.V);
            if (exact > 0.0)
                rel = std::abs(*gen - exact) / exact;
        }
        if (e[0] == e[1] && e[0] > 0.0)
            std_marcus = gamma_marcus_standard(pt.dimer, e[0] / ph.beta).gamma;
        if (d.p[0] > 0.0 && d.p[1] > 0.0)
            high_t = gamma_high_temp_partial(pt.dimer, pt.model).gamma;

        Cell bound = na();
        if (coll && gen)
            bound = static_cast<long long>(*gen <= marcus_upper_bound(ph.V, pt.model.bath1.omega_c));

        rows[i] = {static_cast<long long>(i), static_cast<long long>(t.series), d.p[0], d.p[1], d.eta[0], d.eta[1],
                   d.x(), d.y(), e[0], e[1], d.eps, exact, cell(gen), cell(std_marcus), cell(high_t),
                   r.lamb_over_beta_v2 * v2b, cell(rel),
                   std::string(to_string(check_marcus_regime(pt.dimer, pt.model).overall())),
                   std::string(to_string(check_high_temp_partial_regime(pt.dimer, pt.model).overall())), bound};
    });
    for (std::size_t i = 0; i < rows.size(); ++i)
        table.add_row(i, std::move(rows[i]));
    out.tables.emplace_back("rates.csv", std::move(table));

    // Standard-Marcus curve along the diagonal ε₁ = ε₂ (x = 0), with the exact rate there.
    const long long n_curve = c.get_int("red_curve.count", 0);
    if (n_curve > 0) {
        const auto ys = linspace(c.get_double("red_curve.min"), c.get_double("red_curve.max"), n_curve);
        CsvTable curve({"index", "series", "y_dimensionless", "gamma_marcus_std_ps_inv",
                        "gamma_marcus_classic_ps_inv", "gamma_exact_ps_inv"});
        std::vector<std::vector<Cell>> crow(ys.size() * series.size());
        parallel_for(crow.size(), threads, [&](std::size_t i) {
            const std::size_t s = i / ys.size();
            const double y = ys[i % ys.size()];
            const Point pt = coll ? make_point(topo, ph, series[s], 0.0, y) : make_point(topo, ph, series[s], y, y);
            const double exact = rate_dimensionless(pt.d, bundles[s], ropt).gamma_over_beta_v2 * v2b;
            Cell std_g = na(), classic = na();
            if (y > 0.0) {
                const RateReport m = gamma_marcus_standard(pt.dimer, y / ph.beta);
                std_g = m.gamma;
                classic = cell(m.gamma_classic);
            }
            crow[i] = {static_cast<long long>(i), static_cast<long long>(s), y, std_g, classic, exact};
        });
        for (std::size_t i = 0; i < crow.size(); ++i)
            curve.add_row(i, std::move(crow[i]));
        out.tables.emplace_back("marcus_curve.csv", std::move(curve));
    }
    out.messages.push_back("rates: " + std::to_string(tasks.size()) + " grid points");
}

// --------------------------------------------------------------- dynamics

std::vector<double> read_times(Config& c, double beta)
{
    const long long n = integer(c, "time.count", 201);
    if (n < 2)
        throw ConfigError("time.count must be at least 2");
    double t_max;
    if (c.has("time.t_max_ps"))
        t_max = c.get_double("time.t_max_ps");
    else
        t_max = num(c, "time.tau_max", 20.0) * beta;
    if (!(t_max > 0.0))
        throw ConfigError("time range must be positive");
    return linspace(0.0, t_max, n);
}

void dynamics_command(Config& c, Output& out)
{
    const Topology topo = read_topology(c);
    const Physical ph = read_physical(c);
    const auto baths = read_baths(c, topo);
    const RateOptions ropt = read_tolerances(c);
    const Point pt = read_single_point(c, topo, ph, baths);
    const double p0 = num(c, "init.p0", 1.0);
    const cplx rho0(num(c, "init.rho12_re", 0.5), num(c, "init.rho12_im", 0.0));
    const auto times = read_times(c, ph.beta);

    const KernelBundle kernels = KernelBundle::make(pt.model, ph.beta);
    double gamma = 0.0, lamb = 0.0;
    if (pt.dimer.V != 0.0) {
        const RateReport r = gamma_exact(pt.dimer, pt.model, kernels, ropt);
        gamma = r.gamma;
        lamb = r.lamb_shift.value_or(0.0);
    }
    const double p_inf = equilibrium_population(pt.dimer, pt.model);
    const Trajectory pop = population_trajectory(p_inf, gamma, p0, times);
    const Trajectory coh = coherence_trajectory(pt.dimer, pt.model, gamma, lamb, kernels, rho0, times);

    CsvTable table({"index", "t_ps", "tau_dimensionless", "p", "rho12_abs", "rho12_phase_rad", "envelope",
                    "d_factor_abs", "gamma_tau"});
    for (std::size_t i = 0; i < times.size(); ++i)
        table.add_row(i, {static_cast<long long>(i), times[i], times[i] / ph.beta, pop.p[i], coh.rho12_abs[i],
                          coh.rho12_phase[i], coh.envelope[i], coh.d_factor[i], coh.gamma_of_tau[i]});
    out.tables.emplace_back("dynamics.csv", std::move(table));

    const auto g_inf = gamma_infinity(pt.dimer, pt.model, kernels);
    CsvTable summary({"mode", "gamma_ps_inv", "lamb_shift_ps_inv", "p_inf", "gamma_infinity",
                      "exp_minus_gamma_infinity", "half_life_ps"});
    summary.add_row(0, {coh.label, gamma, lamb, p_inf, cell(g_inf),
                        g_inf ? Cell(std::exp(-*g_inf)) : Cell(0.0),
                        gamma > 0.0 ? Cell(std::numbers::ln2 / gamma) : na()});
    out.tables.emplace_back("dynamics_summary.csv", std::move(summary));
    out.messages.push_back("dynamics: " + coh.label + ", gamma = " + format_cell(gamma) + " ps^-1");
}

void decoherence_command(Config& c, Output& out)
{
    const Topology topo = read_topology(c);
    Physical ph = read_physical(c, false);
    ph.V = 0.0;
    const auto baths = read_baths(c, topo);
    const Point pt = read_single_point(c, topo, ph, baths);
    const auto times = read_times(c, ph.beta);
    const KernelBundle kernels = KernelBundle::make(pt.model, ph.beta);

    CsvTable table({"index", "t_ps", "tau_dimensionless", "d_re", "d_im", "d_abs", "gamma_tau"});
    for (std::size_t i = 0; i < times.size(); ++i) {
        const cplx D = decoherence_factor(pt.dimer, pt.model, kernels, times[i]);
        table.add_row(i, {static_cast<long long>(i), times[i], times[i] / ph.beta, D.real(), D.imag(), std::abs(D),
                          gamma_of_tau(pt.dimer, pt.model, kernels, times[i] / ph.beta)});
    }
    out.tables.emplace_back("decoherence.csv", std::move(table));

    const auto g_inf = gamma_infinity(pt.dimer, pt.model, kernels);
    CsvTable summary({"gamma_infinity", "exp_minus_gamma_infinity", "divergent"});
    summary.add_row(0, {cell(g_inf), g_inf ? Cell(std::exp(-*g_inf)) : Cell(0.0), static_cast<long long>(!g_inf)});
    out.tables.emplace_back("decoherence_summary.csv", std::move(summary));
}

// ---------------------------------------------------------------- figures

void kernel_curves(Config& c, Output& out)
{
    const auto ps = c.get_list("kernels.p");
    const auto etas = c.get_list("kernels.eta");
    if (ps.empty() || etas.empty())
        throw ConfigError("kernels.p and kernels.eta must be non-empty lists");
    const auto taus = linspace(0.0, c.get_double("kernels.tau_max"), c.get_int("kernels.count", 0));
    CsvTable table({"index", "p", "eta", "tau_dimensionless", "q1", "q2"});
    std::size_t k = 0;
    for (double eta : etas)
        for (double p : ps) {
            const KernelSet ks(p, eta, KernelMethod::ClosedForm, false);
            for (double tau : taus) {
                const KernelValues v = ks.at(tau);
                table.add_row(k, {static_cast<long long>(k), p, eta, tau, v.q1, v.q2});
                ++k;
            }
        }
    out.tables.emplace_back("kernels.csv", std::move(table));
}

void q2_surface(Config& c, Output& out)
{
    const double p = c.get_double("bath.p");
    const Axis eta = *read_axis(c, "surface.", "eta");
    const Axis tau = *read_axis(c, "surface.", "tau");
    CsvTable table({"index", "eta", "tau_dimensionless", "q2", "q0"});
    std::size_t k = 0;
    for (double e : eta.values) {
        const KernelSet ks(p, e, KernelMethod::ClosedForm, false);
        for (double t : tau.values) {
            table.add_row(k, {static_cast<long long>(k), e, t, ks.q2(t), cell(ks.q0())});
            ++k;
        }
    }
    out.tables.emplace_back("q2_surface.csv", std::move(table));
}

// Γ(τ) over (τ, η): the collective weight is y, the local ones ε_j/2.
void decoherence_surface(Config& c, Output& out)
{
    const Topology topo = read_topology(c);
    if (topo != Topology::Collective)
        throw ConfigError("fig5 surface is defined for the collective topology");
    const double p = c.get_double("bath.p");
    const double y = c.get_double("coupling.y");
    const Axis eta = *read_axis(c, "surface.", "eta");
    const Axis tau = *read_axis(c, "surface.", "tau");
    CsvTable table({"index", "eta", "tau_dimensionless", "gamma_tau", "exp_minus_gamma_tau"});
    std::size_t k = 0;
    for (double e : eta.values) {
        const KernelSet ks(p, e, KernelMethod::ClosedForm, false);
        for (double t : tau.values) {
            const double g = y * ks.q2(t);
            table.add_row(k, {static_cast<long long>(k), e, t, g, std::exp(-g)});
            ++k;
        }
    }
    out.tables.emplace_back("decoherence_surface.csv", std::move(table));

    const auto curves = c.get_list("curves.eta");
    if (!curves.empty()) {
        CsvTable ct({"index", "eta", "tau_dimensionless", "gamma_tau", "exp_minus_gamma_tau"});
        k = 0;
        for (double e : curves) {
            const KernelSet ks(p, e, KernelMethod::ClosedForm, false);
            for (double t : tau.values) {
                const double g = y * ks.q2(t);
                ct.add_row(k, {static_cast<long long>(k), e, t, g, std::exp(-g)});
                ++k;
            }
        }
        out.tables.emplace_back("decoherence_curves.csv", std::move(ct));
    }
}

void gamma_infinity_surface(Config& c, Output& out)
{
    const Topology topo = read_topology(c);
    if (topo != Topology::Local)
        throw ConfigError("fig6 surface is defined for the local topology");
    const auto baths = read_baths(c, topo);
    const double e1 = c.get_double("coupling.eps1");
    const double e2 = c.get_double("coupling.eps2");
    const Axis a1 = *read_axis(c, "surface.", "eta1");
    const Axis a2 = *read_axis(c, "surface.", "eta2");
    CsvTable table({"index", "eta1", "eta2", "gamma_infinity", "exp_minus_gamma_infinity"});
    std::size_t k = 0;
    for (double h1 : a1.values)
        for (double h2 : a2.values) {
            const auto q1 = KernelSet(baths[0].p, h1).q0();
            const auto q2 = KernelSet(baths[1].p, h2).q0();
            std::optional<double> g;
            if ((q1 || e1 == 0.0) && (q2 || e2 == 0.0))
                g = 0.5 * e1 * q1.value_or(0.0) + 0.5 * e2 * q2.value_or(0.0);
            table.add_row(k, {static_cast<long long>(k), h1, h2, cell(g), g ? Cell(std::exp(-*g)) : Cell(0.0)});
            ++k;
        }
    out.tables.emplace_back("gamma_infinity_surface.csv", std::move(table));
}

void figures_command(Config& c, const std::string& preset, unsigned threads, Output& out)
{
    if (preset == "fig2")
        kernel_curves(c, out);
    else if (preset == "fig4")
        q2_surface(c, out);
    else if (preset == "fig5")
        decoherence_surface(c, out);
    else if (preset == "fig6")
        gamma_infinity_surface(c, out);
    else
        rates_command(c, threads, out);
}

// --------------------------------------------------------------- validate

void validate_command(Config& c, Output& out)
{
    const Topology topo = read_topology(c);
    const Physical ph = read_physical(c);
    const auto baths = read_baths(c, topo);
    const RateOptions ropt = read_tolerances(c);
    const Point pt = read_single_point(c, topo, ph, baths);
    const double c_const = num(c, "validate.c_const", 1.0);
    const double p0 = num(c, "init.p0", 1.0);

    double gamma = 0.0;
    if (ph.V != 0.0)
        gamma = rate_dimensionless(pt.d, KernelBundle::dimensionless(pt.d), ropt).gamma_over_beta_v2 * ph.V * ph.V * ph.beta;
    const double gamma_tilde = ph.V != 0.0 ? gamma / (ph.V * ph.V) : 0.0;

    const RegimeReport reports[] = {check_marcus_regime(pt.dimer, pt.model),
                                    check_high_temp_partial_regime(pt.dimer, pt.model)};
    const CouplingBounds cb = coupling_constraints(pt.dimer, pt.model, gamma_tilde, c_const);
    const double p_inf = equilibrium_population(pt.dimer, pt.model);
    const UsefulnessWindow win = usefulness_window(p0, gamma, c_const, p_inf);

    CsvTable table({"index", "regime", "check", "small_side", "large_side", "ratio", "verdict"});
    std::ostringstream txt;
    std::size_t k = 0;
    for (const auto& rep : reports) {
        txt << rep.regime << ": " << to_string(rep.overall()) << "\n";
        for (const auto& chk : rep.checks) {
            txt << "  " << chk.name << ": ratio " << format_cell(chk.ratio) << " (" << to_string(chk.verdict) << ")\n";
            table.add_row(k, {static_cast<long long>(k), rep.regime, chk.name, chk.small_side, chk.large_side,
                              chk.ratio, std::string(to_string(chk.verdict))});
            ++k;
        }
    }
    table.add_row(k, {static_cast<long long>(k), std::string("coupling"), std::string("|V| <= v0_bound"),
                      std::abs(ph.V), cb.v0_bound, cb.v0_bound > 0.0 ? Cell(std::abs(ph.V) / cb.v0_bound) : na(),
                      std::string(cb.admissible ? "satisfied" : "violated")});

    txt << "gamma_ps_inv = " << format_cell(gamma) << "\n";
    txt << "xi = " << format_cell(cb.xi) << ", v0_bound = " << format_cell(cb.v0_bound)
        << (cb.admissible ? " (admissible)" : " (V exceeds bound)") << "\n";
    txt << "usefulness window: t_min = " << format_cell(win.t_min) << " ps, t_max = " << format_cell(win.t_max)
        << " ps" << (win.degenerate ? " (degenerate)" : "") << "\n";
    if (gamma == 0.0)
        txt << "advisory: degenerate rate, gamma = 0 (lambda1 = lambda2 collective or V = 0); "
               "populations do not relax and t_max is infinite\n";
    out.texts.emplace_back("validate.txt", txt.str());
    out.tables.emplace_back("validate.csv", std::move(table));

    CsvTable win_table({"gamma_ps_inv", "p_inf", "t_min_ps", "t_max_ps", "degenerate", "v0_bound_ps_inv", "xi"});
    win_table.add_row(0, {gamma, p_inf, win.t_min, win.t_max, static_cast<long long>(win.degenerate), cb.v0_bound, cb.xi});
    out.tables.emplace_back("validate_summary.csv", std::move(win_table));
    out.messages.push_back(txt.str());
}

// ----------------------------------------------------------------- oracle

void oracle_command(Config& c, std::uint64_t seed, unsigned threads, Output& out)
{
    NoiseSimConfig n;
    const double p = num(c, "bath.p", 0.5);
    const double eta = num(c, "bath.eta", 1.0);
    const double y = num(c, "coupling.y", 1.0);
    n.bath = {p, eta, 1.0};
    n.beta = 1.0;
    n.lambda = std::sqrt(std::numbers::pi * y / (4.0 * n.bath.nu()));
    n.n_paths = static_cast<std::size_t>(integer(c, "oracle.n_paths", 10000));
    n.dt = num(c, "oracle.dt", 0.05 * std::min(1.0, 1.0 / eta));
    n.t_max = num(c, "oracle.t_max", 5.0 / eta);
    n.n_freq = static_cast<std::size_t>(integer(c, "oracle.n_freq", 2048));
    n.f_min = num(c, "oracle.f_min", 1e-4);
    n.f_max = num(c, "oracle.f_max", 50.0);
    n.block = static_cast<std::size_t>(integer(c, "oracle.block", 256));
    n.seed = seed;
    n.threads = threads;
    if (!c.has("oracle.lags"))
        c.set("oracle.lags", "0, 1, 5", "default");
    std::vector<int> lags;
    for (double l : c.get_list("oracle.lags"))
        lags.push_back(static_cast<int>(l));

    const NoiseSimResult r = simulate_dephasing(n);
    CsvTable table({"index", "tau_dimensionless", "mean_re", "mean_im", "se_re", "se_im", "target",
                    "synthesized_target", "within_3se"});
    for (std::size_t i = 0; i < r.tau.size(); ++i) {
        const double dev = std::abs(r.mean_re[i] - r.target[i]);
        const bool ok = r.se_re[i] == 0.0 ? dev == 0.0 : dev <= 3.0 * r.se_re[i];
        table.add_row(i, {static_cast<long long>(i), r.tau[i], r.mean_re[i], r.mean_im[i], r.se_re[i], r.se_im[i],
                          r.target[i], r.synthesized_target[i], static_cast<long long>(ok)});
    }
    out.tables.emplace_back("oracle.csv", std::move(table));

    CsvTable cov({"index", "lag_tau", "sample", "standard_error", "target"});
    const auto checks = check_covariance(n, lags);
    for (std::size_t i = 0; i < checks.size(); ++i)
        cov.add_row(i, {static_cast<long long>(i), checks[i].lag_tau, checks[i].sample, checks[i].standard_error,
                        checks[i].target});
    out.tables.emplace_back("oracle_covariance.csv", std::move(cov));
    out.messages.push_back("oracle: fraction within 3 SE = " + format_cell(fraction_within(r, 3.0)));
}

} // namespace

// ---------------------------------------------------------------- public

const std::vector<std::string>& commands()
{
    static const std::vector<std::string> c = {"rates", "dynamics", "decoherence", "figures", "validate", "oracle"};
    return c;
}

const std::vector<std::string>& preset_names()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& [k, v] : presets())
            n.push_back(k);
        return n;
    }();
    return names;
}

std::string preset_text(const std::string& name)
{
    const auto it = presets().find(name);
    if (it == presets().end())
        throw ConfigError("unknown preset '" + name + "'");
    return it->second;
}

bool command_accepts_preset(const std::string& command, const std::string& preset)
{
    if (!presets().count(preset))
        return false;
    const bool rates_preset = preset.rfind("fig1", 0) == 0 || preset.rfind("fig3", 0) == 0;
    if (command == "rates" || command == "validate")
        return rates_preset;
    if (command == "figures")
        return preset.rfind("fig1", 0) != 0;
    if (command == "dynamics" || command == "decoherence")
        return preset == "fig5" || preset == "fig6";
    return false;
}

RunResult run(const RunOptions& opt)
{
    if (std::find(commands().begin(), commands().end(), opt.command) == commands().end())
        throw ConfigError("unknown command '" + opt.command + "'");

    Config cfg;
    Config file_cfg;
    if (opt.config_path)
        file_cfg = Config::load(*opt.config_path);
    if (opt.inline_config)
        file_cfg.merge(*opt.inline_config);

    std::optional<std::string> preset = opt.preset;
    if (!preset && file_cfg.has("run.preset"))
        preset = file_cfg.get_string("run.preset");
    if (preset) {
        if (!command_accepts_preset(opt.command, *preset))
            throw ConfigError("command '" + opt.command + "' does not accept preset '" + *preset + "'");
        cfg = Config::parse(preset_text(*preset), "preset " + *preset);
    } else if (opt.command == "figures") {
        throw ConfigError("figures requires --preset (fig2, fig3a-d, fig4, fig5, fig6)");
    }
    cfg.merge(file_cfg);
    check_keys(cfg);

    if (cfg.has("run.command") && cfg.get_string("run.command") != opt.command)
        throw ConfigError("config was written for command '" + cfg.get_string("run.command") + "'");
    cfg.set("run.command", opt.command, "resolved");
    cfg.set("run.version", DIMERDYN_VERSION, "resolved");
    if (preset)
        cfg.set("run.preset", *preset, "resolved");
    const std::uint64_t seed = opt.seed ? *opt.seed : cfg.get_uint64("run.seed", 1);
    cfg.set("run.seed", std::to_string(seed), "resolved");
    const unsigned threads = std::max(1u, opt.threads);

    Output out;
    if (opt.command == "rates")
        rates_command(cfg, threads, out);
    else if (opt.command == "dynamics" || opt.command == "decoherence") {
        if (preset == std::string("fig5"))
            decoherence_surface(cfg, out);
        else if (preset == std::string("fig6"))
            gamma_infinity_surface(cfg, out);
        else if (opt.command == "dynamics")
            dynamics_command(cfg, out);
        else
            decoherence_command(cfg, out);
    } else if (opt.command == "figures")
        figures_command(cfg, *preset, threads, out);
    else if (opt.command == "validate")
        validate_command(cfg, out);
    else
        oracle_command(cfg, seed, threads, out);

    for (const auto& [name, table] : out.tables)
        if (table.size() == 0)
            throw ConfigError("empty grid: " + name + " would have no rows");

    RunResult result;
    fs::create_directories(opt.out_dir);
    for (const auto& [name, table] : out.tables) {
        table.write(opt.out_dir / name);
        result.files.push_back(opt.out_dir / name);
    }
    for (const auto& [name, text] : out.texts) {
        std::ofstream f(opt.out_dir / name, std::ios::binary);
        f << text;
        result.files.push_back(opt.out_dir / name);
    }

    std::string manifest = "# dimerdyn manifest; rerun with: dimerdyn " + opt.command + " --config manifest.cfg\n";
    manifest += "# outputs:";
    for (const auto& [name, table] : out.tables)
        manifest += " " + name;
    for (const auto& [name, text] : out.texts)
        manifest += " " + name;
    manifest += "\n" + cfg.to_text();
    const fs::path mpath = opt.out_dir / "manifest.cfg";
    std::ofstream(mpath, std::ios::binary) << manifest;
    result.files.push_back(mpath);

    result.messages = std::move(out.messages);
    result.resolved = std::move(cfg);
    return result;
}

} // namespace dimerdyn
