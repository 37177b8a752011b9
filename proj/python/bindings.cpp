// bindings.cpp — Python module dimerdyn._core

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "dimerdyn/dynamics.hpp"
#include "dimerdyn/error.hpp"
#include "dimerdyn/kernels.hpp"
#include "dimerdyn/noise_oracle.hpp"
#include "dimerdyn/rates.hpp"
#include "dimerdyn/runner.hpp"
#include "dimerdyn/specfun.hpp"
#include "dimerdyn/spectral.hpp"

namespace py = pybind11;
using namespace dimerdyn;

namespace {

py::dict report_dict(const RateReport& r)
{
    py::dict d;
    d["gamma"] = r.gamma;
    d["lamb_shift"] = r.lamb_shift;
    d["gamma_classic"] = r.gamma_classic;
    d["method"] = to_string(r.method);
    d["tail_contribution"] = r.tail_contribution;
    d["split_tau"] = r.split_tau;
    d["diagnostics"] = r.diagnostics;
    return d;
}

SpectralModel model_from(const std::string& topology, const BathSpectrum& b1, std::optional<BathSpectrum> b2)
{
    if (topology == "collective")
        return SpectralModel::collective(b1);
    if (topology == "local")
        return SpectralModel::local(b1, b2.value_or(b1));
    throw DomainError("topology must be 'collective' or 'local'");
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "dimerdyn numerical core";
    m.attr("__version__") = DIMERDYN_VERSION;

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
    py::register_exception<RegimeError>(m, "RegimeError", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def("hurwitz_zeta", [](double s, cplx q) { return specfun::hurwitz_zeta_continued(s, q); },
          py::arg("s"), py::arg("q"), "zeta(s, q) for s > 0, s != 1");
    m.def("digamma", &specfun::digamma, py::arg("q"));

    py::class_<BathSpectrum>(m, "BathSpectrum")
        .def(py::init([](double p, double omega_c, double amplitude) {
                 BathSpectrum b{p, omega_c, amplitude};
                 b.validate();
                 return b;
             }),
             py::arg("p"), py::arg("omega_c"), py::arg("amplitude") = 1.0)
        .def_readonly("p", &BathSpectrum::p)
        .def_readonly("omega_c", &BathSpectrum::omega_c)
        .def_readonly("amplitude", &BathSpectrum::amplitude)
        .def("J", &BathSpectrum::J)
        .def("nu", &BathSpectrum::nu)
        .def("b_coefficient", &BathSpectrum::b_coefficient);

    py::class_<DimerParams>(m, "DimerParams")
        .def(py::init([](double epsilon, double V, double lambda1, double lambda2, double beta) {
                 DimerParams d{epsilon, V, lambda1, lambda2, beta};
                 d.validate();
                 return d;
             }),
             py::arg("epsilon"), py::arg("V"), py::arg("lambda1"), py::arg("lambda2"), py::arg("beta"))
        .def_readonly("epsilon", &DimerParams::epsilon)
        .def_readonly("V", &DimerParams::V)
        .def_readonly("lambda1", &DimerParams::lambda1)
        .def_readonly("lambda2", &DimerParams::lambda2)
        .def_readonly("beta", &DimerParams::beta);

    py::class_<SpectralModel>(m, "SpectralModel")
        .def(py::init(&model_from), py::arg("topology"), py::arg("bath1"), py::arg("bath2") = std::nullopt)
        .def_property_readonly("topology", [](const SpectralModel& s) {
            return s.topology == Topology::Collective ? "collective" : "local";
        })
        .def_readonly("bath1", &SpectralModel::bath1)
        .def_readonly("bath2", &SpectralModel::bath2);

    py::class_<DimensionlessParams>(m, "DimensionlessParams")
        .def(py::init([](const std::string& topology, double eps, double v, std::array<double, 2> e,
                         std::array<double, 2> eta, std::array<double, 2> p) {
                 DimensionlessParams d;
                 d.topology = topology == "local" ? Topology::Local : Topology::Collective;
                 if (topology != "local" && topology != "collective")
                     throw DomainError("topology must be 'collective' or 'local'");
                 d.eps = eps;
                 d.v = v;
                 (d.topology == Topology::Collective ? d.eps_c : d.eps_l) = e;
                 d.eta = eta;
                 d.p = p;
                 return d;
             }),
             py::arg("topology"), py::arg("eps"), py::arg("v"), py::arg("eps_rec"), py::arg("eta"), py::arg("p"))
        .def_readonly("eps", &DimensionlessParams::eps)
        .def_readonly("v", &DimensionlessParams::v)
        .def_readonly("eps_c", &DimensionlessParams::eps_c)
        .def_readonly("eps_l", &DimensionlessParams::eps_l)
        .def_readonly("eta", &DimensionlessParams::eta)
        .def_readonly("p", &DimensionlessParams::p)
        .def_property_readonly("x", &DimensionlessParams::x)
        .def_property_readonly("y", &DimensionlessParams::y);

    m.def("to_dimensionless", &to_dimensionless, py::arg("dimer"), py::arg("model"));
    m.def("from_dimensionless", &from_dimensionless, py::arg("params"), py::arg("beta"));

    py::class_<KernelSet>(m, "KernelSet")
        .def(py::init([](double p, double eta, const std::string& method) {
                 return KernelSet(p, eta, method == "quadrature" ? KernelMethod::Quadrature : KernelMethod::ClosedForm);
             }),
             py::arg("p"), py::arg("eta"), py::arg("method") = "closed_form")
        .def_property_readonly("p", &KernelSet::p)
        .def_property_readonly("eta", &KernelSet::eta)
        .def("q1", &KernelSet::q1, py::arg("tau"))
        .def("q2", &KernelSet::q2, py::arg("tau"))
        .def("q0", &KernelSet::q0)
        .def("saturation_time", &KernelSet::saturation_time, py::arg("tol"));

    m.def("rate_dimensionless", [](const DimensionlessParams& d) {
        const DimensionlessRate r = rate_dimensionless(d, KernelBundle::dimensionless(d));
        py::dict out;
        out["gamma_over_beta_v2"] = r.gamma_over_beta_v2;
        out["lamb_over_beta_v2"] = r.lamb_over_beta_v2;
        out["split_tau"] = r.cos_part.split_tau;
        out["diagnostics"] = r.cos_part.diagnostics;
        return out;
    }, py::arg("params"));
    m.def("gamma_exact", [](const DimerParams& d, const SpectralModel& s) {
        return report_dict(gamma_exact(d, s, KernelBundle::make(s, d.beta)));
    }, py::arg("dimer"), py::arg("model"));
    m.def("gamma_from_level_shift", [](const DimerParams& d, const SpectralModel& s) {
        return report_dict(gamma_from_level_shift(d, s, KernelBundle::make(s, d.beta)));
    }, py::arg("dimer"), py::arg("model"));
    m.def("gamma_marcus_generalized", [](const DimerParams& d, const SpectralModel& s) {
        return report_dict(gamma_marcus_generalized(d, s));
    }, py::arg("dimer"), py::arg("model"));
    m.def("gamma_marcus_dimensionless", &gamma_marcus_dimensionless,
          py::arg("eps"), py::arg("eps1"), py::arg("eps2"), py::arg("beta"), py::arg("V"));
    m.def("marcus_upper_bound", &marcus_upper_bound, py::arg("V"), py::arg("omega_c"));

    m.def("equilibrium_population", py::overload_cast<double>(&equilibrium_population), py::arg("beta_eps_hat"));
    m.def("decoherence_factor", [](const DimerParams& d, const SpectralModel& s, double t) {
        return decoherence_factor(d, s, KernelBundle::make(s, d.beta), t);
    }, py::arg("dimer"), py::arg("model"), py::arg("t"));
    m.def("gamma_infinity", [](const DimerParams& d, const SpectralModel& s) {
        return gamma_infinity(d, s, KernelBundle::make(s, d.beta));
    }, py::arg("dimer"), py::arg("model"), "None when it diverges");

    m.def("simulate_dephasing", [](double p, double eta, double y, std::size_t n_paths, double dt, double t_max,
                                   std::uint64_t seed) {
        NoiseSimConfig c;
        c.bath = {p, eta, 1.0};
        c.lambda = std::sqrt(3.14159265358979323846 * y / (4.0 * c.bath.nu()));
        c.n_paths = n_paths;
        c.dt = dt;
        c.t_max = t_max;
        c.seed = seed;
        const NoiseSimResult r = simulate_dephasing(c);
        py::dict out;
        out["tau"] = r.tau;
        out["mean_re"] = r.mean_re;
        out["mean_im"] = r.mean_im;
        out["se_re"] = r.se_re;
        out["target"] = r.target;
        out["fraction_within_3se"] = fraction_within(r, 3.0);
        return out;
    }, py::arg("p"), py::arg("eta"), py::arg("y"), py::arg("n_paths") = 10000, py::arg("dt") = 0.05,
       py::arg("t_max") = 5.0, py::arg("seed") = 1, "dimensionless MC estimate of exp(-y Q2(tau))");

    m.def("run", [](const std::string& command, std::optional<std::string> preset, std::optional<std::string> config,
                    const std::string& out, std::optional<std::uint64_t> seed, unsigned threads) {
        RunOptions o;
        o.command = command;
        o.preset = preset;
        if (config)
            o.config_path = *config;
        o.out_dir = out;
        o.seed = seed;
        o.threads = threads;
        std::vector<std::string> files;
        for (const auto& f : dimerdyn::run(o).files)
            files.push_back(f.string());
        return files;
    }, py::arg("command"), py::arg("preset") = std::nullopt, py::arg("config") = std::nullopt,
       py::arg("out") = ".", py::arg("seed") = std::nullopt, py::arg("threads") = 1,
       "run a CLI command; returns the written paths");
}
