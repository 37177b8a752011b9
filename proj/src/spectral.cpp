// spectral.cpp — spectral density family and parameter mappings

#include "dimerdyn/spectral.hpp"

#include <cmath>
#include <numbers>

#include "dimerdyn/error.hpp"
#include "dimerdyn/quadrature.hpp"

namespace dimerdyn {

namespace {

constexpr double kPi = std::numbers::pi;

bool finite(double x) { return std::isfinite(x); }

} // namespace

void DimerParams::validate() const
{
    if (!(beta > 0.0) || !finite(beta))
        throw DomainError("beta must be positive and finite");
    if (!finite(epsilon) || !finite(V) || !finite(lambda1) || !finite(lambda2))
        throw DomainError("dimer parameters must be finite");
}

double BathSpectrum::J(double omega) const
{
    if (omega < 0.0)
        throw DomainError("J(omega) requires omega >= 0");
    if (omega == 0.0)
        return 0.0;
    return amplitude * std::exp((2.0 * p + 2.0) * std::log(omega) - omega / omega_c);
}

double BathSpectrum::nu() const
{
    return amplitude * std::pow(omega_c, 2.0 * p + 2.0) * std::tgamma(2.0 * p + 2.0);
}

std::optional<double> BathSpectrum::b_coefficient() const
{
    if (!(p > 0.0))
        return std::nullopt;
    return amplitude * std::pow(omega_c, 2.0 * p) * std::tgamma(2.0 * p);
}

void BathSpectrum::validate() const
{
    if (!(p > -0.5) || !finite(p))
        throw DomainError("infrared exponent must satisfy p > -1/2");
    if (!(omega_c > 0.0) || !finite(omega_c))
        throw DomainError("cutoff omega_c must be positive");
    if (!(amplitude > 0.0) || !finite(amplitude))
        throw DomainError("amplitude A_p must be positive");
}

const BathSpectrum& SpectralModel::bath(int j) const
{
    if (j != 1 && j != 2)
        throw DomainError("reservoir index must be 1 or 2");
    if (topology == Topology::Collective || j == 1)
        return bath1;
    return bath2;
}

bool SpectralModel::identical_baths() const
{
    if (topology == Topology::Collective)
        return true;
    return bath1.p == bath2.p && bath1.omega_c == bath2.omega_c && bath1.amplitude == bath2.amplitude;
}

void SpectralModel::validate() const
{
    bath1.validate();
    if (topology == Topology::Local)
        bath2.validate();
}

DerivedScalars derive_scalars(const DimerParams& dimer, const SpectralModel& model)
{
    dimer.validate();
    model.validate();

    const BathSpectrum& b1 = model.bath(1);
    const BathSpectrum& b2 = model.bath(2);
    const double l1 = dimer.lambda1;
    const double l2 = dimer.lambda2;

    DerivedScalars s;
    s.nu1 = b1.nu();
    s.nu2 = (model.topology == Topology::Collective) ? s.nu1 : b2.nu();
    s.alpha1 = 2.0 * l1 * l1 * s.nu1 / kPi;
    s.alpha2 = 2.0 * l2 * l2 * s.nu2 / kPi;
    s.epsilon_hat = dimer.epsilon - 0.5 * (s.alpha1 - s.alpha2);
    s.eps_rec_local = {2.0 * s.nu1 * l1 * l1 / kPi, 2.0 * s.nu2 * l2 * l2 / kPi};
    if (model.identical_baths()) {
        const double k = 2.0 * s.nu1 / kPi;
        s.eps_rec_collective = std::array<double, 2>{k * l1 * (l1 - l2), k * l2 * (l2 - l1)};
    }
    s.b1 = b1.b_coefficient();
    s.b2 = b2.b_coefficient();
    return s;
}

std::array<double, 2> reconstruction_energies(const DimerParams& dimer, const SpectralModel& model)
{
    const DerivedScalars s = derive_scalars(dimer, model);
    if (model.topology == Topology::Collective)
        return *s.eps_rec_collective;
    return s.eps_rec_local;
}

double DimensionlessParams::x() const
{
    const auto& e = (topology == Topology::Collective) ? eps_c : eps_l;
    return 0.5 * (e[0] - e[1]);
}

double DimensionlessParams::y() const
{
    const auto& e = (topology == Topology::Collective) ? eps_c : eps_l;
    return 0.5 * (e[0] + e[1]);
}

DimensionlessParams to_dimensionless(const DimerParams& dimer, const SpectralModel& model)
{
    const DerivedScalars s = derive_scalars(dimer, model);
    const double b = dimer.beta;

    DimensionlessParams d;
    d.topology = model.topology;
    d.eps = b * dimer.epsilon;
    d.v = b * dimer.V;
    if (s.eps_rec_collective)
        d.eps_c = {b * (*s.eps_rec_collective)[0], b * (*s.eps_rec_collective)[1]};
    d.eps_l = {b * s.eps_rec_local[0], b * s.eps_rec_local[1]};
    d.eta = {b * model.bath(1).omega_c, b * model.bath(2).omega_c};
    d.p = {model.bath(1).p, model.bath(2).p};
    return d;
}

std::pair<DimerParams, SpectralModel> from_dimensionless(const DimensionlessParams& d, double beta)
{
    if (!(beta > 0.0))
        throw DomainError("beta must be positive");

    BathSpectrum b1{d.p[0], d.eta[0] / beta, 1.0};
    BathSpectrum b2{d.p[1], d.eta[1] / beta, 1.0};
    SpectralModel model = (d.topology == Topology::Collective)
        ? SpectralModel::collective(b1)
        : SpectralModel::local(b1, b2);
    model.validate();

    DimerParams dimer;
    dimer.beta = beta;
    dimer.epsilon = d.eps / beta;
    dimer.V = d.v / beta;

    if (d.topology == Topology::Collective) {
        // ε_{c,1} + ε_{c,2} = k(λ₁−λ₂)², ε_{c,1} − ε_{c,2} = k(λ₁² − λ₂²), k = 2βν/π
        const double k = 2.0 * beta * b1.nu() / kPi;
        const double sum = d.eps_c[0] + d.eps_c[1];
        const double diff = d.eps_c[0] - d.eps_c[1];
        if (sum < 0.0)
            throw DomainError("collective reconstruction energies must have a nonnegative sum");
        if (sum == 0.0) {
            if (diff != 0.0)
                throw DomainError("zero reconstruction sum requires equal reconstruction energies");
        } else {
            const double delta = std::sqrt(sum / k);   // λ₁ − λ₂
            const double total = diff / (k * delta);    // λ₁ + λ₂
            dimer.lambda1 = 0.5 * (total + delta);
            dimer.lambda2 = 0.5 * (total - delta);
        }
    } else {
        if (d.eps_l[0] < 0.0 || d.eps_l[1] < 0.0)
            throw DomainError("local reconstruction energies must be nonnegative");
        dimer.lambda1 = std::sqrt(kPi * d.eps_l[0] / (2.0 * beta * b1.nu()));
        dimer.lambda2 = std::sqrt(kPi * d.eps_l[1] / (2.0 * beta * b2.nu()));
    }
    return {dimer, model};
}

double j_from_frequency_density(const SpectralFn& rho, const SpectralFn& g, double omega)
{
    const double gv = g(omega);
    return kPi * rho(omega) * gv * gv;
}

double j_from_dispersion_3d(const std::function<double(double, double, double)>& g, double omega)
{
    quad::Tolerance tol{1e-13, 1e-11, 100};
    auto shell = [&](double theta) {
        auto ring = [&](double phi) {
            const double v = g(omega, theta, phi);
            return v * v;
        };
        return std::sin(theta) * quad::integrate(ring, 0.0, 2.0 * kPi, tol).value;
    };
    const double solid = quad::integrate(shell, 0.0, kPi, tol).value;
    return 0.5 * kPi * omega * omega * solid;
}

} // namespace dimerdyn
