// specfun.cpp — Euler–Maclaurin Hurwitz zeta and asymptotic digamma

#include "dimerdyn/specfun.hpp"

#include <array>
#include <cmath>
#include <string>

#include "dimerdyn/error.hpp"

namespace dimerdyn::specfun {

namespace {

// B_{2k} / (2k)!, k = 1..6
constexpr std::array<double, 6> kBernoulliOverFactorial = {
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
};

// B_{2k} / (2k), k = 1..7, for the digamma asymptotic series
constexpr std::array<double, 7> kBernoulliOverIndex = {
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
};

cplx euler_maclaurin(double s, cplx q)
{
    // Shift threshold grows with s so the first omitted term (B₁₄) stays
    // below 1e-14 relative to the leading one.
    const double threshold = 10.0 + 2.0 * s;
    cplx head = 0.0;
    while (std::abs(q) < threshold) {
        head += std::exp(-s * std::log(q));
        q += 1.0;
    }

    const cplx log_q = std::log(q);
    const cplx q_pow = std::exp(-s * log_q); // q^{-s}
    const cplx inv_q = 1.0 / q;
    const cplx inv_q2 = inv_q * inv_q;

    cplx tail = q * q_pow / (s - 1.0) + 0.5 * q_pow;

    // term_k = B_{2k}/(2k)! · s(s+1)…(s+2k-2) · q^{-s-2k+1}
    double pochhammer = s;
    cplx power = q_pow * inv_q;
    for (std::size_t k = 0; k < kBernoulliOverFactorial.size(); ++k) {
        tail += kBernoulliOverFactorial[k] * pochhammer * power;
        const double a = s + 2.0 * static_cast<double>(k) + 1.0;
        pochhammer *= a * (a + 1.0);
        power *= inv_q2;
    }
    return head + tail;
}

} // namespace

cplx hurwitz_zeta(double s, cplx q)
{
    if (!(s > 1.0) || !std::isfinite(s))
        throw DomainError("hurwitz_zeta: requires s > 1, got s = " + std::to_string(s));
    if (!(q.real() > 0.0))
        throw DomainError("hurwitz_zeta: requires Re(q) > 0");
    return euler_maclaurin(s, q);
}

cplx hurwitz_zeta_continued(double s, cplx q)
{
    if (!(s > 0.0) || s == 1.0 || !std::isfinite(s))
        throw DomainError("hurwitz_zeta_continued: requires s > 0, s != 1");
    if (!(q.real() > 0.0))
        throw DomainError("hurwitz_zeta_continued: requires Re(q) > 0");
    return euler_maclaurin(s, q);
}

cplx digamma(cplx q)
{
    if (!(q.real() > 0.0))
        throw DomainError("digamma: requires Re(q) > 0");
    cplx shift = 0.0;
    while (std::abs(q) < 10.0) {
        shift += 1.0 / q;
        q += 1.0;
    }
    const cplx inv_q = 1.0 / q;
    const cplx inv_q2 = inv_q * inv_q;
    cplx series = 0.0;
    cplx power = inv_q2;
    for (double c : kBernoulliOverIndex) {
        series += c * power;
        power *= inv_q2;
    }
    return std::log(q) - 0.5 * inv_q - series - shift;
}

double riemann_zeta(double s)
{
    if (!(s > 1.0))
        throw DomainError("riemann_zeta: requires s > 1");
    return hurwitz_zeta(s, cplx(1.0, 0.0)).real();
}

} // namespace dimerdyn::specfun
