// specfun.hpp — Hurwitz/Riemann zeta and digamma for complex arguments

#pragma once

#include <complex>

namespace dimerdyn::specfun {

using cplx = std::complex<double>;

// ζ(s, q) = Σ_{n≥0} (n+q)^{-s} for s > 1 and Re q > 0.
//
// q is shifted upward by the recurrence ζ(s,q) = q^{-s} + ζ(s,q+1) until
// |q| is large enough, then the Euler–Maclaurin tail with Bernoulli terms
// through B₁₂ is added. Relative accuracy is about 1e-13 over the tested
// range (1 < s ≤ 10, 0 < Re q, |Im q| ≤ 1e4). Throws DomainError otherwise.
cplx hurwitz_zeta(double s, cplx q);

// Same evaluation path, extended to 0 < s < 1 by analytic continuation
// (the Euler–Maclaurin formula is valid for any s ≠ 1). Used for the
// sub-ohmic kernels, where only differences ζ(s,q) − ζ(s,q') matter.
cplx hurwitz_zeta_continued(double s, cplx q);

// ψ(q) for Re q > 0.
cplx digamma(cplx q);

// ζ(s) = Re ζ(s, 1), s > 1.
double riemann_zeta(double s);

} // namespace dimerdyn::specfun
