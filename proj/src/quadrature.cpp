// quadrature.cpp — adaptive Gauss–Kronrod driver over Boost.Math rule tables

#include "dimerdyn/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace dimerdyn::quad {

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
using Gauss = boost::math::quadrature::gauss<double, 10>;

struct Segment {
    double a, b;
    Result r;
    bool operator<(const Segment& other) const { return r.error < other.r.error; }
};

} // namespace

Result kronrod21(const Integrand& f, double a, double b)
{
    // Kronrod abscissae x_0 = 0, x_1..x_10; the Gauss-10 nodes are x_1, x_3, …, x_9.
    const auto& xk = Kronrod::abscissa();
    const auto& wk = Kronrod::weights();
    const auto& wg = Gauss::weights();

    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    std::array<double, 10> fplus{}, fminus{};
    const double f0 = f(center);
    double kronrod = f0 * wk[0];
    double gauss = 0.0;
    double l1 = std::abs(f0) * wk[0];
    for (std::size_t i = 1; i < xk.size(); ++i) {
        const double dx = half * xk[i];
        const double fp = f(center + dx);
        const double fm = f(center - dx);
        fplus[i - 1] = fp;
        fminus[i - 1] = fm;
        kronrod += wk[i] * (fp + fm);
        l1 += wk[i] * (std::abs(fp) + std::abs(fm));
        if (i % 2 == 1)
            gauss += wg[(i - 1) / 2] * (fp + fm);
    }

    const double mean = kronrod / 2.0;
    double asc = wk[0] * std::abs(f0 - mean);
    for (std::size_t i = 1; i < xk.size(); ++i)
        asc += wk[i] * (std::abs(fplus[i - 1] - mean) + std::abs(fminus[i - 1] - mean));

    Result r;
    r.value = kronrod * half;
    r.l1 = l1 * std::abs(half);
    r.evaluations = 21;
    asc *= std::abs(half);
    double err = std::abs((kronrod - gauss) * half);
    if (asc != 0.0 && err != 0.0)
        err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
    const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * r.l1;
    r.error = std::max(err, roundoff);
    return r;
}

Result integrate(const Integrand& f, double a, double b, const Tolerance& tol)
{
    std::priority_queue<Segment> heap;
    Result first = kronrod21(f, a, b);
    heap.push({a, b, first});
    double value = first.value;
    double error = first.error;
    double l1 = first.l1;
    std::size_t evals = first.evaluations;
    std::size_t splits = 0;

    auto target = [&] { return std::max(tol.abs, tol.rel * std::abs(value)); };

    while (error > target() && splits < tol.max_subdivisions) {
        Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            heap.push(worst);
            break;
        }
        Result left = kronrod21(f, worst.a, mid);
        Result right = kronrod21(f, mid, worst.b);
        value += left.value + right.value - worst.r.value;
        error += left.error + right.error - worst.r.error;
        l1 += left.l1 + right.l1 - worst.r.l1;
        evals += left.evaluations + right.evaluations;
        heap.push({worst.a, mid, left});
        heap.push({mid, worst.b, right});
        ++splits;
    }

    // Re-sum to shed the drift of the incremental updates.
    double v = 0.0, e = 0.0;
    std::vector<Segment> segs;
    segs.reserve(heap.size());
    while (!heap.empty()) {
        segs.push_back(heap.top());
        heap.pop();
    }
    std::sort(segs.begin(), segs.end(), [](const Segment& x, const Segment& y) { return x.a < y.a; });
    for (const auto& s : segs) {
        v += s.r.value;
        e += s.r.error;
    }

    Result out;
    out.value = v;
    out.error = e;
    out.l1 = l1;
    out.evaluations = evals;
    out.converged = e <= std::max(tol.abs, tol.rel * std::abs(v));
    return out;
}

Result integrate_panels(const Integrand& f, double a, double b, double panel,
                        const Tolerance& tol)
{
    Result total;
    if (!(b > a))
        return total;
    const double span = b - a;
    const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(span / panel)));
    const double width = span / static_cast<double>(n);
    Tolerance local = tol;
    local.abs = tol.abs / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double lo = a + width * static_cast<double>(i);
        const double hi = (i + 1 == n) ? b : lo + width;
        Result r = integrate(f, lo, hi, local);
        total.value += r.value;
        total.error += r.error;
        total.l1 += r.l1;
        total.evaluations += r.evaluations;
        total.converged = total.converged && r.converged;
    }
    return total;
}

} // namespace dimerdyn::quad
