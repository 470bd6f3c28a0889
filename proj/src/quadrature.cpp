#include "smf/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <queue>

namespace smf {

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
using Gauss = boost::math::quadrature::gauss<double, 7>;

struct Interval {
    double a, b;
    std::vector<double> value, error;
    double priority;
    bool operator<(const Interval& o) const { return priority < o.priority; }
};

Interval gk15(const std::function<std::vector<double>(double)>& f, std::size_t dim, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    std::vector<double> k(dim, 0.0), g(dim, 0.0);
    // Non-negative nodes in ascending order; the Gauss nodes are the
    // even-indexed Kronrod nodes.
    const auto& xk = Kronrod::abscissa();
    const auto& wk = Kronrod::weights();
    const auto& wg = Gauss::weights();
    const std::vector<double> fc = f(c);
    for (std::size_t d = 0; d < dim; ++d) {
        k[d] = wk[0] * fc[d];
        g[d] = wg[0] * fc[d];
    }
    for (std::size_t i = 1; i < xk.size(); ++i) {
        const std::vector<double> f1 = f(c - h * xk[i]);
        const std::vector<double> f2 = f(c + h * xk[i]);
        for (std::size_t d = 0; d < dim; ++d) {
            const double s = f1[d] + f2[d];
            k[d] += wk[i] * s;
            if (i % 2 == 0) g[d] += wg[i / 2] * s;
        }
    }
    Interval out{a, b, std::vector<double>(dim), std::vector<double>(dim), 0.0};
    for (std::size_t d = 0; d < dim; ++d) {
        out.value[d] = k[d] * h;
        out.error[d] = std::abs((k[d] - g[d]) * h);
    }
    return out;
}

} // namespace

QuadratureResult integrate_adaptive(const std::function<std::vector<double>(double)>& f, std::size_t dim,
                                    double a, double b, double abs_tol, double rel_tol, int max_intervals) {
    QuadratureResult res;
    res.value.assign(dim, 0.0);
    res.error.assign(dim, 0.0);
    if (a == b) {
        res.converged = true;
        return res;
    }
    std::vector<Interval> done;
    std::priority_queue<Interval> heap;
    auto push = [&](Interval iv) {
        double p = 0.0;
        for (double e : iv.error) p = std::max(p, e);
        iv.priority = p;
        heap.push(std::move(iv));
    };
    push(gk15(f, dim, a, b));
    int count = 1;
    for (;;) {
        std::vector<double> tv(dim, 0.0), te(dim, 0.0);
        std::priority_queue<Interval> copy = heap;
        while (!copy.empty()) {
            const Interval& iv = copy.top();
            for (std::size_t d = 0; d < dim; ++d) {
                tv[d] += iv.value[d];
                te[d] += iv.error[d];
            }
            copy.pop();
        }
        for (const Interval& iv : done)
            for (std::size_t d = 0; d < dim; ++d) {
                tv[d] += iv.value[d];
                te[d] += iv.error[d];
            }
        bool ok = true;
        for (std::size_t d = 0; d < dim; ++d)
            if (te[d] > std::max(abs_tol, rel_tol * std::abs(tv[d]))) ok = false;
        res.value = tv;
        res.error = te;
        res.intervals = count;
        if (ok) {
            res.converged = true;
            return res;
        }
        if (count >= max_intervals || heap.empty()) return res;
        Interval worst = heap.top();
        heap.pop();
        const double m = 0.5 * (worst.a + worst.b);
        if (!(m > worst.a && m < worst.b)) {
            done.push_back(std::move(worst));
            continue;
        }
        push(gk15(f, dim, worst.a, m));
        push(gk15(f, dim, m, worst.b));
        ++count;
    }
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol, double rel_tol,
                          int max_intervals) {
    auto r = integrate_adaptive([&](double x) { return std::vector<double>{f(x)}; }, 1, a, b, abs_tol, rel_tol,
                                max_intervals);
    return r.value[0];
}

double disk_rect_overlap(double cx, double cy, double r, double x0, double x1, double y0, double y1) {
    // Shift to disk-centred coordinates and integrate the clipped chord length.
    x0 -= cx;
    x1 -= cx;
    y0 -= cy;
    y1 -= cy;
    const double lo = std::max(x0, -r), hi = std::min(x1, r);
    if (!(hi > lo) || y1 <= -r || y0 >= r) return 0.0;
    auto chord = [r](double s) { return std::sqrt(std::max(0.0, r * r - s * s)); };
    auto prim = [r, &chord](double s) { return 0.5 * (s * chord(s) + r * r * std::asin(std::clamp(s / r, -1.0, 1.0))); };

    std::vector<double> cuts = {lo, hi};
    for (double y : {y0, y1})
        if (std::abs(y) < r) {
            const double s = std::sqrt(r * r - y * y);
            for (double v : {-s, s})
                if (v > lo && v < hi) cuts.push_back(v);
        }
    std::sort(cuts.begin(), cuts.end());
    double area = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        if (!(b > a)) continue;
        const double m = 0.5 * (a + b), cm = chord(m);
        const bool top_is_chord = cm < y1, bottom_is_chord = -cm > y0;
        const double top = top_is_chord ? cm : y1, bottom = bottom_is_chord ? -cm : y0;
        if (top <= bottom) continue;
        const double top_int = top_is_chord ? prim(b) - prim(a) : y1 * (b - a);
        const double bottom_int = bottom_is_chord ? -(prim(b) - prim(a)) : y0 * (b - a);
        area += top_int - bottom_int;
    }
    return area;
}

} // namespace smf
