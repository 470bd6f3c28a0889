#pragma once

#include <functional>
#include <vector>

namespace smf {

struct QuadratureResult {
    std::vector<double> value;
    std::vector<double> error;
    int intervals = 0;
    bool converged = false;
};

// Globally adaptive Gauss-Kronrod (7/15) quadrature of a vector-valued
// integrand on [a, b].  Subdivision stops once every component satisfies
// error <= max(abs_tol, rel_tol * |value|).
QuadratureResult integrate_adaptive(const std::function<std::vector<double>(double)>& f, std::size_t dim,
                                    double a, double b, double abs_tol, double rel_tol,
                                    int max_intervals = 2000);

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol,
                          double rel_tol, int max_intervals = 2000);

// Area of the intersection of the disk |x - c| < r with [x0,x1] x [y0,y1].
double disk_rect_overlap(double cx, double cy, double r, double x0, double x1, double y0, double y1);

} // namespace smf
