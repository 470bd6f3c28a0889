#include "smf/blowup.hpp"

#include "smf/errors.hpp"
#include "smf/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace smf {

namespace {

constexpr double kPi = std::numbers::pi;

// Nodes whose cells meet the disk of radius r about c, with the fraction of
// each cell covered.
struct CellHit {
    std::size_t index;
    double fraction;
};

std::vector<CellHit> disk_cells(int n, Point c, double r) {
    const double h = 1.0 / n;
    const int ci = static_cast<int>(std::lround(c.x * n));
    const int cj = static_cast<int>(std::lround(c.y * n));
    const double ox = ci * h - c.x, oy = cj * h - c.y;
    const int reach = static_cast<int>(std::ceil(r * n)) + 2;
    auto index = [n](int i, int j) {
        return static_cast<std::size_t>(((i % n) + n) % n) * n + static_cast<std::size_t>(((j % n) + n) % n);
    };
    std::vector<CellHit> out;
    for (int di = -reach; di <= reach; ++di)
        for (int dj = -reach; dj <= reach; ++dj) {
            const double x = di * h + ox, y = dj * h + oy;
            const double a = disk_rect_overlap(0.0, 0.0, r, x - 0.5 * h, x + 0.5 * h, y - 0.5 * h, y + 0.5 * h);
            if (a > 0.0) out.push_back({index(ci + di, cj + dj), a * n * n});
        }
    return out;
}

double node_mass(const ScalarField& u, const Problem& pb, std::size_t k) {
    return std::abs(pb.h[k]) * std::exp(u[k] + pb.weight.log_density[k]) * pb.grid->area_weights[k];
}

} // namespace

Diagnostics diagnostics(const ScalarField& u, const Problem& problem) {
    require_same_shape(u, problem.h, "diagnostics");
    Diagnostics d;
    d.lambda_max = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < u.size(); ++k)
        if (!problem.weight.is_singular(k) && u[k] > d.lambda_max) {
            d.lambda_max = u[k];
            d.argmax = k;
        }
    d.mean_u = integrate(u, *problem.grid);
    d.dirichlet = dirichlet_energy(u, *problem.grid);
    return d;
}

double blowup_threshold(const Problem& problem) { return 1.0 / (2.0 * (1.0 + problem.alpha_bar)); }

double blowup_mass(const ScalarField& u, Point center, double r, const Problem& problem) {
    require_same_shape(u, problem.h, "blowup_mass");
    if (!(r > 0.0) || r > 0.25) throw PreconditionError("blowup_mass: radius must lie in (0, 0.25]");
    double acc = 0.0;
    for (const CellHit& c : disk_cells(u.n(), wrap(center), r)) acc += c.fraction * node_mass(u, problem, c.index);
    return acc;
}

std::vector<MassSample> mass_profile(const ScalarField& u, Point center, const Problem& problem) {
    std::vector<MassSample> out;
    const double h = 1.0 / u.n();
    for (double cells = 1.0; cells * h < 0.25; cells *= 2.0)
        out.push_back({cells * h, blowup_mass(u, center, cells * h, problem)});
    out.push_back({0.25, blowup_mass(u, center, 0.25, problem)});
    return out;
}

Concentration detect_concentration(const ScalarField& u, const Problem& problem, double ceiling) {
    require_same_shape(u, problem.h, "detect_concentration");
    const int n = u.n();
    Concentration c;
    std::size_t arg = 0;
    for (std::size_t k = 1; k < u.size(); ++k)
        if (u[k] > u[arg]) arg = k;
    c.node = arg;
    c.point = u.node(arg);
    c.lambda = u[arg];
    if (!(c.lambda > ceiling - 2.0)) return c;
    c.conclusive = true;

    const double h = 1.0 / n;
    const double thr = blowup_threshold(problem);
    c.primary_mass = blowup_mass(u, c.point, 8.0 * h, problem);

    // Node-inclusion ball sums of radius 8 cells from periodic row prefix sums.
    std::vector<double> prefix(static_cast<std::size_t>(n) * (n + 1), 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            prefix[i * (n + 1) + j + 1] = prefix[i * (n + 1) + j] + node_mass(u, problem, u.index(i, j));
    auto row_sum = [&](int i, int j0, int j1) {
        // Sum of row i over columns j0..j1 (inclusive, periodic, j1 - j0 < n).
        i = ((i % n) + n) % n;
        const double* p = &prefix[i * (n + 1)];
        int a = ((j0 % n) + n) % n;
        const int len = j1 - j0 + 1;
        if (a + len <= n) return p[a + len] - p[a];
        return (p[n] - p[a]) + p[a + len - n];
    };
    const int ai = static_cast<int>(arg / n), aj = static_cast<int>(arg % n);
    c.second_mass = 0.0;
    for (int i = 0; i < n; ++i) {
        int di = std::abs(i - ai);
        di = std::min(di, n - di);
        for (int j = 0; j < n; ++j) {
            int dj = std::abs(j - aj);
            dj = std::min(dj, n - dj);
            if (di * di + dj * dj <= 16 * 16) continue;
            double s = 0.0;
            for (int oi = -8; oi <= 8; ++oi) {
                const int w = static_cast<int>(std::floor(std::sqrt(64.0 - oi * oi)));
                s += row_sum(i + oi, j - w, j + w);
            }
            if (s > c.second_mass) {
                c.second_mass = s;
                c.second_point = u.node(u.index(i, j));
            }
        }
    }
    c.single = c.second_mass < 0.5 * thr;
    c.h_positive = problem.h[arg] > 0.0;
    c.angle_minimal = conical_order(c.point, problem) == problem.alpha_bar;
    return c;
}

BubbleProfile::BubbleProfile(double H, double alpha_bar) : H_(H), abar_(alpha_bar) {
    if (!(H > 0.0) || !std::isfinite(H)) throw PreconditionError("bubble_profile: H must be positive");
    if (!(alpha_bar > -1.0) || alpha_bar > 0.0)
        throw PreconditionError("bubble_profile: alpha_bar must lie in (-1, 0]");
}

double BubbleProfile::operator()(double r) const {
    const double beta = 1.0 + abar_;
    return -2.0 * std::log1p(kPi / beta * H_ * std::pow(r, 2.0 * beta));
}

double BubbleProfile::mass() const {
    // With s = r^beta the integrand becomes 2 pi H s / (beta (1 + c s^2)^2),
    // c = pi H / beta; the tail beyond s = S integrates to 1 / (1 + c S^2).
    const double beta = 1.0 + abar_;
    const double c = kPi * H_ / beta;
    const double S = std::sqrt(1e4 / c);
    const double body = integrate_adaptive(
        [&](double s) {
            const double q = 1.0 + c * s * s;
            return 2.0 * kPi * H_ * s / (beta * q * q);
        },
        0.0, S, 1e-14, 1e-13);
    return body + 1.0 / (1.0 + c * S * S);
}

BubbleProfile bubble_profile(double H, double alpha_bar) { return BubbleProfile(H, alpha_bar); }

RescaledComparison compare_rescaled(const ScalarField& u, Point x, const Problem& problem, double r_cmp) {
    require_same_shape(u, problem.h, "compare_rescaled");
    if (!(r_cmp > 0.0)) throw PreconditionError("compare_rescaled: r_cmp must be positive");
    const int n = u.n();
    const std::size_t node = nearest_node(n, x);
    x = u.node(node);
    RescaledComparison rc;
    const double beta = 1.0 + problem.alpha_bar;
    rc.lambda = u[node];
    rc.r_k = std::exp(-rc.lambda / (2.0 * beta));
    rc.r_k_flat = rc.r_k * std::exp(-0.5 * problem.grid->psi[node]);
    const CapitalH H = capital_H(x, problem);
    rc.H = H.value;
    if (!(H.value > 0.0)) {
        rc.reason = "H(x) is not positive";
        return rc;
    }
    const double reach = rc.r_k_flat * r_cmp;
    if (reach < 4.0 / n) {
        rc.reason = "rescaled ball below 4 cells";
        return rc;
    }
    if (reach > 0.25) {
        rc.reason = "rescaled ball exceeds 0.25";
        return rc;
    }
    const BubbleProfile phi(H.value, problem.alpha_bar);
    constexpr int kRings = 10, kAngles = 16;
    std::vector<Point> pts;
    std::vector<double> prof;
    for (int a = 0; a <= kRings; ++a) {
        const double xi = r_cmp * a / kRings;
        for (int b = 0; b < (a == 0 ? 1 : kAngles); ++b) {
            const double t = 2.0 * kPi * b / kAngles;
            pts.push_back(wrap({x.x + rc.r_k_flat * xi * std::cos(t), x.y + rc.r_k_flat * xi * std::sin(t)}));
            prof.push_back(phi(xi));
        }
    }
    const std::vector<double> vals = fourier_sample(u, pts);
    for (std::size_t i = 0; i < vals.size(); ++i)
        rc.deviation = std::max(rc.deviation, std::abs(vals[i] - rc.lambda - prof[i]));
    rc.conclusive = true;
    return rc;
}

double circle_average(const FourierInterpolant& u, Point c, double r, int m) {
    std::vector<Point> pts(m);
    for (int i = 0; i < m; ++i) {
        const double t = 2.0 * kPi * i / m;
        pts[i] = wrap({c.x + r * std::cos(t), c.y + r * std::sin(t)});
    }
    double acc = 0.0;
    for (double v : u(pts)) acc += v;
    return acc / m;
}

EnergyDecomposition energy_decomposition(const ScalarField& u, Point x, double delta, double R,
                                         const Problem& problem) {
    require_same_shape(u, problem.h, "energy_decomposition");
    const std::size_t node = nearest_node(u.n(), x);
    const double beta = 1.0 + problem.alpha_bar;
    const double rk = std::exp(-u[node] / (2.0 * beta)) * std::exp(-0.5 * problem.grid->psi[node]);
    return energy_decomposition_radii(u, x, R * rk, delta, problem);
}

EnergyDecomposition energy_decomposition_radii(const ScalarField& u, Point x, double inner_radius, double delta,
                                               const Problem& problem) {
    require_same_shape(u, problem.h, "energy_decomposition");
    if (!(inner_radius > 0.0) || !(inner_radius < delta) || delta > 0.25)
        throw PreconditionError("energy_decomposition: degenerate annulus (need 0 < R r_k < delta <= 0.25)");
    const int n = u.n();
    x = wrap(x);
    const ScalarField dens = gradient_density(u, *problem.grid);
    EnergyDecomposition e;
    e.inner_radius = inner_radius;
    e.delta = delta;
    const double cell = 1.0 / (static_cast<double>(n) * n);
    for (double v : dens.values()) e.total += v * cell;
    double in_delta = 0.0;
    for (const CellHit& c : disk_cells(n, x, delta)) in_delta += c.fraction * dens[c.index] * cell;
    for (const CellHit& c : disk_cells(n, x, inner_radius)) e.inner += c.fraction * dens[c.index] * cell;
    e.outer = e.total - in_delta;
    e.neck = in_delta - e.inner;
    if (std::abs(e.outer + e.neck + e.inner - e.total) > 1e-8 * std::max(1.0, e.total))
        throw NumericalError("energy_decomposition: parts do not add up");

    const FourierInterpolant ui(u);
    const double a_out = circle_average(ui, x, delta);
    const double a_in = circle_average(ui, x, inner_radius);
    e.capacity = 2.0 * kPi * (a_out - a_in) * (a_out - a_in) / (std::log(delta) - std::log(inner_radius));
    return e;
}

BlowupReport blowup_report(const ScalarField& u, const Problem& problem, const BlowupOptions& opts) {
    BlowupReport rep;
    rep.diagnostics = diagnostics(u, problem);
    rep.threshold = blowup_threshold(problem);
    rep.concentration = detect_concentration(u, problem, opts.ceiling);
    rep.argmax_point = rep.concentration.point;
    rep.mass_profile = mass_profile(u, rep.argmax_point, problem);
    rep.far_field_deviation = std::numeric_limits<double>::quiet_NaN();
    rep.bubble = compare_rescaled(u, rep.argmax_point, problem, opts.r_cmp);
    if (!rep.bubble.conclusive && rep.bubble.reason.empty()) rep.bubble.reason = "not resolved";
    const double inner = opts.r_cmp * rep.bubble.r_k_flat;
    if (inner > 0.0 && inner < opts.delta && opts.delta <= 0.25) {
        rep.decomposition = energy_decomposition_radii(u, rep.argmax_point, inner, opts.delta, problem);
    } else {
        rep.decomposition_note = "annulus degenerate: R r_k >= delta";
    }
    if (rep.concentration.conclusive) {
        const GreenData g = problem.green->green(rep.concentration.node);
        double dev = 0.0;
        for (std::size_t k = 0; k < u.size(); ++k) {
            if (flat_distance(u.node(k), rep.argmax_point) < opts.delta) continue;
            dev = std::max(dev, std::abs(u[k] - rep.diagnostics.mean_u - problem.rho_bar * g.field[k]));
        }
        rep.far_field_deviation = dev;
    }
    return rep;
}

} // namespace smf
