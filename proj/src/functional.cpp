#include "smf/functional.hpp"

#include "smf/errors.hpp"
#include "smf/spectral.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <string>

namespace smf {

namespace {

constexpr double kPi = std::numbers::pi;

} // namespace

LogMass log_constraint_mass(const ScalarField& u, const Problem& pb) {
    require_same_shape(u, pb.h, "constraint_mass");
    const auto& ld = pb.weight.log_density;
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < u.size(); ++k)
        if (pb.h[k] != 0.0) m = std::max(m, u[k] + ld[k]);
    LogMass out;
    if (!std::isfinite(m)) {
        out.sign = 0.0;
        out.log_value = -std::numeric_limits<double>::infinity();
        return out;
    }
    out.saturated = m > kExpSaturation;
    double acc = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k)
        if (pb.h[k] != 0.0) acc += pb.h[k] * std::exp(u[k] + ld[k] - m) * pb.grid->area_weights[k];
    if (acc == 0.0) {
        out.sign = 0.0;
        out.log_value = -std::numeric_limits<double>::infinity();
        return out;
    }
    out.sign = acc > 0.0 ? 1.0 : -1.0;
    out.log_value = m + std::log(std::abs(acc));
    return out;
}

double alpha_bar(const std::vector<SingularSource>& sources) {
    double a = 0.0;
    for (const auto& s : sources) {
        if (!(s.alpha > -1.0)) throw PreconditionError("alpha_bar: alpha must exceed -1");
        a = std::min(a, s.alpha);
    }
    return a;
}

double rho_bar(const std::vector<SingularSource>& sources) { return 8.0 * kPi * (1.0 + alpha_bar(sources)); }

Problem make_problem(std::shared_ptr<const GreenSolver> green, ScalarField h,
                     std::vector<SingularSource> sources) {
    if (!green) throw PreconditionError("make_problem: null Green solver");
    Problem pb;
    pb.green = std::move(green);
    pb.grid = pb.green->grid_ptr();
    const int n = pb.grid->n;
    require_same_shape(h, pb.grid->psi, "make_problem");
    if (!h.all_finite()) throw PreconditionError("make_problem: h has non-finite values");
    if (!(h.max() > 0.0)) throw PreconditionError("make_problem: h must be positive somewhere");
    for (std::size_t i = 0; i < sources.size(); ++i) {
        if (!(sources[i].alpha > -1.0))
            throw PreconditionError("make_problem: source " + std::to_string(i) + " has alpha <= -1");
        const std::size_t k = nearest_node(n, sources[i].position);
        for (std::size_t j = 0; j < pb.source_nodes.size(); ++j)
            if (pb.source_nodes[j] == k)
                throw PreconditionError("make_problem: sources " + std::to_string(j) + " and " +
                                        std::to_string(i) + " coincide on the grid");
        pb.source_nodes.push_back(k);
        sources[i].position = h.node(k);
    }
    pb.h = std::move(h);
    pb.sources = std::move(sources);
    for (std::size_t k : pb.source_nodes) pb.source_greens.push_back(pb.green->green(k));
    pb.weight = singular_weight(*pb.green, pb.sources, pb.source_greens);
    pb.alpha_bar = alpha_bar(pb.sources);
    pb.rho_bar = 8.0 * kPi * (1.0 + pb.alpha_bar);
    return pb;
}

Problem make_problem(const GridPtr& grid, ScalarField h, std::vector<SingularSource> sources) {
    return make_problem(std::make_shared<const GreenSolver>(grid), std::move(h), std::move(sources));
}

double conical_order(Point p, const std::vector<SingularSource>& sources) {
    for (const auto& s : sources)
        if (flat_distance(s.position, p) < 1e-12) return s.alpha;
    return 0.0;
}

double conical_order(Point p, const Problem& problem) { return conical_order(p, problem.sources); }

double conical_angle(Point p, const std::vector<SingularSource>& sources) {
    return 2.0 * kPi * (1.0 + conical_order(p, sources));
}

ScalarField transform_v_to_u(const ScalarField& v, const Problem& problem) {
    require_same_shape(v, problem.h, "transform_v_to_u");
    return v + problem.weight.log_weight;
}

ScalarField transform_u_to_v(const ScalarField& u, const Problem& problem) {
    require_same_shape(u, problem.h, "transform_u_to_v");
    return u - problem.weight.log_weight;
}

MassValue constraint_mass(const ScalarField& u, const Problem& problem) {
    const LogMass lm = log_constraint_mass(u, problem);
    MassValue out;
    out.saturated = lm.saturated;
    out.value = lm.sign == 0.0 ? 0.0 : lm.sign * std::exp(lm.log_value);
    return out;
}

FunctionalValue evaluate(const ScalarField& u, double rho, const Problem& problem) {
    FunctionalValue fv;
    fv.dirichlet = 0.5 * dirichlet_energy(u, *problem.grid);
    fv.mean_term = rho * integrate(u, *problem.grid);
    fv.j_value = fv.dirichlet + fv.mean_term;
    const LogMass lm = log_constraint_mass(u, problem);
    fv.saturated = lm.saturated;
    fv.constraint_mass = lm.sign == 0.0 ? 0.0 : lm.sign * std::exp(lm.log_value);
    fv.mass_ok = lm.sign > 0.0;
    fv.f_value = fv.mass_ok ? fv.j_value - rho * lm.log_value : std::numeric_limits<double>::quiet_NaN();
    return fv;
}

ScalarField free_gradient(const ScalarField& u, double rho, const Problem& problem) {
    const LogMass lm = log_constraint_mass(u, problem);
    if (!(lm.sign > 0.0)) throw NumericalError("free_gradient: constraint mass is not positive");
    ScalarField g = laplace_beltrami(u, *problem.grid);
    const auto& ld = problem.weight.log_density;
    for (std::size_t k = 0; k < g.size(); ++k)
        g[k] = -g[k] + rho * (1.0 - problem.h[k] * std::exp(u[k] + ld[k] - lm.log_value));
    return g;
}

DeficitReport mt_check(const ScalarField& u, const Problem& problem) {
    const TorusGrid& grid = *problem.grid;
    const double d = dirichlet_energy(u, grid);
    double scale = 1.0;
    for (double v : u.values()) scale = std::max(scale, std::abs(v));
    if (!(d > 1e-24 * scale * scale)) throw PreconditionError("mt_check: u is constant");
    const double beta = 1.0 + problem.alpha_bar;
    const auto& ld = problem.weight.log_density;
    const auto& aw = grid.area_weights;

    DeficitReport out;
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < u.size(); ++k) m = std::max(m, u[k] + ld[k]);
    double acc = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) acc += std::exp(u[k] + ld[k] - m) * aw[k];
    out.saturated = m > kExpSaturation;
    out.d5 = d / (16.0 * kPi * beta) + integrate(u, grid) - (m + std::log(acc));

    double wsum = 0.0, wu = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        wsum += problem.weight.density[k] * aw[k];
        wu += u[k] * problem.weight.density[k] * aw[k];
    }
    const double c = wu / wsum;
    const double inv = 1.0 / std::sqrt(d);
    double e_max = -std::numeric_limits<double>::infinity();
    std::vector<double> ex(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) {
        const double uh = (u[k] - c) * inv;
        ex[k] = 4.0 * kPi * beta * uh * uh + ld[k];
        e_max = std::max(e_max, ex[k]);
    }
    if (e_max > kExpSaturation) out.saturated = true;
    double acc3 = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) acc3 += std::exp(ex[k] - e_max) * aw[k];
    out.d3 = e_max + std::log(acc3);
    return out;
}

ScalarField random_band_limited(int n, int kmax, double dirichlet, std::mt19937_64& rng) {
    if (kmax < 1 || 2 * kmax >= n) throw PreconditionError("random_band_limited: need 1 <= kmax < n/2");
    if (!(dirichlet > 0.0)) throw PreconditionError("random_band_limited: dirichlet must be positive");
    std::normal_distribution<double> normal(0.0, 1.0);
    const double n2 = double(n) * n;
    HalfSpectrum s;
    s.n = n;
    s.c.assign(static_cast<std::size_t>(n) * s.cols(), cplx(0.0, 0.0));
    double d = 0.0;
    for (int kx = -kmax; kx <= kmax; ++kx) {
        for (int ky = 0; ky <= kmax; ++ky) {
            if (ky == 0 && kx <= 0) continue;
            const double k2 = double(kx) * kx + double(ky) * ky;
            if (k2 > double(kmax) * kmax) continue;
            const double a = normal(rng) / k2;
            const double b = normal(rng) / k2;
            d += 0.5 * (a * a + b * b) * 4.0 * kPi * kPi * k2;
            const cplx c = 0.5 * n2 * cplx(a, -b);
            const int i = (kx + n) % n;
            s.at(i, ky) = c;
            if (ky == 0) s.at((n - kx) % n, 0) = std::conj(c);
        }
    }
    ScalarField u = fft_for(n)->backward(s);
    u *= std::sqrt(dirichlet / d);
    return u;
}

MtProbe mt_probe(const Problem& problem, int samples, std::uint64_t seed, double dirichlet, int kmax) {
    if (samples < 1) throw PreconditionError("mt_probe: samples must be positive");
    MtProbe out;
    out.samples = samples;
    out.seed = seed;
    out.dirichlet = dirichlet;
    out.kmax = kmax;
    std::mt19937_64 rng(seed);
    out.d3_max = -std::numeric_limits<double>::infinity();
    out.d5_min = std::numeric_limits<double>::infinity();
    out.d5_max = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (int i = 0; i < samples; ++i) {
        const ScalarField u = random_band_limited(problem.grid->n, kmax, dirichlet, rng);
        const DeficitReport r = mt_check(u, problem);
        out.d5.push_back(r.d5);
        if (r.saturated) ++out.saturated;
        if (r.d5 < out.d5_min) {
            out.d5_min = r.d5;
            out.d5_argmin = static_cast<std::size_t>(i);
        }
        out.d5_max = std::max(out.d5_max, r.d5);
        out.d3_max = std::max(out.d3_max, r.d3);
        sum += r.d5;
    }
    out.d5_mean = sum / samples;
    return out;
}

} // namespace smf
