#include "smf/solver.hpp"

#include "smf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace smf {

namespace {

constexpr double kPi = std::numbers::pi;

double dot_mu(const ScalarField& a, const ScalarField& b, const TorusGrid& grid) {
    double acc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * b[k] * grid.area_weights[k];
    return acc;
}

double sup_norm(const ScalarField& a) {
    double m = 0.0;
    for (double v : a.values()) m = std::max(m, std::abs(v));
    return m;
}

// Riesz representer of g in the flat H^1 inner product: (-Lap + 1) d = e^psi g.
ScalarField precondition(const ScalarField& g, const TorusGrid& grid) {
    ScalarField rhs = g;
    for (std::size_t k = 0; k < rhs.size(); ++k) rhs[k] *= grid.exp_psi[k];
    return apply_symbol(*grid.fft, rhs, [](int kx, int ky) {
        return 1.0 / (4.0 * kPi * kPi * (double(kx) * kx + double(ky) * ky) + 1.0);
    });
}

// Shift u so that its constraint mass is one; returns false when the mass is
// not positive.
bool normalize(ScalarField& u, const Problem& pb) {
    const LogMass lm = log_constraint_mass(u, pb);
    if (!(lm.sign > 0.0) || !std::isfinite(lm.log_value)) return false;
    u += -lm.log_value;
    return true;
}

double regular_max(const ScalarField& u, const Problem& pb) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < u.size(); ++k)
        if (!pb.weight.is_singular(k)) m = std::max(m, u[k]);
    return m;
}

} // namespace

double residual(const ScalarField& u, double rho, const Problem& problem) {
    const MassValue m = constraint_mass(u, problem);
    if (std::abs(m.value - 1.0) > 1e-8)
        throw PreconditionError("residual: u is not normalized (mass " + std::to_string(m.value) + ")");
    const TorusGrid& grid = *problem.grid;
    ScalarField lap = laplace_beltrami(u, grid);
    double acc = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (problem.weight.is_singular(k)) continue;
        const double r = lap[k] - rho * (1.0 - problem.h[k] * problem.weight.density[k] * std::exp(u[k]));
        acc += r * r * grid.area_weights[k];
    }
    return std::sqrt(acc);
}

SolveReport minimize(const Problem& problem, double rho, const ScalarField& u0, const SolveOptions& opts) {
    const TorusGrid& grid = *problem.grid;
    if (!(rho < problem.rho_bar))
        throw PreconditionError("minimize: rho must be below rho_bar = " + std::to_string(problem.rho_bar));
    if (!(opts.gradient_tol > 0.0) || opts.max_iters < 0)
        throw PreconditionError("minimize: invalid options");
    require_same_shape(u0, problem.h, "minimize");

    SolveReport rep;
    rep.rho = rho;
    rep.mass_lower_bound = 1.0 / problem.h.max();

    ScalarField u = u0;
    auto feasible = [&](const ScalarField& v) {
        const MassValue m = constraint_mass(v, problem);
        return m.value > 0.0 && std::isfinite(m.value) && !m.saturated;
    };
    if (!feasible(u)) {
        ScalarField hp(grid.n);
        const double hmax = problem.h.max();
        for (std::size_t k = 0; k < hp.size(); ++k) hp[k] = std::max(problem.h[k], 0.0) / hmax;
        bool ok = false;
        for (double s = 1.0; s <= 64.0 && !ok; s *= 2.0) {
            ScalarField v = u0;
            for (std::size_t k = 0; k < v.size(); ++k) v[k] += s * hp[k];
            if (feasible(v)) {
                u = std::move(v);
                ok = true;
            }
        }
        if (!ok) throw NumericalError("minimize: infeasible start (constraint mass not positive)");
        rep.recovered_start = true;
    }
    if (!normalize(u, problem)) throw NumericalError("minimize: cannot normalize start");

    const auto& ld = problem.weight.log_density;
    double f = evaluate(u, rho, problem).f_value;
    rep.f_history.push_back(f);

    ScalarField d_prev, pg_prev, g_prev;
    int it = 0;
    rep.status = "max_iters";
    for (;; ++it) {
        ScalarField lap = laplace_beltrami(u, grid);
        ScalarField g(grid.n);
        for (std::size_t k = 0; k < g.size(); ++k)
            g[k] = -lap[k] + rho * (1.0 - problem.h[k] * std::exp(u[k] + ld[k]));
        ScalarField pg = opts.precondition ? precondition(g, grid) : g;
        rep.gradient_sup = sup_norm(pg);
        if (rep.gradient_sup < opts.gradient_tol) {
            rep.status = "converged";
            break;
        }
        if (it >= opts.max_iters) break;

        ScalarField d(grid.n);
        bool cg = false;
        if (!d_prev.empty()) {
            const double num = dot_mu(g, pg, grid) - dot_mu(g, pg_prev, grid);
            const double den = dot_mu(g_prev, pg_prev, grid);
            const double beta = den > 0.0 ? std::max(0.0, num / den) : 0.0;
            if (beta > 0.0) {
                for (std::size_t k = 0; k < d.size(); ++k) d[k] = -pg[k] + beta * d_prev[k];
                cg = dot_mu(g, d, grid) < 0.0;
            }
        }
        if (!cg)
            for (std::size_t k = 0; k < d.size(); ++k) d[k] = -pg[k];

        // Pieces of F(u + t d) - F(u) that do not suffer from cancellation.
        // Mass is one on entry, so the log term is log1p(sum m_k expm1(t d_k)).
        std::vector<double> mk(u.size());
        for (std::size_t k = 0; k < u.size(); ++k)
            mk[k] = problem.h[k] * std::exp(u[k] + ld[k]) * grid.area_weights[k];
        auto line = [&](const ScalarField& dir, double& slope_out) {
            slope_out = dot_mu(g, dir, grid);
            return std::array<double, 3>{-dot_mu(dir, lap, grid), dirichlet_energy(dir, grid),
                                         integrate(dir, grid)};
        };
        double slope = 0.0;
        auto coef = line(d, slope);

        // Line derivatives in t: S0 = sum m (e^{td} - 1), S1 = sum m d e^{td},
        // S2 = sum m d^2 e^{td}.
        auto moments = [&](double t, double& s0, double& s1, double& s2) {
            s0 = s1 = s2 = 0.0;
            for (std::size_t k = 0; k < u.size(); ++k) {
                if (mk[k] == 0.0) continue;
                const double e = t * d[k];
                if (e > kExpSaturation) return false;
                const double ex = std::exp(e);
                s0 += mk[k] * std::expm1(e);
                s1 += mk[k] * d[k] * ex;
                s2 += mk[k] * d[k] * d[k] * ex;
            }
            return std::isfinite(s0) && 1.0 + s0 >= opts.min_mass;
        };
        // Trial step from a few safeguarded Newton iterations on the line
        // derivative; falls back to t = 1.
        auto trial_step = [&]() {
            double t = 0.0;
            for (int k = 0; k < 8; ++k) {
                double s0, s1, s2;
                if (!moments(t, s0, s1, s2)) break;
                const double M = 1.0 + s0;
                const double dphi = coef[0] + t * coef[1] + rho * coef[2] - rho * s1 / M;
                const double ddphi = coef[1] - rho * (s2 / M - (s1 / M) * (s1 / M));
                if (!(ddphi > 0.0)) break;
                const double next = t - dphi / ddphi;
                if (!(next > 0.0) || !std::isfinite(next) || next > 1e6) break;
                const bool done = std::abs(next - t) <= 1e-3 * next;
                t = next;
                if (done) break;
            }
            return t > 0.0 ? t : 1.0;
        };

        bool accepted = false;
        for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
            double t = trial_step();
            for (int b = 0; b < opts.max_backtracks; ++b, t *= opts.backtrack) {
                double s = 0.0;
                bool bad = false;
                for (std::size_t k = 0; k < u.size(); ++k) {
                    if (mk[k] == 0.0) continue;
                    const double e = t * d[k];
                    if (e > kExpSaturation) {
                        bad = true;
                        break;
                    }
                    s += mk[k] * std::expm1(e);
                }
                if (bad || !(1.0 + s >= opts.min_mass) || !std::isfinite(s)) continue;
                const double df = t * coef[0] + 0.5 * t * t * coef[1] + rho * t * coef[2] - rho * std::log1p(s);
                if (df <= opts.sufficient_decrease * t * slope) {
                    for (std::size_t k = 0; k < u.size(); ++k) u[k] += t * d[k] - std::log1p(s);
                    f += df;
                    accepted = true;
                    break;
                }
            }
            if (!accepted && cg) {
                for (std::size_t k = 0; k < d.size(); ++k) d[k] = -pg[k];
                coef = line(d, slope);
                cg = false;
            } else {
                break;
            }
        }
        if (!accepted) {
            rep.status = "line_search_stalled";
            break;
        }
        if (f > rep.f_history.back()) rep.f_monotone = false;
        rep.f_history.push_back(f);
        normalize(u, problem);
        d_prev = std::move(d);
        pg_prev = std::move(pg);
        g_prev = std::move(g);

        if (regular_max(u, problem) > opts.lambda_ceiling) {
            rep.status = "lambda_ceiling";
            rep.aborted = true;
            ++it;
            break;
        }
    }
    rep.iterations = it;
    normalize(u, problem);
    rep.value = evaluate(u, rho, problem);
    rep.residual_l2 = residual(u, rho, problem);
    rep.lambda_max = regular_max(u, problem);
    rep.mean_u = integrate(u, grid);
    rep.dirichlet = dirichlet_energy(u, grid);
    double me = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k)
        me += std::exp(u[k] + ld[k]) * grid.area_weights[k];
    rep.mass_e = me;
    rep.converged = rep.status == "converged" && rep.residual_l2 < opts.residual_tol;
    rep.u = std::move(u);
    return rep;
}

std::vector<double> default_schedule(double rho_bar, int K) {
    if (K < 1) throw PreconditionError("default_schedule: K must be positive");
    std::vector<double> s;
    for (int k = 1; k <= K; ++k) s.push_back(rho_bar * (1.0 - std::ldexp(1.0, -k)));
    return s;
}

ContinuationRun continuation(const Problem& problem, const std::vector<double>& schedule, SolveOptions opts,
                             double lambda_ceiling) {
    if (schedule.empty()) throw PreconditionError("continuation: empty schedule");
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        if (!(schedule[i] < problem.rho_bar)) throw PreconditionError("continuation: rho must stay below rho_bar");
        if (i > 0 && !(schedule[i] > schedule[i - 1]))
            throw PreconditionError("continuation: schedule must be strictly increasing");
    }
    opts.lambda_ceiling = lambda_ceiling;
    ContinuationRun run;
    ScalarField u(problem.grid->n, 0.0);
    for (double rho : schedule) {
        SolveReport rep = minimize(problem, rho, u, opts);
        u = rep.u;
        const bool abort = rep.aborted;
        run.steps.push_back(std::move(rep));
        if (abort) {
            run.blowup = true;
            break;
        }
    }
    return run;
}

} // namespace smf
