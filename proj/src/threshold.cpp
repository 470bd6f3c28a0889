#include "smf/threshold.hpp"

#include "smf/errors.hpp"
#include "smf/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace smf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kRingPoints = 32;

// C-infinity step: 1 for r <= a, 0 for r >= b.
double smooth_cut(double r, double a, double b) {
    if (r <= a) return 1.0;
    if (r >= b) return 0.0;
    const double t = (r - a) / (b - a);
    const double e1 = std::exp(-1.0 / t), e2 = std::exp(-1.0 / (1.0 - t));
    return e2 / (e1 + e2);
}

struct Candidate {
    std::size_t node;
    double value;
};

double node_value(const Problem& pb, std::size_t k, double robin) {
    double v = 4.0 * kPi * robin + std::log(pb.h[k]);
    for (std::size_t j = 0; j < pb.sources.size(); ++j)
        if (pb.source_nodes[j] != k) v -= 4.0 * kPi * pb.sources[j].alpha * pb.source_greens[j].field[k];
    return v;
}

} // namespace

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::ExistsByI: return "exists_by_i";
    case Verdict::ExistsByII: return "exists_by_ii";
    case Verdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

double lambda_from_value(double rho_bar, double alpha_bar, double value) {
    return -rho_bar * (1.0 + std::log(kPi / (1.0 + alpha_bar))) - rho_bar * value;
}

ThresholdReport lambda_threshold(const Problem& pb) {
    const int n = pb.grid->n;
    ThresholdReport rep;
    rep.alpha_bar = pb.alpha_bar;
    rep.rho_bar = pb.rho_bar;
    rep.lambda = std::numeric_limits<double>::quiet_NaN();

    if (pb.alpha_bar < 0.0) {
        std::optional<Candidate> best;
        for (std::size_t i = 0; i < pb.sources.size(); ++i) {
            const std::size_t k = pb.source_nodes[i];
            if (pb.sources[i].alpha != pb.alpha_bar || !(pb.h[k] > 0.0)) continue;
            rep.candidates.push_back(pb.sources[i].position);
            const double v = node_value(pb, k, pb.source_greens[i].robin);
            if (!best || v > best->value || (v == best->value && k < best->node)) best = Candidate{k, v};
        }
        rep.candidate_count = rep.candidates.size();
        if (!best) {
            rep.candidates_empty = true;
            rep.verdict = Verdict::ExistsByI;
            return rep;
        }
        rep.argmax_node = best->node;
        rep.argmax_point = pb.h.node(best->node);
        rep.grid_argmax_value = rep.argmax_value = best->value;
    } else {
        const ScalarField robin = pb.green->robin_field();
        ScalarField val(n, -std::numeric_limits<double>::infinity());
        std::vector<bool> excluded(val.size(), false);
        for (std::size_t j = 0; j < pb.sources.size(); ++j)
            if (pb.sources[j].alpha > 0.0) excluded[pb.source_nodes[j]] = true;
        std::optional<Candidate> best;
        for (std::size_t k = 0; k < val.size(); ++k) {
            if (excluded[k] || !(pb.h[k] > 0.0)) continue;
            ++rep.candidate_count;
            val[k] = node_value(pb, k, robin[k]);
            if (!best || val[k] > best->value) best = Candidate{k, val[k]};
        }
        if (!best) {
            rep.candidates_empty = true;
            rep.verdict = Verdict::ExistsByI;
            return rep;
        }
        rep.argmax_node = best->node;
        rep.argmax_point = pb.h.node(best->node);
        rep.grid_argmax_value = rep.argmax_value = best->value;

        // One Newton step on the 3x3 quadratic fit, kept within one cell.
        const int i = static_cast<int>(best->node / n), j = static_cast<int>(best->node % n);
        auto v = [&](int di, int dj) { return val(i + di, j + dj); };
        bool finite = true;
        for (int di = -1; di <= 1; ++di)
            for (int dj = -1; dj <= 1; ++dj) finite = finite && std::isfinite(v(di, dj));
        if (finite) {
            const double gx = 0.5 * (v(1, 0) - v(-1, 0)), gy = 0.5 * (v(0, 1) - v(0, -1));
            const double hxx = v(1, 0) - 2.0 * v(0, 0) + v(-1, 0);
            const double hyy = v(0, 1) - 2.0 * v(0, 0) + v(0, -1);
            const double hxy = 0.25 * (v(1, 1) - v(1, -1) - v(-1, 1) + v(-1, -1));
            const double det = hxx * hyy - hxy * hxy;
            if (hxx < 0.0 && det > 0.0) {
                const double dx = -(hyy * gx - hxy * gy) / det;
                const double dy = -(hxx * gy - hxy * gx) / det;
                if (std::abs(dx) <= 1.0 && std::abs(dy) <= 1.0) {
                    const double q = v(0, 0) + gx * dx + gy * dy +
                                     0.5 * (hxx * dx * dx + 2.0 * hxy * dx * dy + hyy * dy * dy);
                    if (q > rep.argmax_value) {
                        rep.argmax_value = q;
                        rep.argmax_point = wrap({(i + dx) / n, (j + dy) / n});
                    }
                }
            }
        }
    }
    rep.lambda = lambda_from_value(pb.rho_bar, pb.alpha_bar, rep.argmax_value);
    rep.verdict = Verdict::Inconclusive;
    return rep;
}

Verdict existence_verdict(const ThresholdReport& report, std::optional<double> inf_estimate, double margin) {
    if (report.candidates_empty) return Verdict::ExistsByI;
    if (inf_estimate && *inf_estimate < report.lambda - margin) return Verdict::ExistsByII;
    return Verdict::Inconclusive;
}

Verdict existence_verdict(const Problem& problem, std::optional<double> inf_estimate, double margin) {
    return existence_verdict(lambda_threshold(problem), inf_estimate, margin);
}

double test_inner(const TestFunctionData& tf, double r) {
    return -2.0 * std::log(tf.epsilon + std::pow(r, 2.0 * tf.beta)) + std::log(tf.epsilon);
}

double test_cutoff(const TestFunctionData& tf, double r) {
    if (r <= tf.r_eps) return 1.0;
    if (r >= 2.0 * tf.r_eps) return 0.0;
    const double t = (r - tf.r_eps) / tf.r_eps;
    return 1.0 - t * t * (3.0 - 2.0 * t);
}

TestFunctionData build_test_function(double epsilon, Point p_star, const Problem& pb) {
    if (!(epsilon > 0.0) || !(epsilon < std::exp(-8.0)))
        throw PreconditionError("build_test_function: epsilon must lie in (0, e^-8)");
    const int n = pb.grid->n;
    TestFunctionData tf;
    tf.epsilon = epsilon;
    tf.center_node = nearest_node(n, p_star);
    tf.center = pb.h.node(tf.center_node);
    if (conical_order(tf.center, pb) != pb.alpha_bar)
        throw PreconditionError("build_test_function: alpha(p*) differs from alpha_bar");
    if (!(pb.h[tf.center_node] > 0.0)) throw PreconditionError("build_test_function: h(p*) must be positive");

    tf.beta = 1.0 + pb.alpha_bar;
    const double L = -std::log(epsilon);
    tf.r_eps = 1.0 / L;
    tf.gamma_eps = std::exp(L / (2.0 * tf.beta)) / L;
    tf.scale = std::exp(0.5 * pb.grid->psi[tf.center_node]);
    tf.r_eps_flat = tf.r_eps / tf.scale;
    if (!(2.0 * tf.r_eps_flat < kSigmaRadius))
        throw PreconditionError("build_test_function: 2 r_eps exceeds the sigma radius");

    tf.green = pb.green->green(tf.center_node);
    tf.robin = tf.green.robin;
    tf.robin_flat = tf.green.robin_flat;
    const double rho = pb.rho_bar;
    // log gamma^{2 beta} = L - 2 beta log L.
    const double log_g = L - 2.0 * tf.beta * std::log(L);
    tf.c_eps = -2.0 * std::log1p(std::exp(-log_g)) - rho * tf.robin;
    const double K = tf.c_eps - L;

    tf.field = ScalarField(n);
    for (std::size_t k = 0; k < tf.field.size(); ++k) {
        const double rf = flat_distance(tf.field.node(k), tf.center);
        const double r = tf.scale * rf;
        if (r <= tf.r_eps) {
            tf.field[k] = test_inner(tf, r);
        } else {
            const double G = tf.green.field[k];
            const double sigma = G + std::log(rf) / (2.0 * kPi) - tf.robin_flat;
            tf.field[k] = rho * (G - test_cutoff(tf, r) * sigma) + tf.c_eps - L;
        }
    }

    const GreenEvaluator ev(pb.green, tf.green);
    const Point q = wrap({tf.center.x + tf.r_eps_flat, tf.center.y});
    const double outer = rho * (ev.value(q) - ev.sigma(q)) + K;
    tf.interface_mismatch = std::abs(test_inner(tf, tf.r_eps) - outer);
    return tf;
}

TestFunctionEnergy test_function_energy(const TestFunctionData& tf, const Problem& pb, double disk_radius) {
    const TorusGrid& grid = *pb.grid;
    const int n = grid.n;
    if (tf.field.n() != n) throw PreconditionError("test_function_energy: grid mismatch");
    const double rho = pb.rho_bar, beta = tf.beta, eps = tf.epsilon, s = tf.scale;
    const double K = tf.c_eps + std::log(eps);
    const Point p = tf.center;
    const double alpha_p = conical_order(p, pb);

    // Polar disk of flat radius b, clear of every other source.
    if (!(disk_radius > 0.0) || disk_radius > 0.45)
        throw PreconditionError("test_function_energy: disk radius must lie in (0, 0.45]");
    double b = disk_radius;
    std::vector<GreenEvaluator> others;
    std::vector<double> other_alpha;
    for (std::size_t j = 0; j < pb.sources.size(); ++j) {
        if (pb.source_nodes[j] == tf.center_node) continue;
        b = std::min(b, 0.5 * flat_distance(pb.sources[j].position, p));
        others.emplace_back(pb.green, pb.source_greens[j]);
        other_alpha.push_back(pb.sources[j].alpha);
    }
    const double r1 = tf.r_eps_flat, r2 = 2.0 * tf.r_eps_flat;
    const double a = std::max(0.6 * b, 1.1 * r2);
    if (!(a < 0.95 * b)) throw PreconditionError("test_function_energy: polar disk too small for this epsilon");

    const GreenEvaluator ev(pb.green, tf.green);
    const FourierInterpolant psi_i(grid.psi, 1e-17);
    const FourierInterpolant h_i(pb.h, 1e-17);

    // Ring averages (times 2 pi r) of: chi|grad phi|^2, chi phi e^psi,
    // chi * mass density, |grad phi|^2, G e^psi, phi e^psi, e^psi.
    constexpr std::size_t kDim = 7;
    auto ring = [&](double r) {
        std::vector<double> acc(kDim, 0.0);
        const double ri = s * r;
        const double chi = smooth_cut(r, a, b);
        for (int m = 0; m < kRingPoints; ++m) {
            const double t = 2.0 * kPi * m / kRingPoints;
            const double c = std::cos(t), sn = std::sin(t);
            const Point x = wrap({p.x + r * c, p.y + r * sn});
            const double epsi = std::exp(psi_i(x));
            const double reg = ev.regular(x);
            const double G = reg - std::log(r) / (2.0 * kPi);
            const double sigma = reg - tf.robin_flat;
            double phi, gx, gy, log_e;  // log_e = phi - 4 pi alpha_p G
            if (ri <= tf.r_eps) {
                const double rb = std::pow(ri, 2.0 * beta);
                phi = -2.0 * std::log(eps + rb) + std::log(eps);
                const double dphi = -4.0 * beta * rb / (r * (eps + rb));
                gx = dphi * c;
                gy = dphi * sn;
                log_e = std::log(eps) - 2.0 * std::log(eps + rb) + 2.0 * alpha_p * std::log(r) -
                        4.0 * kPi * alpha_p * (tf.robin_flat + sigma);
            } else {
                const double eta = test_cutoff(tf, ri);
                double deta = 0.0;
                if (ri < 2.0 * tf.r_eps) {
                    const double u = (ri - tf.r_eps) / tf.r_eps;
                    deta = -6.0 * u * (1.0 - u) * s / tf.r_eps;
                }
                const auto rg = ev.regular_gradient(x);
                const double gr = -1.0 / (2.0 * kPi * r);
                phi = rho * (G - eta * sigma) + K;
                gx = rho * (gr * c + (1.0 - eta) * rg[0] - deta * sigma * c);
                gy = rho * (gr * sn + (1.0 - eta) * rg[1] - deta * sigma * sn);
                log_e = phi - 4.0 * kPi * alpha_p * G;
            }
            double weight = 0.0;
            if (chi > 0.0) {
                double lw = 0.0;
                for (std::size_t j = 0; j < others.size(); ++j) lw -= 4.0 * kPi * other_alpha[j] * others[j].value(x);
                weight = h_i(x) * std::exp(lw + log_e) * epsi;
            }
            const double g2 = gx * gx + gy * gy;
            acc[0] += chi * g2;
            acc[1] += chi * phi * epsi;
            acc[2] += chi * weight;
            acc[3] += g2;
            acc[4] += G * epsi;
            acc[5] += phi * epsi;
            acc[6] += epsi;
        }
        for (double& v : acc) v *= 2.0 * kPi * r / kRingPoints;
        return acc;
    };

    TestFunctionEnergy out;
    out.disk_radius = b;
    std::vector<double> I(kDim, 0.0);
    out.quadrature_converged = true;
    auto panel = [&](double lo, double hi, bool log_scale) {
        QuadratureResult q;
        if (log_scale) {
            q = integrate_adaptive(
                [&](double t) {
                    const double r = std::exp(t);
                    auto v = ring(r);
                    for (double& x : v) x *= r;
                    return v;
                },
                kDim, std::log(lo), std::log(hi), 1e-13, 1e-11, 4000);
        } else {
            q = integrate_adaptive(ring, kDim, lo, hi, 1e-13, 1e-11, 4000);
        }
        for (std::size_t d = 0; d < kDim; ++d) I[d] += q.value[d];
        out.quadrature_intervals += q.intervals;
        out.quadrature_converged = out.quadrature_converged && q.converged;
    };
    const double r_lo = 1e-10 * std::pow(eps, 1.0 / (2.0 * beta)) / s;
    panel(r_lo, r1, true);
    panel(r1, r2, false);
    panel(r2, a, true);
    panel(a, b, false);

    // Grid part: (1 - chi) times smooth integrands, phi = rho G + K there.
    double d_grid = 0.0, mean_grid = 0.0, mass_grid = 0.0;
    const double cell = 1.0 / (static_cast<double>(n) * n);
    for (std::size_t k = 0; k < tf.field.size(); ++k) {
        const Point x = tf.field.node(k);
        const double w = 1.0 - smooth_cut(flat_distance(x, p), a, b);
        if (w == 0.0) continue;
        const auto g = ev.gradient(x);
        d_grid += w * rho * rho * (g[0] * g[0] + g[1] * g[1]) * cell;
        mean_grid += w * tf.field[k] * grid.area_weights[k];
        mass_grid += w * pb.h[k] * std::exp(tf.field[k] + pb.weight.log_density[k]) * grid.area_weights[k];
    }

    // Green identity: int_{M \ B} |grad G|^2 = int_B G dmu - b * oint G dG/dr.
    double flux = 0.0;
    constexpr int kFlux = 64;
    for (int m = 0; m < kFlux; ++m) {
        const double t = 2.0 * kPi * m / kFlux;
        const Point x = wrap({p.x + b * std::cos(t), p.y + b * std::sin(t)});
        const auto g = ev.gradient(x);
        flux += ev.value(x) * (g[0] * std::cos(t) + g[1] * std::sin(t));
    }
    flux *= 2.0 * kPi * b / kFlux;

    out.dirichlet = I[0] + d_grid;
    out.mean = I[1] + mean_grid;
    out.mass = I[2] + mass_grid;
    out.dirichlet_green = I[3] + rho * rho * (I[4] - flux);
    out.mean_green = I[5] - rho * I[4] + K * (1.0 - I[6]);

    out.value.dirichlet = 0.5 * out.dirichlet;
    out.value.mean_term = rho * out.mean;
    out.value.j_value = out.value.dirichlet + out.value.mean_term;
    out.value.constraint_mass = out.mass;
    out.value.mass_ok = out.mass > 0.0;
    out.value.f_value =
        out.value.mass_ok ? out.value.j_value - rho * std::log(out.mass) : std::numeric_limits<double>::quiet_NaN();

    const double A = tf.robin;
    out.dirichlet_predicted = -2.0 * rho * std::log(eps) - 2.0 * rho + rho * rho * A;
    out.mean_predicted = std::log(eps) - rho * A;
    const CapitalH H = capital_H(p, pb);
    out.mass_predicted = kPi / beta * H.value;
    const double value = 4.0 * kPi * A + std::log(H.value) + 4.0 * kPi * pb.alpha_bar * A;
    out.lambda = lambda_from_value(rho, pb.alpha_bar, value);
    out.gap = out.value.f_value - out.lambda;
    return out;
}

} // namespace smf
