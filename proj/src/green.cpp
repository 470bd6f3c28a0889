#include "smf/green.hpp"

#include "smf/errors.hpp"
#include "smf/functional.hpp"

#include <limits>
#include <numbers>
#include <string>

namespace smf {

namespace {

constexpr double kPi = std::numbers::pi;

std::size_t require_node(int n, Point p, const char* where) {
    const std::size_t k = nearest_node(n, p);
    ScalarField probe(n);
    if (flat_distance(probe.node(k), wrap(p)) > 1e-9)
        throw PreconditionError(std::string(where) + ": point is not a grid node");
    return k;
}

ScalarField make_sigma(const ScalarField& g, std::size_t pole, double robin_flat) {
    ScalarField s(g.n(), std::numeric_limits<double>::quiet_NaN());
    const Point p = g.node(pole);
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double r = flat_distance(g.node(k), p);
        if (k == pole)
            s[k] = 0.0;
        else if (r < kSigmaRadius)
            s[k] = g[k] + std::log(r) / (2.0 * kPi) - robin_flat;
    }
    return s;
}

} // namespace

GreenSolver::GreenSolver(GridPtr grid, double tau) : grid_(std::move(grid)), ewald_(tau) {
    if (!grid_) throw PreconditionError("GreenSolver: null grid");
    const int n = grid_->n;
    a_flat_ = ewald_.robin();
    base_ = ewald_.node_field(n, {0.0, 0.0}, pole_cell_log() + a_flat_);
    if (grid_->flat) {
        w_ = ScalarField(n, 0.0);
    } else {
        ScalarField rhs = grid_->exp_psi;
        rhs += -1.0;
        w_ = flat_poisson_solve(rhs, *grid_);
    }
    w_mean_ = integrate(w_, *grid_);
    w_i_ = FourierInterpolant(w_, 1e-17);
    w_dx_ = w_i_.derivative_x();
    w_dy_ = w_i_.derivative_y();
}

double GreenSolver::pole_cell_log() const {
    const double h = 1.0 / grid_->n;
    return -(std::log(h) + lattice_log_constant()) / (2.0 * kPi);
}

GreenData GreenSolver::green(std::size_t node) const {
    const int n = grid_->n;
    if (node >= static_cast<std::size_t>(n) * n) throw PreconditionError("GreenSolver::green: bad node");
    GreenData gd;
    gd.pole_index = node;
    gd.pole = base_.node(node);
    const int pi = static_cast<int>(node / n), pj = static_cast<int>(node % n);

    ScalarField g(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = base_(i - pi, j - pj) + w_(i, j);

    // Mean-zero shift from the corrected node quadrature; the pole cell
    // already holds the lattice-corrected value of the log singularity.
    gd.shift = -integrate(g, *grid_);
    g += gd.shift;

    gd.robin_flat = a_flat_ + w_[node] + gd.shift;
    gd.robin = gd.robin_flat + grid_->psi[node] / (4.0 * kPi);
    gd.pole_cell = g[node];
    gd.sigma_field = make_sigma(g, node, gd.robin_flat);
    gd.field = std::move(g);
    return gd;
}

ScalarField GreenSolver::robin_field_flat() const {
    ScalarField a(grid_->n);
    for (std::size_t k = 0; k < a.size(); ++k) a[k] = a_flat_ + 2.0 * w_[k] - w_mean_;
    return a;
}

ScalarField GreenSolver::robin_field() const {
    ScalarField a = robin_field_flat();
    for (std::size_t k = 0; k < a.size(); ++k) a[k] += grid_->psi[k] / (4.0 * kPi);
    return a;
}

GreenEvaluator::GreenEvaluator(std::shared_ptr<const GreenSolver> solver, const GreenData& gd)
    : solver_(std::move(solver)), p_(gd.pole), shift_(gd.shift), robin_flat_(gd.robin_flat) {}

double GreenEvaluator::value(Point x) const {
    return solver_->ewald().value({x.x - p_.x, x.y - p_.y}) + solver_->w_interp()(wrap(x)) + shift_;
}

double GreenEvaluator::regular(Point x) const {
    return solver_->ewald().regular({x.x - p_.x, x.y - p_.y}) + solver_->w_interp()(wrap(x)) + shift_;
}

std::array<double, 2> GreenEvaluator::gradient(Point x) const {
    auto g = solver_->ewald().gradient({x.x - p_.x, x.y - p_.y});
    const Point y = wrap(x);
    g[0] += solver_->w_dx()(y);
    g[1] += solver_->w_dy()(y);
    return g;
}

std::array<double, 2> GreenEvaluator::regular_gradient(Point x) const {
    auto g = solver_->ewald().regular_gradient({x.x - p_.x, x.y - p_.y});
    const Point y = wrap(x);
    g[0] += solver_->w_dx()(y);
    g[1] += solver_->w_dy()(y);
    return g;
}

GreenData flat_green(int n, Point p) {
    EwaldGreen ewald;
    GreenSolver probe(build_surface(n, PsiSpec::flat()));
    GreenData gd;
    gd.pole = wrap(p);
    gd.pole_index = nearest_node(n, gd.pole);
    const bool on_node = flat_distance(ScalarField(n).node(gd.pole_index), gd.pole) < 1e-12;
    gd.robin_flat = gd.robin = ewald.robin();
    gd.pole_cell = probe.pole_cell_log() + gd.robin;
    gd.field = ewald.node_field(n, gd.pole, gd.pole_cell);
    gd.shift = 0.0;
    if (on_node)
        gd.sigma_field = make_sigma(gd.field, gd.pole_index, gd.robin_flat);
    else
        gd.sigma_field = ScalarField(n, std::numeric_limits<double>::quiet_NaN());
    return gd;
}

GreenData green_function(const GridPtr& grid, Point p) {
    const std::size_t node = require_node(grid->n, p, "green_function");
    return GreenSolver(grid).green(node);
}

double robin_constant(const GreenData& gd) { return gd.robin; }

bool SingularWeight::is_singular(std::size_t k) const {
    for (std::size_t s : singular_nodes)
        if (s == k) return true;
    return false;
}

SingularWeight singular_weight(const GreenSolver& solver, const std::vector<SingularSource>& sources,
                               const std::vector<GreenData>& greens) {
    const TorusGrid& grid = solver.grid();
    const int n = grid.n;
    if (greens.size() != sources.size())
        throw PreconditionError("singular_weight: one Green function per source required");

    std::vector<std::size_t> nodes;
    for (std::size_t i = 0; i < sources.size(); ++i) {
        if (!(sources[i].alpha > -1.0))
            throw PreconditionError("singular_weight: source " + std::to_string(i) + " has alpha <= -1");
        const std::size_t k = require_node(n, sources[i].position, "singular_weight");
        for (std::size_t j = 0; j < nodes.size(); ++j)
            if (nodes[j] == k)
                throw PreconditionError("singular_weight: sources " + std::to_string(j) + " and " +
                                        std::to_string(i) + " share a position");
        nodes.push_back(k);
    }

    SingularWeight sw;
    sw.log_weight = ScalarField(n, 0.0);
    for (std::size_t i = 0; i < sources.size(); ++i) {
        const double c = 4.0 * kPi * sources[i].alpha;
        for (std::size_t k = 0; k < sw.log_weight.size(); ++k) sw.log_weight[k] += c * greens[i].field[k];
    }
    sw.log_density = ScalarField(n);
    for (std::size_t k = 0; k < sw.log_density.size(); ++k) sw.log_density[k] = -sw.log_weight[k];

    const double rho_c = 1.0 / (n * std::sqrt(kPi));
    const double n2 = static_cast<double>(n) * n;
    for (std::size_t i = 0; i < sources.size(); ++i) {
        const std::size_t k = nodes[i];
        const double a = sources[i].alpha;
        double reg = 4.0 * kPi * a * greens[i].robin_flat;
        for (std::size_t j = 0; j < sources.size(); ++j)
            if (j != i) reg += 4.0 * kPi * sources[j].alpha * greens[j].field[k];
        const double e = 2.0 + 2.0 * a;
        const double log_w = -reg + grid.psi[k] + std::log(2.0 * kPi / e) + e * std::log(rho_c);
        sw.log_weight[k] = reg;
        sw.log_density[k] = log_w + std::log(n2) - grid.psi[k];
        sw.singular_nodes.push_back(k);
        sw.corrected_node_weights.push_back(std::exp(log_w));
    }
    sw.density = ScalarField(n);
    for (std::size_t k = 0; k < sw.density.size(); ++k) sw.density[k] = std::exp(sw.log_density[k]);
    return sw;
}

SingularWeight singular_weight(const GridPtr& grid, const std::vector<SingularSource>& sources) {
    GreenSolver solver(grid);
    std::vector<GreenData> greens;
    for (const auto& s : sources) greens.push_back(solver.green(require_node(grid->n, s.position, "singular_weight")));
    return singular_weight(solver, sources, greens);
}

CapitalH capital_H(Point p, const Problem& problem) {
    const int n = problem.grid->n;
    const std::size_t node = require_node(n, p, "capital_H");
    CapitalH out;
    double log_h = std::log(problem.h[node]);
    if (!(problem.h[node] > 0.0)) log_h = std::numeric_limits<double>::quiet_NaN();
    double acc = 0.0;
    for (std::size_t i = 0; i < problem.sources.size(); ++i) {
        const double a = problem.sources[i].alpha;
        if (problem.source_nodes[i] == node) {
            acc -= 4.0 * kPi * a * problem.source_greens[i].robin;
            if (a != problem.alpha_bar) out.flagged = true;
        } else {
            acc -= 4.0 * kPi * a * problem.source_greens[i].field[node];
        }
    }
    out.value = problem.h[node] > 0.0 ? std::exp(log_h + acc) : problem.h[node] * std::exp(acc);
    return out;
}

} // namespace smf
