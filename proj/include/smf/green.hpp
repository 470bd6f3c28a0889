#pragma once

#include "smf/ewald.hpp"
#include "smf/field.hpp"
#include "smf/torus.hpp"

#include <array>
#include <memory>
#include <optional>
#include <vector>

namespace smf {

struct Problem;

// Radius inside which sigma is defined.
inline constexpr double kSigmaRadius = 0.25;

struct SingularSource {
    Point position;
    double alpha = 0.0;
};

// Green function G_p with Lap_g G_p = 1 - delta_p and int G_p dmu = 0.
//
// field holds G_p at every node.  The pole node holds the cell-average value
// used by node quadrature (pole_cell), so integrate(field) is the corrected
// quadrature of int G_p dmu.
struct GreenData {
    Point pole;
    std::size_t pole_index = 0;
    ScalarField field;
    double robin = 0.0;       // A(p) in normal coordinates at p
    double robin_flat = 0.0;  // lim G_p + (1/2pi) log|x - p|, flat distance
    double shift = 0.0;       // additive constant fixing the mean
    double pole_cell = 0.0;
    // sigma = G_p + (1/2pi) log r - robin_flat for r < kSigmaRadius, NaN beyond.
    ScalarField sigma_field;
};

// Shared data for Green functions on one grid: the flat Green function on
// the node lattice and the smooth correction w with Lap_flat w = e^psi - 1.
class GreenSolver {
public:
    explicit GreenSolver(GridPtr grid, double tau = 0.01);

    const TorusGrid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    const EwaldGreen& ewald() const { return ewald_; }
    double flat_robin() const { return a_flat_; }

    const ScalarField& w() const { return w_; }
    double w_mean() const { return w_mean_; }
    const FourierInterpolant& w_interp() const { return w_i_; }
    const FourierInterpolant& w_dx() const { return w_dx_; }
    const FourierInterpolant& w_dy() const { return w_dy_; }

    // Cell value of -(1/2pi) log r for the pole cell.
    double pole_cell_log() const;

    GreenData green(std::size_t node) const;

    // Robin constants for a pole at every node from the splitting identity
    // A_flat(p) = A_flat + 2 w(p) - int w dmu; the normal-coordinate value
    // adds psi(p) / (4 pi).
    ScalarField robin_field_flat() const;
    ScalarField robin_field() const;

private:
    GridPtr grid_;
    EwaldGreen ewald_;
    double a_flat_;
    ScalarField base_;  // flat G relative to node 0, pole cell included
    ScalarField w_;
    double w_mean_ = 0.0;
    FourierInterpolant w_i_, w_dx_, w_dy_;
};

// Off-grid evaluation of a Green function built by a GreenSolver.
class GreenEvaluator {
public:
    GreenEvaluator(std::shared_ptr<const GreenSolver> solver, const GreenData& gd);

    double value(Point x) const;
    // G_p(x) + (1/2pi) log|x - p|_flat.
    double regular(Point x) const;
    double sigma(Point x) const { return regular(x) - robin_flat_; }
    std::array<double, 2> gradient(Point x) const;
    std::array<double, 2> regular_gradient(Point x) const;
    Point pole() const { return p_; }

private:
    std::shared_ptr<const GreenSolver> solver_;
    Point p_;
    double shift_;
    double robin_flat_;
};

// Exact flat-torus Green function (psi = 0) on an n-grid; p may be off-node.
GreenData flat_green(int n, Point p);

// Green function for a pole at a grid node.
GreenData green_function(const GridPtr& grid, Point p);

double robin_constant(const GreenData& gd);

struct SingularWeight {
    // h_l = 4 pi sum alpha_i G_{p_i}; at source nodes the singular part is
    // dropped and the regular remainder stored.
    ScalarField log_weight;
    // Effective nodal density: e^{-h_l} on regular nodes; at source node i,
    // corrected_node_weights[i] * n^2 / e^{psi}, so every integral of
    // e^{-h_l} * f is sum f * density * e^psi / n^2.
    ScalarField density;
    ScalarField log_density;
    std::vector<std::size_t> singular_nodes;
    std::vector<double> corrected_node_weights;

    bool is_singular(std::size_t k) const;
};

SingularWeight singular_weight(const GreenSolver& solver, const std::vector<SingularSource>& sources,
                               const std::vector<GreenData>& source_greens);
SingularWeight singular_weight(const GridPtr& grid, const std::vector<SingularSource>& sources);

struct CapitalH {
    double value = 0.0;
    // p is a source whose order differs from alpha_bar.
    bool flagged = false;
};

// H(p) = h(p) e^{-4 pi alpha(p) A(p)} prod_{p_i != p} e^{-4 pi alpha_i G_{p_i}(p)}.
CapitalH capital_H(Point p, const Problem& problem);

} // namespace smf
