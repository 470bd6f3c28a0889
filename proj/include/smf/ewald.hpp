#pragma once

#include "smf/field.hpp"

#include <array>
#include <vector>

namespace smf {

// Exponential integral E1(z) for z > 0.
double expint_e1(double z);

// Entire function Ein(z) = E1(z) + gamma + log z.
double ein(double z);

// Constant c with: node-sum quadrature of -(1/2pi) log r over a lattice of
// spacing h is exact when the pole cell carries -(1/2pi)(log h + c).
// Closed form log(2 sqrt(pi)) - 2 log Gamma(1/4).
double lattice_log_constant();

// Robin constant of the flat unit square torus from the closed form
// lattice_log_constant() / (2 pi).
double flat_robin_closed_form();

// Periodic Green function of the flat unit torus,
//   Lap G = 1 - delta_0,  int G dx = 0,
// evaluated by splitting the heat kernel at time tau:
//   G(x) = sum_{k != 0} e^{-4pi^2|k|^2 tau} / (4pi^2|k|^2) e^{2pi i k.x}
//        + sum_m E1(|x - m|^2 / (4 tau)) / (4pi) - tau.
class EwaldGreen {
public:
    explicit EwaldGreen(double tau = 0.01);

    double tau() const { return tau_; }
    int kmax() const { return kmax_; }

    double value(Point d) const;
    // G(d) + (1/2pi) log|d| with d taken as its minimum image; smooth.
    double regular(Point d) const;
    std::array<double, 2> gradient(Point d) const;
    std::array<double, 2> regular_gradient(Point d) const;
    // Term-by-term Laplacian; equals 1 away from the lattice points.
    double laplacian(Point d) const;
    // Limit of G(d) + (1/2pi) log|d| as d -> 0.
    double robin() const;

    // G(x_j - p) on every node of an n-grid.  A node coinciding with p gets
    // pole_value.
    ScalarField node_field(int n, Point p, double pole_value) const;

private:
    struct Mode {
        int kx;
        int ky;
        double c;
    };
    double tau_;
    int kmax_;
    double rcut2_;
    std::vector<Mode> modes_;

    double reciprocal(Point d) const;
    std::array<double, 2> reciprocal_gradient(Point d) const;
    template <class F>
    void for_images(Point d, F&& f) const;
};

} // namespace smf
