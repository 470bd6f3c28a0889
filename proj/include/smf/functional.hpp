#pragma once

#include "smf/green.hpp"
#include "smf/torus.hpp"

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

namespace smf {

// Exponents above this are reported as saturated instead of evaluated.
inline constexpr double kExpSaturation = 700.0;

struct Problem {
    GridPtr grid;
    std::shared_ptr<const GreenSolver> green;
    ScalarField h;
    std::vector<SingularSource> sources;  // positions snapped to nodes
    std::vector<std::size_t> source_nodes;
    std::vector<GreenData> source_greens;
    SingularWeight weight;
    double alpha_bar = 0.0;
    double rho_bar = 0.0;
};

// Snaps source positions to grid nodes and derives every dependent quantity.
Problem make_problem(std::shared_ptr<const GreenSolver> green, ScalarField h,
                     std::vector<SingularSource> sources);
Problem make_problem(const GridPtr& grid, ScalarField h, std::vector<SingularSource> sources);

double alpha_bar(const std::vector<SingularSource>& sources);
double rho_bar(const std::vector<SingularSource>& sources);

// alpha(p): alpha_i if p is (the node of) source i, 0 otherwise.
double conical_order(Point p, const Problem& problem);
double conical_order(Point p, const std::vector<SingularSource>& sources);
double conical_angle(Point p, const std::vector<SingularSource>& sources);

ScalarField transform_v_to_u(const ScalarField& v, const Problem& problem);
ScalarField transform_u_to_v(const ScalarField& u, const Problem& problem);

struct MassValue {
    double value = 0.0;
    bool saturated = false;
};

// int h e^{u - h_l} dmu with corrected weights at the source nodes.
MassValue constraint_mass(const ScalarField& u, const Problem& problem);

// The same mass as sign * exp(log_value), computed with a max shift so that
// large u does not overflow.
struct LogMass {
    double log_value = 0.0;
    double sign = 0.0;
    bool saturated = false;
};
LogMass log_constraint_mass(const ScalarField& u, const Problem& problem);

struct FunctionalValue {
    double dirichlet = 0.0;  // (1/2) int |grad u|^2
    double mean_term = 0.0;  // rho int u dmu
    double constraint_mass = 0.0;
    double j_value = 0.0;
    double f_value = 0.0;  // j - rho log(mass); NaN when the mass is not positive
    bool mass_ok = true;
    bool saturated = false;
};

FunctionalValue evaluate(const ScalarField& u, double rho, const Problem& problem);

// -Lap_g u + rho (1 - h e^{-h_l} e^u / mass).
ScalarField free_gradient(const ScalarField& u, double rho, const Problem& problem);

struct DeficitReport {
    double d3 = 0.0;  // log int e^{4pi(1+abar) uhat^2} e^{-h_l} dmu
    double d5 = 0.0;  // (1/(16pi(1+abar))) int|grad u|^2 + int u dmu - log int e^{u-h_l} dmu
    bool saturated = false;
};

DeficitReport mt_check(const ScalarField& u, const Problem& problem);

// Random field sum over 0 < |k| <= kmax of a cos(2 pi k.x) + b sin(2 pi k.x),
// a, b ~ N(0, 1) / |k|^2, rescaled to the given Dirichlet energy.
ScalarField random_band_limited(int n, int kmax, double dirichlet, std::mt19937_64& rng);

struct MtProbe {
    int samples = 0;
    std::uint64_t seed = 0;
    double dirichlet = 0.0;
    int kmax = 0;
    std::vector<double> d5;
    double d5_min = 0.0;
    double d5_max = 0.0;
    double d5_mean = 0.0;
    std::size_t d5_argmin = 0;
    double d3_max = 0.0;
    int saturated = 0;
};

MtProbe mt_probe(const Problem& problem, int samples, std::uint64_t seed, double dirichlet, int kmax = 4);

} // namespace smf
