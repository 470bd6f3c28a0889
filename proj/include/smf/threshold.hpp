#pragma once

#include "smf/functional.hpp"

#include <optional>
#include <string>
#include <vector>

namespace smf {

enum class Verdict { ExistsByI, ExistsByII, Inconclusive };

std::string to_string(Verdict v);

struct ThresholdReport {
    double alpha_bar = 0.0;
    double rho_bar = 0.0;
    // Finite candidate list when alpha_bar < 0; empty (with a count) for the
    // grid scan when alpha_bar = 0.
    std::vector<Point> candidates;
    std::size_t candidate_count = 0;
    bool candidates_empty = false;
    std::size_t argmax_node = 0;
    Point argmax_point;           // refined location
    double grid_argmax_value = 0.0;
    // max of 4 pi A(p) + log(h(p) prod_{p_i != p} e^{-4 pi alpha_i G_{p_i}(p)})
    double argmax_value = 0.0;
    double lambda = 0.0;  // NaN when the candidate set is empty
    Verdict verdict = Verdict::Inconclusive;
    std::optional<double> inf_estimate;
};

// Lambda = -rho_bar (1 + log(pi / (1 + abar))) - rho_bar * value.
double lambda_from_value(double rho_bar, double alpha_bar, double value);

ThresholdReport lambda_threshold(const Problem& problem);

inline constexpr double kDefaultMargin = 0.1;

Verdict existence_verdict(const ThresholdReport& report, std::optional<double> inf_estimate,
                          double margin = kDefaultMargin);
Verdict existence_verdict(const Problem& problem, std::optional<double> inf_estimate,
                          double margin = kDefaultMargin);

struct TestFunctionData {
    double epsilon = 0.0;
    Point center;
    std::size_t center_node = 0;
    double beta = 1.0;         // 1 + alpha_bar
    double gamma_eps = 0.0;    // eps^{-1/(2 beta)} / (-log eps)
    double r_eps = 0.0;        // -1 / log eps, normal coordinates
    double r_eps_flat = 0.0;   // r_eps e^{-psi(p)/2}
    double scale = 1.0;        // e^{psi(p)/2}: normal radius over flat radius
    double c_eps = 0.0;
    double robin = 0.0;        // A(p*)
    double robin_flat = 0.0;
    double interface_mismatch = 0.0;
    GreenData green;
    ScalarField field;
};

// phi_eps about the node nearest p_star.
TestFunctionData build_test_function(double epsilon, Point p_star, const Problem& problem);

// Inner profile -2 log(eps + r^{2 beta}) + log eps (r in normal coordinates).
double test_inner(const TestFunctionData& tf, double r);

// Cubic smoothstep cutoff in the normal radius: 1 on [0, r_eps], 0 beyond 2 r_eps.
double test_cutoff(const TestFunctionData& tf, double r);

struct TestFunctionEnergy {
    FunctionalValue value;  // free functional at rho_bar
    double dirichlet = 0.0;            // int |grad phi|^2
    double dirichlet_predicted = 0.0;  // -2 rho log eps - 2 rho + rho^2 A
    double mean = 0.0;
    double mean_predicted = 0.0;       // log eps - rho A
    double mass = 0.0;
    double mass_predicted = 0.0;       // (pi / beta) e^{-4 pi abar A} h(p) prod
    double lambda = 0.0;               // threshold at the same point
    double gap = 0.0;                  // f_value - lambda
    // Green-identity evaluation of the same Dirichlet energy and mean,
    // independent of the grid part.
    double dirichlet_green = 0.0;
    double mean_green = 0.0;
    double disk_radius = 0.0;  // flat radius of the polar region
    int quadrature_intervals = 0;
    bool quadrature_converged = false;
};

// The polar region is a flat disk of radius disk_radius (reduced to half the
// distance of the nearest other source).
TestFunctionEnergy test_function_energy(const TestFunctionData& tf, const Problem& problem,
                                        double disk_radius = 0.4);

} // namespace smf
