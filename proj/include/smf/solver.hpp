#pragma once

#include "smf/functional.hpp"

#include <limits>
#include <string>
#include <vector>

namespace smf {

struct SolveOptions {
    int max_iters = 5000;
    double gradient_tol = 1e-10;     // sup norm of the preconditioned gradient
    double backtrack = 0.5;
    double sufficient_decrease = 1e-4;
    bool precondition = true;
    double min_mass = 1e-8;
    int max_backtracks = 60;
    double residual_tol = 1e-6;
    // A solve stops and is marked aborted once max u exceeds this value.
    double lambda_ceiling = std::numeric_limits<double>::infinity();
};

struct SolveReport {
    double rho = 0.0;
    bool converged = false;
    bool aborted = false;  // lambda ceiling reached
    std::string status;
    int iterations = 0;
    FunctionalValue value;
    double residual_l2 = 0.0;
    double gradient_sup = 0.0;
    double lambda_max = 0.0;
    double mean_u = 0.0;
    double dirichlet = 0.0;
    double mass_lower_bound = 0.0;  // 1 / max h
    double mass_e = 0.0;             // int e^{u - h_l} dmu
    bool recovered_start = false;
    bool f_monotone = true;
    std::vector<double> f_history;
    ScalarField u;  // normalized so that the constraint mass is 1
};

SolveReport minimize(const Problem& problem, double rho, const ScalarField& u0, const SolveOptions& opts = {});

// rho_k = rho_bar (1 - 2^{-k}), k = 1..K.
std::vector<double> default_schedule(double rho_bar, int K);

struct ContinuationRun {
    std::vector<SolveReport> steps;
    bool blowup = false;
};

inline constexpr double kBlowupCeiling = 12.0;

ContinuationRun continuation(const Problem& problem, const std::vector<double>& schedule, SolveOptions opts = {},
                             double lambda_ceiling = kBlowupCeiling);

// || Lap_g u - rho (1 - h e^{-h_l} e^u) ||_{L^2(dmu)} over regular nodes;
// requires a normalized u.
double residual(const ScalarField& u, double rho, const Problem& problem);

} // namespace smf
