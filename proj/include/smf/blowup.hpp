#pragma once

#include "smf/functional.hpp"
#include "smf/solver.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace smf {

struct Diagnostics {
    double lambda_max = 0.0;  // max of u over regular nodes
    double mean_u = 0.0;
    double dirichlet = 0.0;
    std::size_t argmax = 0;  // lowest index on ties
};

Diagnostics diagnostics(const ScalarField& u, const Problem& problem);

// 1 / (2 (1 + alpha_bar)).
double blowup_threshold(const Problem& problem);

// int_{B_r(center)} |h| e^{-h_l + u} dmu over a flat ball, with exact
// circle/cell overlap fractions.  Requires 0 < r <= 0.25.
double blowup_mass(const ScalarField& u, Point center, double r, const Problem& problem);

struct MassSample {
    double radius = 0.0;
    double mass = 0.0;
};

// Ball masses at 1, 2, 4, ... cells and at 0.25.
std::vector<MassSample> mass_profile(const ScalarField& u, Point center, const Problem& problem);

struct Concentration {
    bool conclusive = false;
    std::size_t node = 0;
    Point point;
    double lambda = 0.0;
    double primary_mass = 0.0;  // ball of 8 cells about the argmax
    double second_mass = 0.0;   // heaviest 8-cell ball disjoint from it
    Point second_point;
    bool single = false;
    bool h_positive = false;
    bool angle_minimal = false;
};

// Argmax over all nodes.  Fields with max u <= ceiling - 2 are reported
// inconclusive with all flags false.
Concentration detect_concentration(const ScalarField& u, const Problem& problem, double ceiling = kBlowupCeiling);

// phi(r) = -2 log(1 + (pi / (1 + abar)) H r^{2(1 + abar)}).
class BubbleProfile {
public:
    BubbleProfile(double H, double alpha_bar);

    double operator()(double r) const;
    // int_{R^2} H |x|^{2 abar} e^phi dx.
    double mass() const;

    double H() const { return H_; }
    double alpha_bar() const { return abar_; }

private:
    double H_;
    double abar_;
};

BubbleProfile bubble_profile(double H, double alpha_bar);

struct RescaledComparison {
    bool conclusive = false;
    std::string reason;
    double lambda = 0.0;
    double r_k = 0.0;       // e^{-lambda / (2 (1 + abar))}, normal coordinates
    double r_k_flat = 0.0;  // r_k e^{-psi(x)/2}
    double H = 0.0;
    double deviation = 0.0;
};

// sup over |xi| <= r_cmp of |u(x + r_k xi) - lambda - phi(xi)|, lambda = u(x).
RescaledComparison compare_rescaled(const ScalarField& u, Point x, const Problem& problem, double r_cmp = 5.0);

struct EnergyDecomposition {
    double outer = 0.0;
    double neck = 0.0;
    double inner = 0.0;
    double capacity = 0.0;
    double total = 0.0;  // sum of the nodal gradient density
    double inner_radius = 0.0;
    double delta = 0.0;
};

// Inner radius R r_k with r_k taken from lambda = u(x).
EnergyDecomposition energy_decomposition(const ScalarField& u, Point x, double delta, double R,
                                         const Problem& problem);
EnergyDecomposition energy_decomposition_radii(const ScalarField& u, Point x, double inner_radius, double delta,
                                               const Problem& problem);

// Average of u over the flat circle |y - c| = r, m-point trapezoid rule on
// the trigonometric interpolant.
double circle_average(const FourierInterpolant& u, Point c, double r, int m = 64);

struct BlowupOptions {
    double r_cmp = 5.0;
    double delta = 0.125;
    double ceiling = kBlowupCeiling;
};

struct BlowupReport {
    Diagnostics diagnostics;
    Point argmax_point;
    std::vector<MassSample> mass_profile;
    double threshold = 0.0;
    Concentration concentration;
    RescaledComparison bubble;
    std::optional<EnergyDecomposition> decomposition;
    std::string decomposition_note;
    // sup over M \ B_delta(x*) of |u - mean u - rho_bar G_{x*}|; NaN when not
    // computed.
    double far_field_deviation = 0.0;
};

BlowupReport blowup_report(const ScalarField& u, const Problem& problem, const BlowupOptions& opts = {});

} // namespace smf
