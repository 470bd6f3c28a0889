#pragma once

#include "smf/field.hpp"
#include "smf/spectral.hpp"

#include <array>
#include <memory>
#include <string>
#include <vector>

namespace smf {

// Description of the log-conformal factor psi before normalization.
struct PsiSpec {
    enum class Kind { Flat, GaussianBump, CosineMix };

    struct Mode {
        int kx = 0;
        int ky = 0;
        double amp = 0.0;
        double phase = 0.0;
    };

    Kind kind = Kind::Flat;
    double amp = 0.0;    // gaussian_bump
    double sigma = 0.1;  // gaussian_bump
    Point center{0.5, 0.5};
    std::vector<Mode> modes;  // cosine_mix: sum amp*cos(2pi(kx x + ky y) + phase)

    static PsiSpec flat() { return {}; }
    static PsiSpec gaussian_bump(double amp, double sigma, Point center);
    static PsiSpec cosine_mix(std::vector<Mode> modes);
    std::string describe() const;
};

// Unit-area conformal torus [0,1)^2 with metric e^psi (dx^2 + dy^2).
struct TorusGrid {
    int n = 0;
    ScalarField psi;
    ScalarField exp_psi;
    ScalarField area_weights;  // e^psi / n^2
    double flat_cell_area = 0.0;
    bool flat = true;
    PsiSpec spec;
    std::shared_ptr<const Fft> fft;
};

using GridPtr = std::shared_ptr<const TorusGrid>;

// Build the grid, band-limit psi (modes above n/3 per axis removed) and shift
// it so that the total area is one.
GridPtr build_surface(int n, const PsiSpec& spec);

// Integral against d(mu): sum f * e^psi / n^2.
double integrate(const ScalarField& f, const TorusGrid& grid);

// Integral against flat measure dx: sum f / n^2.
double integrate_flat(const ScalarField& f);

// (d_xx + d_yy) u, spectral.
ScalarField flat_laplacian(const ScalarField& u, const TorusGrid& grid);

// e^{-psi} (d_xx + d_yy) u.
ScalarField laplace_beltrami(const ScalarField& u, const TorusGrid& grid);

// Spectral first derivatives; the Nyquist modes are dropped.
std::array<ScalarField, 2> gradient(const ScalarField& u, const TorusGrid& grid);

// Pointwise |grad u|^2 in flat coordinates (Nyquist modes dropped).
ScalarField gradient_density(const ScalarField& u, const TorusGrid& grid);

// int |grad u|^2 dmu = int |grad u|^2 dx, via Parseval with the full
// wavenumber on Nyquist modes, i.e. equal to -int u Lap_g u dmu.
double dirichlet_energy(const ScalarField& u, const TorusGrid& grid);

// Solve Lap_g u = f with int u dmu = 0; requires int f dmu = 0.
ScalarField poisson_solve(const ScalarField& f, const TorusGrid& grid);

// Solve (d_xx + d_yy) u = f with zero flat mean; the k = 0 mode of f is
// ignored (caller is responsible for compatibility).
ScalarField flat_poisson_solve(const ScalarField& f, const TorusGrid& grid);

// Trigonometric interpolant of a grid field.  The Nyquist basis function is
// cos(pi n x), so node values are reproduced and real data stays real.
class FourierInterpolant {
public:
    FourierInterpolant() = default;
    // Coefficients with |c| <= drop_tol * max|c| are discarded; drop_tol = 0
    // keeps every mode.
    explicit FourierInterpolant(const ScalarField& u, double drop_tol = 0.0);

    double operator()(Point p) const;
    std::vector<double> operator()(const std::vector<Point>& pts) const;

    FourierInterpolant derivative_x() const;
    FourierInterpolant derivative_y() const;

    std::size_t terms() const { return terms_.size(); }
    int n() const { return n_; }

private:
    struct Term {
        int kx;
        int ky;
        cplx c;
    };
    int n_ = 0;
    int kmax_ = 0;
    std::vector<Term> terms_;
};

// Trigonometric interpolation of u at arbitrary points in [0,1)^2.
std::vector<double> fourier_sample(const ScalarField& u, const std::vector<Point>& points);

} // namespace smf
