#include "smf/errors.hpp"
#include "smf/torus.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace smf;

namespace {

constexpr double kPi = std::numbers::pi;

GridPtr bump_grid(int n) { return build_surface(n, PsiSpec::gaussian_bump(0.6, 0.12, {0.4, 0.55})); }

double max_abs_diff(const ScalarField& a, const ScalarField& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

} // namespace

TEST_CASE("wrap and minimum image") {
    Point p = wrap({-0.25, 1.75});
    CHECK(p.x == doctest::Approx(0.75));
    CHECK(p.y == doctest::Approx(0.75));
    Point d = min_image({0.9, -0.6});
    CHECK(d.x == doctest::Approx(-0.1));
    CHECK(d.y == doctest::Approx(0.4));
    CHECK(flat_distance({0.05, 0.5}, {0.95, 0.5}) == doctest::Approx(0.1));
}

TEST_CASE("node layout and nearest node") {
    ScalarField f(8);
    const std::size_t k = f.index(3, 5);
    CHECK(k == 3 * 8 + 5);
    CHECK(f.node(k).x == doctest::Approx(3.0 / 8));
    CHECK(f.node(k).y == doctest::Approx(5.0 / 8));
    CHECK(nearest_node(8, {0.99, 0.01}) == 0);
    CHECK(f.index(-1, 8) == 7 * 8);
}

TEST_CASE("spectral Laplacian of an eigenfunction") {
    auto g = build_surface(64, PsiSpec::flat());
    const auto f = sample(64, [](Point p) { return std::cos(2 * kPi * (3 * p.x + 4 * p.y)); });
    const ScalarField lap = flat_laplacian(f, *g);
    CHECK(max_abs_diff(lap, -100 * kPi * kPi * f) < 1e-9);
}

TEST_CASE("conformal grid has unit area and Laplace-Beltrami = e^-psi Lap") {
    auto g = bump_grid(128);
    CHECK(integrate(ScalarField(128, 1.0), *g) == doctest::Approx(1.0).epsilon(1e-14));
    const auto f = sample(128, [](Point p) { return std::sin(2 * kPi * p.x) * std::cos(4 * kPi * p.y); });
    const ScalarField lb = laplace_beltrami(f, *g);
    const ScalarField fl = flat_laplacian(f, *g);
    for (std::size_t k = 0; k < f.size(); k += 97) CHECK(lb[k] == doctest::Approx(fl[k] / g->exp_psi[k]));
}

TEST_CASE("Poisson solve inverts Laplace-Beltrami") {
    auto g = bump_grid(128);
    auto f = sample(128, [](Point p) { return std::cos(2 * kPi * (p.x + 2 * p.y)) + 0.3 * std::sin(6 * kPi * p.y); });
    f += -integrate(f, *g);
    const ScalarField u = poisson_solve(f, *g);
    CHECK(std::abs(integrate(u, *g)) < 1e-14);
    CHECK(max_abs_diff(laplace_beltrami(u, *g), f) < 1e-10);
    ScalarField bad(128, 1.0);
    CHECK_THROWS_AS(poisson_solve(bad, *g), PreconditionError);
}

TEST_CASE("Dirichlet energy is conformally invariant") {
    const auto f = sample(128, [](Point p) { return std::sin(2 * kPi * p.x); });
    const double flat = dirichlet_energy(f, *build_surface(128, PsiSpec::flat()));
    const double bump = dirichlet_energy(f, *bump_grid(128));
    CHECK(flat == doctest::Approx(2 * kPi * kPi).epsilon(1e-13));
    CHECK(bump == doctest::Approx(flat).epsilon(1e-13));
}

TEST_CASE("gradient and gradient density") {
    auto g = build_surface(64, PsiSpec::flat());
    const auto f = sample(64, [](Point p) { return std::cos(2 * kPi * (p.x + 2 * p.y)); });
    const auto grad = gradient(f, *g);
    const ScalarField gd = gradient_density(f, *g);
    for (std::size_t k = 0; k < f.size(); k += 31) {
        const Point p = f.node(k);
        const double s = -std::sin(2 * kPi * (p.x + 2 * p.y)) * 2 * kPi;
        CHECK(grad[0][k] == doctest::Approx(s).epsilon(1e-10));
        CHECK(grad[1][k] == doctest::Approx(2 * s).epsilon(1e-10));
        CHECK(gd[k] == doctest::Approx(5 * s * s).epsilon(1e-10));
    }
}

TEST_CASE("Fourier interpolant is exact for band-limited data") {
    const auto fn = [](Point p) { return std::cos(2 * kPi * (3 * p.x - p.y)) + std::sin(2 * kPi * 5 * p.y); };
    const auto f = sample(32, fn);
    const FourierInterpolant I(f);
    for (Point p : {Point{0.123, 0.456}, Point{0.9, 0.01}, Point{0.5, 0.77}}) CHECK(I(p) == doctest::Approx(fn(p)));
    CHECK(I(f.node(37)) == doctest::Approx(f[37]));
    const auto dx = I.derivative_x();
    CHECK(dx({0.2, 0.3}) == doctest::Approx(-6 * kPi * std::sin(2 * kPi * (0.6 - 0.3))));
}

TEST_CASE("build_surface rejects bad input") {
    CHECK_THROWS_AS(build_surface(100, PsiSpec::flat()), PreconditionError);
    CHECK_THROWS_AS(build_surface(16, PsiSpec::flat()), PreconditionError);
    CHECK_THROWS_AS(build_surface(64, PsiSpec::gaussian_bump(9.0, 0.1, {0.5, 0.5})), PreconditionError);
    CHECK_THROWS_AS(build_surface(64, PsiSpec::gaussian_bump(0.5, 0.0, {0.5, 0.5})), PreconditionError);
}

TEST_CASE("psi is band limited to n/3") {
    auto g = build_surface(64, PsiSpec::gaussian_bump(1.0, 0.02, {0.5, 0.5}));
    HalfSpectrum s = g->fft->forward(g->psi);
    double high = 0.0;
    for (int i = 0; i < 64; ++i)
        for (int j = 0; j < s.cols(); ++j)
            if (std::abs(wavenumber(i, 64)) > 64 / 3 || j > 64 / 3) high = std::max(high, std::abs(s.at(i, j)));
    CHECK(high < 1e-12);
}
