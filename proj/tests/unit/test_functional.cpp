#include "smf/errors.hpp"
#include "smf/functional.hpp"
#include "smf/spectral.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace smf;

namespace {

constexpr double kPi = std::numbers::pi;

Problem flat_problem(int n, double h = 1.0, std::vector<SingularSource> src = {}) {
    return make_problem(build_surface(n, PsiSpec::flat()), ScalarField(n, h), std::move(src));
}

ScalarField wave(int n) {
    return sample(n, [](Point p) { return 0.4 * std::cos(2 * kPi * p.x) + 0.2 * std::sin(2 * kPi * (p.x + p.y)); });
}

} // namespace

TEST_CASE("rho_bar = 8 pi (1 + alpha_bar)") {
    CHECK(flat_problem(64).rho_bar == doctest::Approx(8 * kPi));
    const Problem pb = flat_problem(64, 1.0, {{{0.5, 0.5}, -0.5}, {{0.25, 0.25}, 0.3}});
    CHECK(pb.alpha_bar == doctest::Approx(-0.5));
    CHECK(pb.rho_bar == doctest::Approx(4 * kPi));
    CHECK(rho_bar({{{0.1, 0.1}, 0.7}}) == doctest::Approx(8 * kPi));
}

TEST_CASE("make_problem preconditions") {
    auto g = build_surface(64, PsiSpec::flat());
    CHECK_THROWS_AS(make_problem(g, ScalarField(64, -1.0), {}), PreconditionError);
    CHECK_THROWS_AS(make_problem(g, ScalarField(64, 1.0), {{{0.5, 0.5}, -1.2}}), PreconditionError);
    CHECK_THROWS_AS(make_problem(g, ScalarField(64, 1.0), {{{0.5, 0.5}, 0.2}, {{0.501, 0.5}, 0.1}}),
                    PreconditionError);
}

TEST_CASE("functional at the constant minimizer") {
    const Problem pb = flat_problem(64);
    const FunctionalValue v = evaluate(ScalarField(64, 0.0), 0.9 * pb.rho_bar, pb);
    CHECK(v.constraint_mass == doctest::Approx(1.0));
    CHECK(v.j_value == doctest::Approx(0.0));
    CHECK(v.f_value == doctest::Approx(0.0));
}

TEST_CASE("free functional is invariant under constants") {
    const Problem pb = make_problem(build_surface(64, PsiSpec::gaussian_bump(0.4, 0.1, {0.4, 0.4})),
                                    sample(64, [](Point p) { return 1.0 + 0.5 * std::cos(2 * kPi * p.y); }),
                                    {{{0.5, 0.5}, -0.4}});
    const ScalarField u = wave(64);
    ScalarField v = u;
    v += 3.7;
    CHECK(evaluate(v, 5.0, pb).f_value == doctest::Approx(evaluate(u, 5.0, pb).f_value).epsilon(1e-12));
}

TEST_CASE("free gradient matches a finite difference") {
    const Problem pb = make_problem(build_surface(64, PsiSpec::gaussian_bump(0.4, 0.1, {0.4, 0.4})),
                                    sample(64, [](Point p) { return 1.0 + 0.5 * std::cos(2 * kPi * p.y); }),
                                    {{{0.5, 0.5}, -0.4}});
    const double rho = 7.0;
    const ScalarField u = wave(64);
    const ScalarField d = sample(64, [](Point p) { return std::sin(2 * kPi * (2 * p.x - p.y)); });
    const ScalarField g = free_gradient(u, rho, pb);
    double dir = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) dir += g[k] * d[k] * pb.grid->area_weights[k];
    const double t = 1e-5;
    const double fd = (evaluate(u + t * d, rho, pb).f_value - evaluate(u - t * d, rho, pb).f_value) / (2 * t);
    CHECK(fd == doctest::Approx(dir).epsilon(1e-7));
}

TEST_CASE("singular mass converges under refinement") {
    // int e^{-4 pi alpha G} dmu with alpha = -1/2: node quadrature of an
    // r^{-1} singularity with corrected pole weight, first order in h.
    std::vector<double> m;
    for (int n : {128, 256, 512}) {
        const Problem pb = flat_problem(n, 1.0, {{{0.5, 0.5}, -0.5}});
        m.push_back(constraint_mass(ScalarField(n, 0.0), pb).value);
    }
    const double d1 = std::abs(m[1] - m[0]), d2 = std::abs(m[2] - m[1]);
    CHECK(d2 < 0.7 * d1);
    CHECK(d2 / m[2] < 1e-3);
}

TEST_CASE("log constraint mass survives large u") {
    const Problem pb = flat_problem(64);
    ScalarField u(64, 0.0);
    u += 800.0;
    const LogMass lm = log_constraint_mass(u, pb);
    CHECK(lm.sign > 0.0);
    CHECK(lm.log_value == doctest::Approx(800.0));
    CHECK(constraint_mass(u, pb).saturated);
}

TEST_CASE("random band-limited fields") {
    std::mt19937_64 a(5), b(5);
    const ScalarField u = random_band_limited(64, 4, 3.0, a);
    const ScalarField v = random_band_limited(64, 4, 3.0, b);
    auto g = build_surface(64, PsiSpec::flat());
    CHECK(dirichlet_energy(u, *g) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(std::abs(integrate(u, *g)) < 1e-14);
    CHECK(u.values() == v.values());
    HalfSpectrum s = g->fft->forward(u);
    double high = 0.0;
    for (int i = 0; i < 64; ++i)
        for (int j = 0; j < s.cols(); ++j) {
            const int kx = wavenumber(i, 64);
            if (kx * kx + j * j > 16) high = std::max(high, std::abs(s.at(i, j)));
        }
    CHECK(high < 1e-10);
}

TEST_CASE("Moser-Trudinger deficit obeys Jensen on the flat torus") {
    // log int e^u >= int u, so D5 <= D / (16 pi) without sources.
    const Problem pb = flat_problem(64);
    std::mt19937_64 rng(9);
    for (int i = 0; i < 20; ++i) {
        const ScalarField u = random_band_limited(64, 4, 40.0, rng);
        const DeficitReport r = mt_check(u, pb);
        CHECK(r.d5 <= 40.0 / (16 * kPi) + 1e-12);
        CHECK(std::isfinite(r.d3));
    }
    CHECK_THROWS_AS(mt_check(ScalarField(64, 2.0), pb), PreconditionError);
}

TEST_CASE("probe is reproducible") {
    const Problem pb = flat_problem(64);
    const MtProbe a = mt_probe(pb, 50, 7, 8 * kPi), b = mt_probe(pb, 50, 7, 8 * kPi);
    CHECK(a.d5 == b.d5);
    CHECK(a.d5_min <= a.d5_mean);
    CHECK(a.d5_mean <= a.d5_max);
    CHECK(a.d5[a.d5_argmin] == a.d5_min);
}
