#include "smf/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace smf;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("adaptive Gauss-Kronrod on smooth and peaked integrands") {
    CHECK(integrate_adaptive([](double x) { return std::exp(x); }, 0.0, 1.0, 1e-14, 1e-14) ==
          doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
    const double eps = 1e-6;
    const double peak = integrate_adaptive([&](double x) { return eps / (x * x + eps * eps); }, -1.0, 1.0, 1e-13, 1e-13);
    CHECK(peak == doctest::Approx(2 * std::atan(1.0 / eps)).epsilon(1e-11));
}

TEST_CASE("vector integrand shares one subdivision") {
    auto r = integrate_adaptive([](double x) { return std::vector<double>{std::sin(x), x * x, std::sqrt(x)}; }, 3,
                                0.0, kPi, 1e-13, 1e-13);
    CHECK(r.converged);
    CHECK(r.value[0] == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(r.value[1] == doctest::Approx(kPi * kPi * kPi / 3).epsilon(1e-13));
    CHECK(r.value[2] == doctest::Approx(2.0 / 3 * std::pow(kPi, 1.5)).epsilon(1e-10));
}

TEST_CASE("disk-rectangle overlap") {
    // containment both ways
    CHECK(disk_rect_overlap(0.5, 0.5, 0.1, 0.0, 1.0, 0.0, 1.0) == doctest::Approx(kPi * 0.01));
    CHECK(disk_rect_overlap(0.5, 0.5, 2.0, 0.2, 0.4, 0.1, 0.7) == doctest::Approx(0.12));
    // disjoint
    CHECK(disk_rect_overlap(0.0, 0.0, 0.1, 0.5, 0.6, 0.5, 0.6) == 0.0);
    // quarter disk
    CHECK(disk_rect_overlap(0.0, 0.0, 0.3, 0.0, 1.0, 0.0, 1.0) == doctest::Approx(kPi * 0.09 / 4));
    // circular segment: chord at distance d from the centre
    const double r = 1.0, d = 0.4;
    const double seg = r * r * std::acos(d / r) - d * std::sqrt(r * r - d * d);
    CHECK(disk_rect_overlap(0.0, 0.0, r, d, 5.0, -5.0, 5.0) == doctest::Approx(seg));
}

TEST_CASE("overlap fractions tile the disk") {
    const int n = 32;
    const double h = 1.0 / n, cx = 0.4137, cy = 0.5291, r = 0.2311;
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) acc += disk_rect_overlap(cx, cy, r, i * h, (i + 1) * h, j * h, (j + 1) * h);
    CHECK(acc == doctest::Approx(kPi * r * r).epsilon(1e-13));
}
