#include "smf/ewald.hpp"

#include "smf/errors.hpp"
#include "smf/spectral.hpp"

#include <complex>
#include <numbers>

namespace smf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGamma = std::numbers::egamma;
// Real-space terms are dropped once E1(z) < e^{-z}/z is below ~1e-19.
constexpr double kZCut = 40.0;

} // namespace

double expint_e1(double z) {
    if (!(z > 0.0)) throw PreconditionError("expint_e1: argument must be positive");
    return -std::expint(-z);
}

double ein(double z) {
    if (z <= 2.0) {
        double term = z, acc = z;
        for (int k = 2; k < 60; ++k) {
            term *= -z / k;
            const double add = term / k;
            acc += add;
            if (std::abs(add) < 1e-18 * std::abs(acc)) break;
        }
        return acc;
    }
    return expint_e1(z) + kGamma + std::log(z);
}

double lattice_log_constant() {
    return std::log(2.0 * std::sqrt(kPi)) - 2.0 * std::lgamma(0.25);
}

double flat_robin_closed_form() { return lattice_log_constant() / (2.0 * kPi); }

EwaldGreen::EwaldGreen(double tau) : tau_(tau) {
    if (!(tau > 0.0) || tau > 0.05) throw PreconditionError("EwaldGreen: tau must lie in (0, 0.05]");
    rcut2_ = 4.0 * tau_ * kZCut;
    // Reciprocal terms below ~1e-20 are dropped.
    const double k2cut = 46.0 / (4.0 * kPi * kPi * tau_);
    kmax_ = static_cast<int>(std::ceil(std::sqrt(k2cut)));
    for (int kx = -kmax_; kx <= kmax_; ++kx)
        for (int ky = -kmax_; ky <= kmax_; ++ky) {
            const int k2 = kx * kx + ky * ky;
            if (k2 == 0 || k2 > k2cut) continue;
            const double a = 4.0 * kPi * kPi * k2;
            modes_.push_back({kx, ky, std::exp(-a * tau_) / a});
        }
}

template <class F>
void EwaldGreen::for_images(Point d, F&& f) const {
    for (int mx = -2; mx <= 2; ++mx)
        for (int my = -2; my <= 2; ++my) {
            const double dx = d.x - mx, dy = d.y - my;
            const double r2 = dx * dx + dy * dy;
            if (r2 < rcut2_) f(mx, my, dx, dy, r2);
        }
}

double EwaldGreen::reciprocal(Point d) const {
    const int K = kmax_;
    std::vector<std::complex<double>> ex(2 * K + 1), ey(2 * K + 1);
    for (int k = -K; k <= K; ++k) {
        ex[k + K] = std::polar(1.0, 2.0 * kPi * k * d.x);
        ey[k + K] = std::polar(1.0, 2.0 * kPi * k * d.y);
    }
    double acc = 0.0;
    for (const Mode& m : modes_) acc += m.c * (ex[m.kx + K] * ey[m.ky + K]).real();
    return acc;
}

std::array<double, 2> EwaldGreen::reciprocal_gradient(Point d) const {
    const int K = kmax_;
    std::vector<std::complex<double>> ex(2 * K + 1), ey(2 * K + 1);
    for (int k = -K; k <= K; ++k) {
        ex[k + K] = std::polar(1.0, 2.0 * kPi * k * d.x);
        ey[k + K] = std::polar(1.0, 2.0 * kPi * k * d.y);
    }
    double gx = 0.0, gy = 0.0;
    for (const Mode& m : modes_) {
        const double s = (ex[m.kx + K] * ey[m.ky + K]).imag();
        gx -= 2.0 * kPi * m.kx * m.c * s;
        gy -= 2.0 * kPi * m.ky * m.c * s;
    }
    return {gx, gy};
}

double EwaldGreen::value(Point d) const {
    d = min_image(d);
    double acc = reciprocal(d) - tau_;
    for_images(d, [&](int, int, double, double, double r2) {
        if (r2 == 0.0) throw PreconditionError("EwaldGreen::value: evaluation at the pole");
        acc += expint_e1(r2 / (4.0 * tau_)) / (4.0 * kPi);
    });
    return acc;
}

double EwaldGreen::regular(Point d) const {
    d = min_image(d);
    double acc = reciprocal(d) - tau_;
    for_images(d, [&](int mx, int my, double, double, double r2) {
        const double z = r2 / (4.0 * tau_);
        if (mx == 0 && my == 0)
            acc += (ein(z) - kGamma + std::log(4.0 * tau_)) / (4.0 * kPi);
        else
            acc += expint_e1(z) / (4.0 * kPi);
    });
    return acc;
}

std::array<double, 2> EwaldGreen::gradient(Point d) const {
    d = min_image(d);
    auto g = reciprocal_gradient(d);
    for_images(d, [&](int, int, double dx, double dy, double r2) {
        if (r2 == 0.0) throw PreconditionError("EwaldGreen::gradient: evaluation at the pole");
        const double f = -std::exp(-r2 / (4.0 * tau_)) / (2.0 * kPi * r2);
        g[0] += f * dx;
        g[1] += f * dy;
    });
    return g;
}

std::array<double, 2> EwaldGreen::regular_gradient(Point d) const {
    d = min_image(d);
    auto g = reciprocal_gradient(d);
    for_images(d, [&](int mx, int my, double dx, double dy, double r2) {
        const double z = r2 / (4.0 * tau_);
        double f;
        if (mx == 0 && my == 0)
            f = r2 == 0.0 ? 0.0 : -std::expm1(-z) / (2.0 * kPi * r2);
        else
            f = -std::exp(-z) / (2.0 * kPi * r2);
        g[0] += f * dx;
        g[1] += f * dy;
    });
    return g;
}

double EwaldGreen::laplacian(Point d) const {
    d = min_image(d);
    const int K = kmax_;
    std::vector<std::complex<double>> ex(2 * K + 1), ey(2 * K + 1);
    for (int k = -K; k <= K; ++k) {
        ex[k + K] = std::polar(1.0, 2.0 * kPi * k * d.x);
        ey[k + K] = std::polar(1.0, 2.0 * kPi * k * d.y);
    }
    double acc = 0.0;
    for (const Mode& m : modes_) {
        const double a = 4.0 * kPi * kPi * (m.kx * m.kx + m.ky * m.ky);
        acc -= a * m.c * (ex[m.kx + K] * ey[m.ky + K]).real();
    }
    for_images(d, [&](int, int, double, double, double r2) {
        acc += std::exp(-r2 / (4.0 * tau_)) / (4.0 * kPi * tau_);
    });
    return acc;
}

double EwaldGreen::robin() const {
    double acc = -tau_ + (std::log(4.0 * tau_) - kGamma) / (4.0 * kPi);
    for (const Mode& m : modes_) acc += m.c;
    for_images({0.0, 0.0}, [&](int mx, int my, double, double, double r2) {
        if (mx != 0 || my != 0) acc += expint_e1(r2 / (4.0 * tau_)) / (4.0 * kPi);
    });
    return acc;
}

ScalarField EwaldGreen::node_field(int n, Point p, double pole_value) const {
    if (2 * kmax_ >= n) throw PreconditionError("EwaldGreen::node_field: grid too coarse for tau");
    p = wrap(p);
    const double n2 = static_cast<double>(n) * n;
    HalfSpectrum s;
    s.n = n;
    s.c.assign(static_cast<std::size_t>(n) * s.cols(), cplx(0.0));
    for (const Mode& m : modes_) {
        if (m.ky < 0) continue;
        const cplx phase = std::polar(1.0, -2.0 * kPi * (m.kx * p.x + m.ky * p.y));
        s.at((m.kx + n) % n, m.ky) = n2 * m.c * phase;
    }
    ScalarField g = fft_for(n)->backward(s);

    const std::size_t pole = nearest_node(n, p);
    const bool on_node = flat_distance(g.node(pole), p) < 1e-12;
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (on_node && k == pole) {
            g[k] = pole_value;
            continue;
        }
        Point x = g.node(k);
        Point d = min_image({x.x - p.x, x.y - p.y});
        double acc = -tau_;
        for_images(d, [&](int, int, double, double, double r2) {
            acc += expint_e1(r2 / (4.0 * tau_)) / (4.0 * kPi);
        });
        g[k] += acc;
    }
    return g;
}

} // namespace smf
