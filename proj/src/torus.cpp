#include "smf/torus.hpp"

#include "smf/errors.hpp"

#include <algorithm>
#include <numbers>
#include <sstream>

namespace smf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMaxDynamicRange = 1e3;

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

ScalarField raw_psi(int n, const PsiSpec& spec) {
    switch (spec.kind) {
    case PsiSpec::Kind::Flat:
        return ScalarField(n, 0.0);
    case PsiSpec::Kind::GaussianBump: {
        const double s2 = 2.0 * spec.sigma * spec.sigma;
        return sample(n, [&](Point p) {
            Point d = min_image({p.x - spec.center.x, p.y - spec.center.y});
            double acc = 0.0;
            for (int mx = -2; mx <= 2; ++mx)
                for (int my = -2; my <= 2; ++my) {
                    double dx = d.x - mx, dy = d.y - my;
                    acc += std::exp(-(dx * dx + dy * dy) / s2);
                }
            return spec.amp * acc;
        });
    }
    case PsiSpec::Kind::CosineMix:
        return sample(n, [&](Point p) {
            double acc = 0.0;
            for (const auto& m : spec.modes)
                acc += m.amp * std::cos(2.0 * kPi * (m.kx * p.x + m.ky * p.y) + m.phase);
            return acc;
        });
    }
    return ScalarField(n, 0.0);
}

} // namespace

PsiSpec PsiSpec::gaussian_bump(double amp, double sigma, Point center) {
    PsiSpec s;
    s.kind = Kind::GaussianBump;
    s.amp = amp;
    s.sigma = sigma;
    s.center = center;
    return s;
}

PsiSpec PsiSpec::cosine_mix(std::vector<Mode> modes) {
    PsiSpec s;
    s.kind = Kind::CosineMix;
    s.modes = std::move(modes);
    return s;
}

std::string PsiSpec::describe() const {
    std::ostringstream os;
    switch (kind) {
    case Kind::Flat: os << "flat"; break;
    case Kind::GaussianBump:
        os << "gaussian_bump(amp=" << amp << ", sigma=" << sigma << ", center=(" << center.x << ","
           << center.y << "))";
        break;
    case Kind::CosineMix: os << "cosine_mix(" << modes.size() << " modes)"; break;
    }
    return os.str();
}

GridPtr build_surface(int n, const PsiSpec& spec) {
    if (!power_of_two(n) || n < 32 || n > 4096)
        throw PreconditionError("build_surface: n must be a power of two in [32, 4096], got " +
                                std::to_string(n));
    if (spec.kind == PsiSpec::Kind::GaussianBump && !(spec.sigma > 0.0))
        throw PreconditionError("build_surface: gaussian_bump sigma must be positive");

    auto grid = std::make_shared<TorusGrid>();
    grid->n = n;
    grid->spec = spec;
    grid->fft = fft_for(n);
    grid->flat_cell_area = 1.0 / (static_cast<double>(n) * n);
    grid->flat = spec.kind == PsiSpec::Kind::Flat;

    ScalarField psi = raw_psi(n, spec);
    if (!grid->flat) {
        const double cut = n / 3.0;
        psi = apply_symbol(*grid->fft, psi, [&](int kx, int ky) {
            return (std::abs(kx) > cut || std::abs(ky) > cut) ? 0.0 : 1.0;
        });
    }
    if (!psi.all_finite()) throw PreconditionError("build_surface: psi is not finite");
    if (std::exp(psi.max() - psi.min()) > kMaxDynamicRange)
        throw PreconditionError("build_surface: e^psi dynamic range exceeds 1e3");

    double area = 0.0;
    for (double v : psi.values()) area += std::exp(v);
    area *= grid->flat_cell_area;
    if (!grid->flat) psi += -std::log(area);

    grid->exp_psi = ScalarField(n);
    grid->area_weights = ScalarField(n);
    for (std::size_t k = 0; k < psi.size(); ++k) {
        grid->exp_psi[k] = std::exp(psi[k]);
        grid->area_weights[k] = grid->exp_psi[k] * grid->flat_cell_area;
    }
    grid->psi = std::move(psi);
    return grid;
}

double integrate(const ScalarField& f, const TorusGrid& grid) {
    require_same_shape(f, grid.area_weights, "integrate");
    double acc = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) acc += f[k] * grid.area_weights[k];
    return acc;
}

double integrate_flat(const ScalarField& f) {
    double acc = 0.0;
    for (double v : f.values()) acc += v;
    return acc / static_cast<double>(f.size());
}

ScalarField flat_laplacian(const ScalarField& u, const TorusGrid& grid) {
    require_same_shape(u, grid.psi, "flat_laplacian");
    return apply_symbol(*grid.fft, u, [](int kx, int ky) {
        return -4.0 * kPi * kPi * (double(kx) * kx + double(ky) * ky);
    });
}

ScalarField laplace_beltrami(const ScalarField& u, const TorusGrid& grid) {
    ScalarField out = flat_laplacian(u, grid);
    if (!grid.flat)
        for (std::size_t k = 0; k < out.size(); ++k) out[k] /= grid.exp_psi[k];
    return out;
}

std::array<ScalarField, 2> gradient(const ScalarField& u, const TorusGrid& grid) {
    require_same_shape(u, grid.psi, "gradient");
    const int n = grid.n;
    HalfSpectrum s = grid.fft->forward(u);
    HalfSpectrum sx = s, sy = s;
    for (int i = 0; i < n; ++i) {
        const int kx = wavenumber(i, n);
        for (int j = 0; j < s.cols(); ++j) {
            const bool nyq_x = kx == -n / 2, nyq_y = j == n / 2;
            sx.at(i, j) *= nyq_x ? cplx(0.0) : cplx(0.0, 2.0 * kPi * kx);
            sy.at(i, j) *= nyq_y ? cplx(0.0) : cplx(0.0, 2.0 * kPi * j);
        }
    }
    return {grid.fft->backward(sx), grid.fft->backward(sy)};
}

ScalarField gradient_density(const ScalarField& u, const TorusGrid& grid) {
    auto g = gradient(u, grid);
    ScalarField out(grid.n);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = g[0][k] * g[0][k] + g[1][k] * g[1][k];
    return out;
}

double dirichlet_energy(const ScalarField& u, const TorusGrid& grid) {
    require_same_shape(u, grid.psi, "dirichlet_energy");
    const int n = grid.n;
    HalfSpectrum s = grid.fft->forward(u);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double kx = wavenumber(i, n);
        for (int j = 0; j < s.cols(); ++j) {
            const double mult = (j == 0 || j == n / 2) ? 1.0 : 2.0;
            acc += mult * (kx * kx + double(j) * j) * std::norm(s.at(i, j));
        }
    }
    const double n2 = static_cast<double>(n) * n;
    return 4.0 * kPi * kPi * acc / (n2 * n2);
}

ScalarField flat_poisson_solve(const ScalarField& f, const TorusGrid& grid) {
    require_same_shape(f, grid.psi, "flat_poisson_solve");
    return apply_symbol(*grid.fft, f, [](int kx, int ky) {
        const double k2 = double(kx) * kx + double(ky) * ky;
        return k2 == 0.0 ? 0.0 : -1.0 / (4.0 * kPi * kPi * k2);
    });
}

ScalarField poisson_solve(const ScalarField& f, const TorusGrid& grid) {
    require_same_shape(f, grid.psi, "poisson_solve");
    const double mean = integrate(f, grid);
    double scale = 1.0;
    for (double v : f.values()) scale = std::max(scale, std::abs(v));
    if (std::abs(mean) > 1e-10 * scale)
        throw PreconditionError("poisson_solve: right-hand side has nonzero mean " + std::to_string(mean));
    ScalarField rhs = f;
    for (std::size_t k = 0; k < rhs.size(); ++k) rhs[k] *= grid.exp_psi[k];
    ScalarField u = flat_poisson_solve(rhs, grid);
    u += -integrate(u, grid);
    return u;
}

FourierInterpolant::FourierInterpolant(const ScalarField& u, double drop_tol) : n_(u.n()) {
    const int n = n_;
    HalfSpectrum s = fft_for(n)->forward(u);
    const double norm = 1.0 / (static_cast<double>(n) * n);
    std::vector<Term> all;
    all.reserve(static_cast<std::size_t>(n) * n);
    double cmax = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int jj = 0; jj < n; ++jj) {
            cplx c;
            if (jj <= n / 2)
                c = s.at(i, jj);
            else
                c = std::conj(s.at((n - i) % n, n - jj));
            c *= norm;
            cmax = std::max(cmax, std::abs(c));
            all.push_back({wavenumber(i, n), wavenumber(jj, n), c});
        }
    }
    const double cut = drop_tol * cmax;
    for (const Term& t : all) {
        if (std::abs(t.c) == 0.0 || std::abs(t.c) <= cut) continue;
        terms_.push_back(t);
        kmax_ = std::max({kmax_, std::abs(t.kx), std::abs(t.ky)});
    }
}

double FourierInterpolant::operator()(Point p) const {
    if (terms_.empty()) return 0.0;
    const int K = kmax_;
    const int nyq = -n_ / 2;
    // exp(2 pi i k x) for k in [-K, K], stored at offset K.
    std::vector<cplx> ex(2 * K + 1), ey(2 * K + 1);
    auto fill = [K](std::vector<cplx>& e, double x) {
        e[K] = 1.0;
        const cplx step = std::polar(1.0, 2.0 * kPi * x);
        cplx cur = 1.0;
        for (int k = 1; k <= K; ++k) {
            cur = (k % 32 == 0) ? std::polar(1.0, 2.0 * kPi * k * x) : cur * step;
            e[K + k] = cur;
            e[K - k] = std::conj(cur);
        }
    };
    fill(ex, p.x);
    fill(ey, p.y);
    const double cx = std::cos(kPi * n_ * p.x), cy = std::cos(kPi * n_ * p.y);
    double acc = 0.0;
    for (const Term& t : terms_) {
        const cplx bx = t.kx == nyq ? cplx(cx) : ex[K + t.kx];
        const cplx by = t.ky == nyq ? cplx(cy) : ey[K + t.ky];
        acc += (t.c * bx * by).real();
    }
    return acc;
}

std::vector<double> FourierInterpolant::operator()(const std::vector<Point>& pts) const {
    std::vector<double> out;
    out.reserve(pts.size());
    for (const Point& p : pts) out.push_back((*this)(p));
    return out;
}

FourierInterpolant FourierInterpolant::derivative_x() const {
    FourierInterpolant d;
    d.n_ = n_;
    for (const Term& t : terms_) {
        if (t.kx == -n_ / 2 || t.kx == 0) continue;
        d.terms_.push_back({t.kx, t.ky, t.c * cplx(0.0, 2.0 * kPi * t.kx)});
        d.kmax_ = std::max({d.kmax_, std::abs(t.kx), std::abs(t.ky)});
    }
    return d;
}

FourierInterpolant FourierInterpolant::derivative_y() const {
    FourierInterpolant d;
    d.n_ = n_;
    for (const Term& t : terms_) {
        if (t.ky == -n_ / 2 || t.ky == 0) continue;
        d.terms_.push_back({t.kx, t.ky, t.c * cplx(0.0, 2.0 * kPi * t.ky)});
        d.kmax_ = std::max({d.kmax_, std::abs(t.kx), std::abs(t.ky)});
    }
    return d;
}

std::vector<double> fourier_sample(const ScalarField& u, const std::vector<Point>& points) {
    return FourierInterpolant(u)(points);
}

} // namespace smf
