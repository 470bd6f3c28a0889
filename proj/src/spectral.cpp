#include "smf/spectral.hpp"

#include "smf/errors.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>

namespace smf {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

} // namespace

Fft::Fft(int n) : n_(n) {
    if (n < 2 || (n & (n - 1)) != 0) throw PreconditionError("Fft: n must be a power of two");
    std::lock_guard<std::mutex> lock(planner_mutex());
    const std::size_t real_len = static_cast<std::size_t>(n) * n;
    const std::size_t half_len = static_cast<std::size_t>(n) * (n / 2 + 1);
    double* r = fftw_alloc_real(real_len);
    fftw_complex* c = fftw_alloc_complex(half_len);
    r2c_ = fftw_plan_dft_r2c_2d(n, n, r, c, FFTW_ESTIMATE);
    c2r_ = fftw_plan_dft_c2r_2d(n, n, c, r, FFTW_ESTIMATE);
    fftw_free(r);
    fftw_free(c);
    if (!r2c_ || !c2r_) throw NumericalError("Fft: plan creation failed");
}

Fft::~Fft() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(r2c_));
    fftw_destroy_plan(static_cast<fftw_plan>(c2r_));
}

HalfSpectrum Fft::forward(const ScalarField& u) const {
    if (u.n() != n_) throw PreconditionError("Fft::forward: grid mismatch");
    const std::size_t real_len = static_cast<std::size_t>(n_) * n_;
    HalfSpectrum s;
    s.n = n_;
    s.c.resize(static_cast<std::size_t>(n_) * s.cols());
    double* r = fftw_alloc_real(real_len);
    fftw_complex* c = fftw_alloc_complex(s.c.size());
    std::memcpy(r, u.values().data(), real_len * sizeof(double));
    fftw_execute_dft_r2c(static_cast<fftw_plan>(r2c_), r, c);
    for (std::size_t k = 0; k < s.c.size(); ++k) s.c[k] = cplx(c[k][0], c[k][1]);
    fftw_free(r);
    fftw_free(c);
    return s;
}

ScalarField Fft::backward(const HalfSpectrum& s) const {
    if (s.n != n_) throw PreconditionError("Fft::backward: grid mismatch");
    const std::size_t real_len = static_cast<std::size_t>(n_) * n_;
    double* r = fftw_alloc_real(real_len);
    fftw_complex* c = fftw_alloc_complex(s.c.size());
    for (std::size_t k = 0; k < s.c.size(); ++k) {
        c[k][0] = s.c[k].real();
        c[k][1] = s.c[k].imag();
    }
    fftw_execute_dft_c2r(static_cast<fftw_plan>(c2r_), c, r);
    ScalarField u(n_);
    const double scale = 1.0 / static_cast<double>(real_len);
    for (std::size_t k = 0; k < real_len; ++k) u[k] = r[k] * scale;
    fftw_free(r);
    fftw_free(c);
    return u;
}

std::shared_ptr<const Fft> fft_for(int n) {
    static std::mutex m;
    static std::map<int, std::shared_ptr<const Fft>> cache;
    std::lock_guard<std::mutex> lock(m);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    auto plan = std::make_shared<const Fft>(n);
    cache.emplace(n, plan);
    return plan;
}

} // namespace smf
