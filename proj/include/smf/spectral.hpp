#pragma once

#include "smf/field.hpp"

#include <complex>
#include <memory>
#include <vector>

namespace smf {

using cplx = std::complex<double>;

// Half-plane (real-to-complex) spectrum of an n x n field: n rows indexed by
// the x-wavenumber, n/2+1 columns indexed by the non-negative y-wavenumber.
struct HalfSpectrum {
    int n = 0;
    std::vector<cplx> c;

    int cols() const { return n / 2 + 1; }
    cplx& at(int i, int j) { return c[static_cast<std::size_t>(i) * cols() + j]; }
    cplx at(int i, int j) const { return c[static_cast<std::size_t>(i) * cols() + j]; }
};

// Signed wavenumber of DFT index i on an n-point axis, in [-n/2, n/2).
inline int wavenumber(int i, int n) { return i < n / 2 ? i : i - n; }

// FFTW plans for one resolution.  Plans are created once (FFTW_ESTIMATE, so
// results do not depend on timing) and executed through the new-array
// interface, which is safe for concurrent use.
class Fft {
public:
    explicit Fft(int n);
    ~Fft();
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    int n() const { return n_; }

    // Unnormalized forward transform: c_k = sum_j u_j exp(-2 pi i k.j/n).
    HalfSpectrum forward(const ScalarField& u) const;
    // Inverse transform including the 1/n^2 normalization.
    ScalarField backward(const HalfSpectrum& s) const;

private:
    int n_;
    void* r2c_ = nullptr;
    void* c2r_ = nullptr;
};

// Shared plan cache keyed by resolution.
std::shared_ptr<const Fft> fft_for(int n);

// Multiply the spectrum of u by a real symbol m(kx, ky); Nyquist indices are
// passed as kx = -n/2 (resp. ky = n/2).
template <class Symbol>
ScalarField apply_symbol(const Fft& fft, const ScalarField& u, Symbol&& m) {
    HalfSpectrum s = fft.forward(u);
    const int n = s.n;
    for (int i = 0; i < n; ++i) {
        const int kx = wavenumber(i, n);
        for (int j = 0; j < s.cols(); ++j) s.at(i, j) *= m(kx, j);
    }
    return fft.backward(s);
}

} // namespace smf
