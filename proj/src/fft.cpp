#include "dwlab/field.hpp"

#include <cmath>

namespace dwlab::detail {

void fft_radix2(std::complex<double>* a, std::size_t n, int sign) {
    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * M_PI / double(len);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                const std::complex<double> u = a[i + j];
                const std::complex<double> v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

} // namespace dwlab::detail

namespace dwlab {
namespace {

// n-dimensional unnormalized transform over the row-major buffer.
void transform_nd(std::vector<std::complex<double>>& a, const Grid& g, int sign) {
    const std::size_t N = std::size_t(g.N);
    if (g.n == 1) {
        detail::fft_radix2(a.data(), N, sign);
        return;
    }
    // axis 1: contiguous rows
    for (std::size_t r = 0; r < N; ++r) detail::fft_radix2(a.data() + r * N, N, sign);
    // axis 0: strided columns
    std::vector<std::complex<double>> col(N);
    for (std::size_t c = 0; c < N; ++c) {
        for (std::size_t r = 0; r < N; ++r) col[r] = a[r * N + c];
        detail::fft_radix2(col.data(), N, sign);
        for (std::size_t r = 0; r < N; ++r) a[r * N + c] = col[r];
    }
}

// (-1)^{k0+k1} phase relating DFT indices to series coefficients on [-L, L).
inline double index_phase(const Grid& g, std::size_t idx) {
    if (g.n == 1) return (idx & 1) ? -1.0 : 1.0;
    const std::size_t N = std::size_t(g.N);
    return ((idx / N + idx % N) & 1) ? -1.0 : 1.0;
}

} // namespace

SpectralField fft(const Field& f) {
    const Grid& g = f.grid();
    SpectralField out(g);
    auto& c = out.coeffs();
    for (std::size_t i = 0; i < f.size(); ++i) c[i] = {f[i], 0.0};
    transform_nd(c, g, -1);
    const double scale = 1.0 / double(g.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] *= scale * index_phase(g, i);
    return out;
}

Field ifft(const SpectralField& s) {
    const Grid& g = s.grid();
    std::vector<std::complex<double>> a(s.coeffs());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] *= index_phase(g, i);
    transform_nd(a, g, +1);
    Field out(g);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i].real();
    return out;
}

} // namespace dwlab
