#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "dwlab/grid.hpp"

namespace dwlab {

class SpectralField;

/// Real-valued samples of a function on a Grid, row-major.
class Field {
public:
    Field() = default;
    explicit Field(const Grid& g) : grid_(g), v_(g.size(), 0.0) {}
    Field(const Grid& g, std::vector<double> samples);

    /// Sample a scalar function of the coordinates. 1D: f(x). 2D: f(x0, x1).
    static Field from_function(const Grid& g, const std::function<double(double)>& f);
    static Field from_function(const Grid& g, const std::function<double(double, double)>& f);

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return v_.size(); }
    double operator[](std::size_t i) const { return v_[i]; }
    double& operator[](std::size_t i) { return v_[i]; }
    const std::vector<double>& samples() const { return v_; }
    std::vector<double>& samples() { return v_; }

    bool all_finite() const;

    Field& operator+=(const Field& o);
    Field& operator-=(const Field& o);
    Field& operator*=(double a);
    friend Field operator+(Field a, const Field& b) { a += b; return a; }
    friend Field operator-(Field a, const Field& b) { a -= b; return a; }
    friend Field operator*(double a, Field f) { f *= a; return f; }

private:
    Grid grid_;
    std::vector<double> v_;
};

/// Fourier-series coefficients c_k of a real field on [-L, L)^n, indexed by
/// integer wave vectors k in FFT order; the physical frequency is xi = pi k / L.
/// Normalization: f(x) = sum_k c_k e^{i xi_k . x} and
/// ||f||_{L2}^2 = (2L)^n sum_k |c_k|^2.
class SpectralField {
public:
    SpectralField() = default;
    explicit SpectralField(const Grid& g) : grid_(g), c_(g.size(), {0.0, 0.0}) {}

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return c_.size(); }
    std::complex<double> operator[](std::size_t i) const { return c_[i]; }
    std::complex<double>& operator[](std::size_t i) { return c_[i]; }
    const std::vector<std::complex<double>>& coeffs() const { return c_; }
    std::vector<std::complex<double>>& coeffs() { return c_; }

    /// Integer wave number for a raw index along one axis.
    int wave_index(int i) const { return i <= grid_.N / 2 ? i : i - grid_.N; }
    /// Physical frequency xi = pi k / L for a raw index along one axis.
    double xi(int i) const { return M_PI * wave_index(i) / grid_.L; }
    /// |xi|^2 of the flattened index.
    double xi_norm2(std::size_t idx) const;

private:
    Grid grid_;
    std::vector<std::complex<double>> c_;
};

SpectralField fft(const Field& f);
Field ifft(const SpectralField& s);

/// Spectral derivative along one axis (Nyquist mode zeroed).
SpectralField derivative(const SpectralField& s, int axis);
/// Gradient as n fields, spectral differentiation.
std::vector<Field> gradient(const Field& f);
Field laplacian(const Field& f);

/// h^n sum of samples; spectrally accurate for smooth decaying fields.
double integrate(const Field& f);
double l2_norm(const Field& f);
double linf_norm(const Field& f);
double l2_norm(const SpectralField& s);
/// Weighted Sobolev norm sum_{|a|<=k} ||(1+|x|)^m d^a f||_{L2}, k in {0,1}.
double weighted_norm(const Field& f, int k, double m);

/// Zero all modes with |k| > N/3 on any axis (2/3-rule dealiasing).
void dealias_two_thirds(SpectralField& s);
Field dealias_two_thirds(const Field& f);

/// Normalized Gaussian phi0(y) = (4 pi)^{-n/2} exp(-|y|^2/4); integral 1.
Field gaussian_phi0(const Grid& g);
/// psi0 = Laplacian of phi0, from the analytic formula (|y|^2/4 - n/2) phi0.
Field gaussian_psi0(const Grid& g);
/// Analytic gradient of psi0, component `axis`.
Field gaussian_psi0_gradient(const Grid& g, int axis);
/// Heat kernel G(tau, x) = (4 pi tau)^{-n/2} exp(-|x|^2 / (4 tau)).
Field heat_gaussian(const Grid& g, double tau);

struct GNCheck {
    double lhs;        // ||f||_{L^{2p}}
    double rhs_factor; // ||grad f||^sigma ||f||^{1-sigma}
    double sigma;      // n(p-1)/(2p)
};
/// Both sides of the Gagliardo-Nirenberg inequality; the caller judges the ratio.
GNCheck gn_check(const Field& f, double p);

/// Evaluate the trigonometric interpolant of `s` on a tensor-product set of
/// target coordinates (targets[a] per axis, one per output grid point).
/// Targets outside [-L, L) see the periodic extension; callers mask if needed.
/// Exact for the underlying band-limited function, up to round-off.
Field evaluate_on_targets(const SpectralField& s, const Grid& out_grid,
                          const std::vector<std::vector<double>>& targets);

namespace detail {
/// Unnormalized in-place radix-2 complex FFT; sign = -1 forward, +1 backward.
void fft_radix2(std::complex<double>* a, std::size_t n, int sign);
} // namespace detail

} // namespace dwlab
