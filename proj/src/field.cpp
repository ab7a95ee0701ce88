#include "dwlab/field.hpp"

#include <algorithm>
#include <cmath>

namespace dwlab {

Field::Field(const Grid& g, std::vector<double> samples) : grid_(g), v_(std::move(samples)) {
    if (v_.size() != g.size()) throw ValidationError("field: sample count does not match grid");
}

Field Field::from_function(const Grid& g, const std::function<double(double)>& f) {
    if (g.n != 1) throw ValidationError("field: 1-argument generator requires a 1D grid");
    Field out(g);
    for (int j = 0; j < g.N; ++j) out[j] = f(g.coord(j));
    return out;
}

Field Field::from_function(const Grid& g, const std::function<double(double, double)>& f) {
    if (g.n != 2) throw ValidationError("field: 2-argument generator requires a 2D grid");
    Field out(g);
    for (int i = 0; i < g.N; ++i)
        for (int j = 0; j < g.N; ++j) out[std::size_t(i) * g.N + j] = f(g.coord(i), g.coord(j));
    return out;
}

bool Field::all_finite() const {
    return std::all_of(v_.begin(), v_.end(), [](double x) { return std::isfinite(x); });
}

Field& Field::operator+=(const Field& o) {
    if (grid_ != o.grid_) throw ValidationError("field: grid mismatch");
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
    return *this;
}

Field& Field::operator-=(const Field& o) {
    if (grid_ != o.grid_) throw ValidationError("field: grid mismatch");
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
    return *this;
}

Field& Field::operator*=(double a) {
    for (double& x : v_) x *= a;
    return *this;
}

double SpectralField::xi_norm2(std::size_t idx) const {
    if (grid_.n == 1) {
        const double x = xi(int(idx));
        return x * x;
    }
    const int N = grid_.N;
    const double x0 = xi(int(idx) / N);
    const double x1 = xi(int(idx) % N);
    return x0 * x0 + x1 * x1;
}

SpectralField derivative(const SpectralField& s, int axis) {
    const Grid& g = s.grid();
    SpectralField out(g);
    const int N = g.N;
    for (std::size_t idx = 0; idx < s.size(); ++idx) {
        const int i = g.n == 1 ? int(idx) : (axis == 0 ? int(idx) / N : int(idx) % N);
        if (i == N / 2) { out[idx] = 0.0; continue; } // Nyquist
        out[idx] = std::complex<double>(0.0, s.xi(i)) * s[idx];
    }
    return out;
}

std::vector<Field> gradient(const Field& f) {
    const SpectralField s = fft(f);
    std::vector<Field> out;
    for (int a = 0; a < f.grid().n; ++a) out.push_back(ifft(derivative(s, a)));
    return out;
}

Field laplacian(const Field& f) {
    SpectralField s = fft(f);
    for (std::size_t idx = 0; idx < s.size(); ++idx) s[idx] *= -s.xi_norm2(idx);
    return ifft(s);
}

double integrate(const Field& f) {
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) acc += f[i];
    return acc * std::pow(f.grid().h(), f.grid().n);
}

double l2_norm(const Field& f) {
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) acc += f[i] * f[i];
    return std::sqrt(acc * std::pow(f.grid().h(), f.grid().n));
}

double linf_norm(const Field& f) {
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f[i]));
    return m;
}

double l2_norm(const SpectralField& s) {
    double acc = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) acc += std::norm(s[i]);
    return std::sqrt(acc * std::pow(2.0 * s.grid().L, s.grid().n));
}

namespace {

Field weight_1px(const Field& f, double m) {
    const Grid& g = f.grid();
    Field out(g);
    if (g.n == 1) {
        for (int j = 0; j < g.N; ++j) out[j] = std::pow(1.0 + std::abs(g.coord(j)), m) * f[j];
    } else {
        for (int i = 0; i < g.N; ++i)
            for (int j = 0; j < g.N; ++j) {
                const std::size_t idx = std::size_t(i) * g.N + j;
                const double r = std::hypot(g.coord(i), g.coord(j));
                out[idx] = std::pow(1.0 + r, m) * f[idx];
            }
    }
    return out;
}

} // namespace

double weighted_norm(const Field& f, int k, double m) {
    if (k != 0 && k != 1) throw ValidationError("weighted_norm: k must be 0 or 1");
    if (m < 0.0) throw ValidationError("weighted_norm: m must be nonnegative");
    double acc = l2_norm(weight_1px(f, m));
    if (k == 1)
        for (const Field& d : gradient(f)) acc += l2_norm(weight_1px(d, m));
    return acc;
}

void dealias_two_thirds(SpectralField& s) {
    const Grid& g = s.grid();
    const int kcut = g.N / 3;
    const int N = g.N;
    for (std::size_t idx = 0; idx < s.size(); ++idx) {
        bool kill;
        if (g.n == 1) {
            kill = std::abs(s.wave_index(int(idx))) > kcut;
        } else {
            kill = std::abs(s.wave_index(int(idx) / N)) > kcut ||
                   std::abs(s.wave_index(int(idx) % N)) > kcut;
        }
        if (kill) s[idx] = 0.0;
    }
}

Field dealias_two_thirds(const Field& f) {
    SpectralField s = fft(f);
    dealias_two_thirds(s);
    return ifft(s);
}

Field gaussian_phi0(const Grid& g) {
    const double c = std::pow(4.0 * M_PI, -0.5 * g.n);
    if (g.n == 1)
        return Field::from_function(g, [c](double y) { return c * std::exp(-y * y / 4.0); });
    return Field::from_function(
        g, [c](double a, double b) { return c * std::exp(-(a * a + b * b) / 4.0); });
}

Field gaussian_psi0(const Grid& g) {
    const double c = std::pow(4.0 * M_PI, -0.5 * g.n);
    const double n2 = 0.5 * g.n;
    if (g.n == 1)
        return Field::from_function(g, [=](double y) {
            return (y * y / 4.0 - n2) * c * std::exp(-y * y / 4.0);
        });
    return Field::from_function(g, [=](double a, double b) {
        const double r2 = a * a + b * b;
        return (r2 / 4.0 - n2) * c * std::exp(-r2 / 4.0);
    });
}

Field gaussian_psi0_gradient(const Grid& g, int axis) {
    // d_i psi0 = (y_i/2)((n+2)/2 - |y|^2/4) phi0
    const double c = std::pow(4.0 * M_PI, -0.5 * g.n);
    const double a0 = 0.5 * (g.n + 2);
    if (g.n == 1)
        return Field::from_function(g, [=](double y) {
            return 0.5 * y * (a0 - y * y / 4.0) * c * std::exp(-y * y / 4.0);
        });
    return Field::from_function(g, [=](double a, double b) {
        const double r2 = a * a + b * b;
        const double yi = axis == 0 ? a : b;
        return 0.5 * yi * (a0 - r2 / 4.0) * c * std::exp(-r2 / 4.0);
    });
}

Field heat_gaussian(const Grid& g, double tau) {
    if (tau <= 0.0) throw ValidationError("heat_gaussian: tau must be positive");
    const double c = std::pow(4.0 * M_PI * tau, -0.5 * g.n);
    if (g.n == 1)
        return Field::from_function(g, [=](double x) { return c * std::exp(-x * x / (4.0 * tau)); });
    return Field::from_function(g, [=](double a, double b) {
        return c * std::exp(-(a * a + b * b) / (4.0 * tau));
    });
}

GNCheck gn_check(const Field& f, double p) {
    if (p <= 1.0) throw ValidationError("gn_check: p must exceed 1");
    const Grid& g = f.grid();
    const double sigma = g.n * (p - 1.0) / (2.0 * p);
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) acc += std::pow(std::abs(f[i]), 2.0 * p);
    const double lhs = std::pow(acc * std::pow(g.h(), g.n), 1.0 / (2.0 * p));
    double grad2 = 0.0;
    for (const Field& d : gradient(f)) {
        const double nd = l2_norm(d);
        grad2 += nd * nd;
    }
    const double rhs = std::pow(std::sqrt(grad2), sigma) * std::pow(l2_norm(f), 1.0 - sigma);
    return {lhs, rhs, sigma};
}

Field evaluate_on_targets(const SpectralField& s, const Grid& out_grid,
                          const std::vector<std::vector<double>>& targets) {
    const Grid& g = s.grid();
    if (int(targets.size()) != g.n) throw ValidationError("evaluate_on_targets: one target list per axis required");
    for (const auto& t : targets)
        if (int(t.size()) != out_grid.N) throw ValidationError("evaluate_on_targets: target count must match output grid");
    const int N = g.N;
    const int M = out_grid.N;

    // per-axis evaluation matrices E[a][t*N + i] = exp(i xi_i X_t); uniformly
    // spaced targets (the usual case) fill each column by a phase recurrence
    auto make_matrix = [&](const std::vector<double>& tv) {
        std::vector<std::complex<double>> E(std::size_t(M) * N);
        bool uniform = M >= 2;
        const double d = M >= 2 ? tv[1] - tv[0] : 0.0;
        for (int t = 2; t < M && uniform; ++t)
            uniform = std::abs(tv[t] - tv[t - 1] - d) <= 1e-12 * (std::abs(d) + 1.0);
        if (uniform && M >= 2) {
            for (int i = 0; i < N; ++i) {
                const double xi = s.xi(i);
                std::complex<double> phase(std::cos(xi * tv[0]), std::sin(xi * tv[0]));
                const std::complex<double> step(std::cos(xi * d), std::sin(xi * d));
                for (int t = 0; t < M; ++t) {
                    E[std::size_t(t) * N + i] = phase;
                    phase *= step;
                }
            }
        } else {
            for (int t = 0; t < M; ++t)
                for (int i = 0; i < N; ++i) {
                    const double phase = s.xi(i) * tv[t];
                    E[std::size_t(t) * N + i] = {std::cos(phase), std::sin(phase)};
                }
        }
        return E;
    };

    Field out(out_grid);
    if (g.n == 1) {
        const std::vector<double>& tv = targets[0];
        bool uniform = M >= 2;
        const double d = M >= 2 ? tv[1] - tv[0] : 0.0;
        for (int t = 2; t < M && uniform; ++t)
            uniform = std::abs(tv[t] - tv[t - 1] - d) <= 1e-12 * (std::abs(d) + 1.0);
        if (uniform && M >= 2) {
            std::vector<std::complex<double>> acc(M, {0.0, 0.0});
            for (int i = 0; i < N; ++i) {
                if (s[i] == std::complex<double>(0.0, 0.0)) continue;
                const double xi = s.xi(i);
                std::complex<double> cur =
                    s[i] * std::complex<double>(std::cos(xi * tv[0]), std::sin(xi * tv[0]));
                const std::complex<double> step(std::cos(xi * d), std::sin(xi * d));
                for (int t = 0; t < M; ++t) {
                    acc[t] += cur;
                    cur *= step;
                }
            }
            for (int t = 0; t < M; ++t) out[t] = acc[t].real();
        } else {
            for (int t = 0; t < M; ++t) {
                std::complex<double> a(0.0, 0.0);
                for (int i = 0; i < N; ++i) {
                    const double phase = s.xi(i) * tv[t];
                    a += std::complex<double>(std::cos(phase), std::sin(phase)) * s[i];
                }
                out[t] = a.real();
            }
        }
        return out;
    }
    const auto E0 = make_matrix(targets[0]);
    const auto E1 = make_matrix(targets[1]);
    // contract axis 0: mid[t0, k1] = sum_{k0} E0[t0, k0] c[k0, k1]
    std::vector<std::complex<double>> mid(std::size_t(M) * N, {0.0, 0.0});
    for (int t0 = 0; t0 < M; ++t0)
        for (int k0 = 0; k0 < N; ++k0) {
            const std::complex<double> e = E0[std::size_t(t0) * N + k0];
            const std::complex<double>* row = s.coeffs().data() + std::size_t(k0) * N;
            std::complex<double>* acc = mid.data() + std::size_t(t0) * N;
            for (int k1 = 0; k1 < N; ++k1) acc[k1] += e * row[k1];
        }
    for (int t0 = 0; t0 < M; ++t0)
        for (int t1 = 0; t1 < M; ++t1) {
            std::complex<double> acc(0.0, 0.0);
            const std::complex<double>* m = mid.data() + std::size_t(t0) * N;
            const std::complex<double>* e = E1.data() + std::size_t(t1) * N;
            for (int k1 = 0; k1 < N; ++k1) acc += e[k1] * m[k1];
            out[std::size_t(t0) * M + t1] = acc.real();
        }
    return out;
}

} // namespace dwlab
