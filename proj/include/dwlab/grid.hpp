#pragma once

#include <cstddef>
#include <cstdint>

#include "dwlab/errors.hpp"

namespace dwlab {

/// Uniform periodic grid on [-L, L)^n with N points per axis, N a power of two.
/// Index convention is row-major: (i0, i1) -> i0 * N + i1 for n = 2.
struct Grid {
    int n = 1;      // spatial dimension, 1 or 2
    double L = 20.0; // half-width of the domain
    int N = 512;    // points per axis

    Grid() = default;
    Grid(int n_, double L_, int N_) : n(n_), L(L_), N(N_) { validate(); }

    void validate() const {
        if (n != 1 && n != 2) throw ValidationError("grid: dimension must be 1 or 2");
        if (L <= 0.0) throw ValidationError("grid: L must be positive");
        if (N < 16 || (N & (N - 1)) != 0) throw ValidationError("grid: N must be a power of two >= 16");
    }

    double h() const { return 2.0 * L / N; }
    std::size_t size() const { return n == 1 ? std::size_t(N) : std::size_t(N) * N; }
    /// Coordinate of index j along one axis: x_j = -L + j h.
    double coord(int j) const { return -L + j * h(); }

    bool operator==(const Grid& o) const { return n == o.n && L == o.L && N == o.N; }
    bool operator!=(const Grid& o) const { return !(*this == o); }
};

} // namespace dwlab
