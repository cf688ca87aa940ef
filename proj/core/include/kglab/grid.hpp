#pragma once

#include <cstddef>
#include <stdexcept>

namespace kglab {

/// Uniform periodic lattice on the torus [-L/2, L/2)^n, equal N and L per axis.
struct Grid {
    int n = 1;          // spatial dimension, 1..3
    double L = 0.0;     // period per axis
    std::size_t N = 0;  // points per axis, even

    Grid() = default;
    Grid(int n_, double L_, std::size_t N_) : n(n_), L(L_), N(N_) { validate(); }

    void validate() const {
        if (n < 1 || n > 3) throw std::invalid_argument("Grid: dimension must be 1, 2 or 3");
        if (!(L > 0.0)) throw std::invalid_argument("Grid: period L must be positive");
        if (N < 2 || N % 2 != 0) throw std::invalid_argument("Grid: N must be even and >= 2");
    }

    double spacing() const { return L / static_cast<double>(N); }

    std::size_t total_points() const {
        std::size_t t = 1;
        for (int a = 0; a < n; ++a) t *= N;
        return t;
    }

    // Quadrature weight h^n of one lattice cell.
    double cell_volume() const {
        double w = 1.0;
        for (int a = 0; a < n; ++a) w *= spacing();
        return w;
    }

    /// Physical coordinate of lattice index i along one axis.
    double coord(std::size_t i) const { return -0.5 * L + static_cast<double>(i) * spacing(); }

    /// Integer wavenumber of FFT bin j (maps to k = 2*pi*m/L with m in [-N/2, N/2)).
    long mode_index(std::size_t j) const {
        return j <= N / 2 ? static_cast<long>(j) : static_cast<long>(j) - static_cast<long>(N);
    }

    /// Angular wavenumber of FFT bin j along one axis.
    double wavenumber(std::size_t j) const {
        return 2.0 * 3.14159265358979323846 * static_cast<double>(mode_index(j)) / L;
    }

    bool operator==(const Grid& o) const { return n == o.n && L == o.L && N == o.N; }
};

}  // namespace kglab
