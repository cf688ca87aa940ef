#pragma once

#include "kglab/grid.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace kglab {

/// Real scalar function sampled on a periodic lattice. Row-major storage,
/// last axis contiguous.
struct Field {
    Grid grid;
    std::vector<double> values;

    Field() = default;
    explicit Field(const Grid& g) : grid(g), values(g.total_points(), 0.0) {}
    Field(const Grid& g, std::vector<double> v);

    std::size_t size() const { return values.size(); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }

    bool all_finite() const;
};

/// Instantaneous PDE state (u, v = u_t) at time t; u and v share one grid.
struct State {
    Field u;
    Field v;
    double t = 0.0;

    State() = default;
    State(Field u_, Field v_, double t_ = 0.0);
};

// Lattice quadrature: all integrals are plain lattice sums times h^n,
// accumulated with compensated summation in a fixed order so repeated
// runs are bit-identical.

double l2_norm_sq(const Field& f);
double inner_product(const Field& f, const Field& g);
double integrate(const Field& f);
double max_abs(const Field& f);

/// Sum over axes of the L2 norm of the spectral partial derivative.
double grad_norm_sq(const Field& f);

/// Fraction of l2_norm_sq carried by points within margin_fraction*L of the
/// torus boundary on any axis. Diagnoses whether the torus faithfully stands
/// in for compactly supported data on R^n.
double boundary_tail_mass(const Field& f, double margin_fraction);

/// Evaluate fn(x) at every lattice point; fn receives the centered coordinates.
template <typename Fn>
Field sample_field(const Grid& g, Fn&& fn) {
    Field f(g);
    const std::size_t N = g.N;
    if (g.n == 1) {
        for (std::size_t i = 0; i < N; ++i) f.values[i] = fn(g.coord(i), 0.0, 0.0);
    } else if (g.n == 2) {
        std::size_t idx = 0;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) f.values[idx++] = fn(g.coord(i), g.coord(j), 0.0);
    } else {
        std::size_t idx = 0;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j)
                for (std::size_t k = 0; k < N; ++k)
                    f.values[idx++] = fn(g.coord(i), g.coord(j), g.coord(k));
    }
    return f;
}

// Flat binary snapshot: 32-byte header (magic "KGF1", n, N, L, zero padding)
// followed by N^n little-endian doubles, row-major.
void write_field_binary(const Field& f, const std::string& path);
Field read_field_binary(const std::string& path);

/// CSV export (n = 1 only): header "x,u" then one row per lattice point.
void write_field_csv_1d(const Field& f, const std::string& path);

/// Compensated (Kahan) summation helper shared by the quadrature routines.
class KahanAccumulator {
  public:
    void add(double x) {
        double y = x - c_;
        double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double sum() const { return s_; }

  private:
    double s_ = 0.0;
    double c_ = 0.0;
};

}  // namespace kglab
