#include "kglab/field.hpp"

#include "kglab/spectral.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace kglab {

Field::Field(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (values.size() != g.total_points())
        throw std::invalid_argument("Field: value count does not match grid");
}

bool Field::all_finite() const {
    for (double x : values)
        if (!std::isfinite(x)) return false;
    return true;
}

State::State(Field u_, Field v_, double t_) : u(std::move(u_)), v(std::move(v_)), t(t_) {
    if (!(u.grid == v.grid)) throw std::invalid_argument("State: u and v on different grids");
    if (t < 0.0) throw std::invalid_argument("State: negative time");
}

double l2_norm_sq(const Field& f) {
    KahanAccumulator acc;
    for (double x : f.values) acc.add(x * x);
    return f.grid.cell_volume() * acc.sum();
}

double inner_product(const Field& f, const Field& g) {
    if (!(f.grid == g.grid)) throw std::invalid_argument("inner_product: grid mismatch");
    KahanAccumulator acc;
    for (std::size_t i = 0; i < f.values.size(); ++i) acc.add(f.values[i] * g.values[i]);
    return f.grid.cell_volume() * acc.sum();
}

double integrate(const Field& f) {
    KahanAccumulator acc;
    for (double x : f.values) acc.add(x);
    return f.grid.cell_volume() * acc.sum();
}

double max_abs(const Field& f) {
    double m = 0.0;
    for (double x : f.values) {
        double a = std::fabs(x);
        if (a > m) m = a;
    }
    return m;
}

double grad_norm_sq(const Field& f) {
    KahanAccumulator acc;
    for (int axis = 0; axis < f.grid.n; ++axis) acc.add(l2_norm_sq(spectral_derivative(f, axis)));
    return acc.sum();
}

double boundary_tail_mass(const Field& f, double margin_fraction) {
    if (!(margin_fraction > 0.0 && margin_fraction < 0.5))
        throw std::invalid_argument("boundary_tail_mass: margin must be in (0, 0.5)");
    const Grid& g = f.grid;
    const double cut = 0.5 * g.L - margin_fraction * g.L;

    // Per-axis flag: coordinate within margin*L of the torus edge.
    std::vector<char> near_edge(g.N);
    for (std::size_t i = 0; i < g.N; ++i) near_edge[i] = std::fabs(g.coord(i)) > cut ? 1 : 0;

    KahanAccumulator tail, total;
    const std::size_t N = g.N;
    std::size_t idx = 0;
    if (g.n == 1) {
        for (std::size_t i = 0; i < N; ++i, ++idx) {
            double s = f.values[idx] * f.values[idx];
            total.add(s);
            if (near_edge[i]) tail.add(s);
        }
    } else if (g.n == 2) {
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j, ++idx) {
                double s = f.values[idx] * f.values[idx];
                total.add(s);
                if (near_edge[i] || near_edge[j]) tail.add(s);
            }
    } else {
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j)
                for (std::size_t k = 0; k < N; ++k, ++idx) {
                    double s = f.values[idx] * f.values[idx];
                    total.add(s);
                    if (near_edge[i] || near_edge[j] || near_edge[k]) tail.add(s);
                }
    }
    return total.sum() > 0.0 ? tail.sum() / total.sum() : 0.0;
}

namespace {

constexpr char kMagic[4] = {'K', 'G', 'F', '1'};
constexpr std::size_t kHeaderBytes = 32;

}  // namespace

void write_field_binary(const Field& f, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_field_binary: cannot open " + path);

    unsigned char header[kHeaderBytes] = {};
    std::memcpy(header, kMagic, 4);
    std::uint32_t n = static_cast<std::uint32_t>(f.grid.n);
    std::uint32_t N = static_cast<std::uint32_t>(f.grid.N);
    double L = f.grid.L;
    std::memcpy(header + 4, &n, 4);
    std::memcpy(header + 8, &N, 4);
    std::memcpy(header + 12, &L, 8);
    out.write(reinterpret_cast<const char*>(header), kHeaderBytes);
    out.write(reinterpret_cast<const char*>(f.values.data()),
              static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    if (!out) throw std::runtime_error("write_field_binary: write failed for " + path);
}

Field read_field_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_field_binary: cannot open " + path);

    unsigned char header[kHeaderBytes];
    in.read(reinterpret_cast<char*>(header), kHeaderBytes);
    if (!in || std::memcmp(header, kMagic, 4) != 0)
        throw std::runtime_error("read_field_binary: bad magic in " + path);

    std::uint32_t n = 0, N = 0;
    double L = 0.0;
    std::memcpy(&n, header + 4, 4);
    std::memcpy(&N, header + 8, 4);
    std::memcpy(&L, header + 12, 8);

    Grid g(static_cast<int>(n), L, static_cast<std::size_t>(N));
    Field f(g);
    in.read(reinterpret_cast<char*>(f.values.data()),
            static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    if (!in) throw std::runtime_error("read_field_binary: truncated payload in " + path);
    return f;
}

void write_field_csv_1d(const Field& f, const std::string& path) {
    if (f.grid.n != 1) throw std::invalid_argument("write_field_csv_1d: n must be 1");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_field_csv_1d: cannot open " + path);
    out << "x,u\n";
    char buf[64];
    for (std::size_t i = 0; i < f.grid.N; ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", f.grid.coord(i), f.values[i]);
        out << buf;
    }
}

}  // namespace kglab
