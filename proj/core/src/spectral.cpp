#include "kglab/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace kglab {

namespace {

// FFTW's planner is not thread-safe; execution of distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

struct SpectralWorkspace::Impl {
    double* real = nullptr;
    fftw_complex* cplx = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    std::size_t real_size = 0;

    ~Impl() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
        if (real) fftw_free(real);
        if (cplx) fftw_free(cplx);
    }
};

SpectralWorkspace::SpectralWorkspace(const Grid& g) : grid_(g) {
    g.validate();
    const int n = g.n;
    const std::size_t N = g.N;
    const std::size_t half = N / 2 + 1;

    spec_size_ = half;
    for (int a = 0; a < n - 1; ++a) spec_size_ *= N;

    impl_ = std::make_unique<Impl>();
    impl_->real_size = g.total_points();
    impl_->real = fftw_alloc_real(impl_->real_size);
    impl_->cplx = fftw_alloc_complex(spec_size_);
    if (!impl_->real || !impl_->cplx) throw std::bad_alloc();

    int dims[3] = {static_cast<int>(N), static_cast<int>(N), static_cast<int>(N)};
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        impl_->fwd = fftw_plan_dft_r2c(n, dims, impl_->real, impl_->cplx, FFTW_ESTIMATE);
        impl_->bwd = fftw_plan_dft_c2r(n, dims, impl_->cplx, impl_->real, FFTW_ESTIMATE);
    }
    if (!impl_->fwd || !impl_->bwd) throw std::runtime_error("SpectralWorkspace: FFTW planning failed");

    // Per-bin symbols. Bin order is row-major (j0, j1, jc) with the last axis
    // halved: jc in [0, N/2].
    k_squared_.assign(spec_size_, 0.0);
    for (int a = 0; a < 3; ++a) k_axis_[a].assign(a < n ? spec_size_ : 0, 0.0);

    const std::size_t n0 = n >= 3 ? N : 1;
    const std::size_t n1 = n >= 2 ? N : 1;
    std::size_t bin = 0;
    for (std::size_t j0 = 0; j0 < n0; ++j0) {
        for (std::size_t j1 = 0; j1 < n1; ++j1) {
            for (std::size_t jc = 0; jc < half; ++jc, ++bin) {
                // Map storage axes to logical axes 0..n-1 (slowest first).
                double k[3] = {0.0, 0.0, 0.0};
                bool nyq[3] = {false, false, false};
                if (n == 1) {
                    k[0] = g.wavenumber(jc);
                    nyq[0] = jc == N / 2;
                } else if (n == 2) {
                    k[0] = g.wavenumber(j1);
                    nyq[0] = j1 == N / 2;
                    k[1] = g.wavenumber(jc);
                    nyq[1] = jc == N / 2;
                } else {
                    k[0] = g.wavenumber(j0);
                    nyq[0] = j0 == N / 2;
                    k[1] = g.wavenumber(j1);
                    nyq[1] = j1 == N / 2;
                    k[2] = g.wavenumber(jc);
                    nyq[2] = jc == N / 2;
                }
                double ks = 0.0;
                for (int a = 0; a < n; ++a) {
                    ks += k[a] * k[a];
                    k_axis_[a][bin] = nyq[a] ? 0.0 : k[a];
                }
                k_squared_[bin] = ks;
            }
        }
    }
}

SpectralWorkspace::~SpectralWorkspace() = default;

void SpectralWorkspace::to_spectral(std::span<const double> phys, std::complex<double>* spec) {
    if (phys.size() != impl_->real_size) throw std::invalid_argument("to_spectral: size mismatch");
    std::memcpy(impl_->real, phys.data(), phys.size() * sizeof(double));
    fftw_execute(impl_->fwd);
    const double scale = 1.0 / static_cast<double>(impl_->real_size);
    for (std::size_t i = 0; i < spec_size_; ++i)
        spec[i] = std::complex<double>(impl_->cplx[i][0] * scale, impl_->cplx[i][1] * scale);
}

void SpectralWorkspace::to_physical(std::span<const std::complex<double>> spec, double* phys) {
    if (spec.size() != spec_size_) throw std::invalid_argument("to_physical: size mismatch");
    for (std::size_t i = 0; i < spec_size_; ++i) {
        impl_->cplx[i][0] = spec[i].real();
        impl_->cplx[i][1] = spec[i].imag();
    }
    fftw_execute(impl_->bwd);
    std::memcpy(phys, impl_->real, impl_->real_size * sizeof(double));
}

Field SpectralWorkspace::derivative(const Field& f, int axis) {
    if (!(f.grid == grid_)) throw std::invalid_argument("derivative: field on different grid");
    if (axis < 0 || axis >= grid_.n) throw std::invalid_argument("derivative: bad axis");

    std::vector<std::complex<double>> spec(spec_size_);
    to_spectral(f.values, spec.data());
    const std::vector<double>& k = k_axis_[axis];
    for (std::size_t i = 0; i < spec_size_; ++i)
        spec[i] = std::complex<double>(-k[i] * spec[i].imag(), k[i] * spec[i].real());

    Field out(grid_);
    to_physical(spec, out.values.data());
    return out;
}

Field SpectralWorkspace::laplacian(const Field& f) {
    if (!(f.grid == grid_)) throw std::invalid_argument("laplacian: field on different grid");
    std::vector<std::complex<double>> spec(spec_size_);
    to_spectral(f.values, spec.data());
    for (std::size_t i = 0; i < spec_size_; ++i) spec[i] *= -k_squared_[i];

    Field out(grid_);
    to_physical(spec, out.values.data());
    return out;
}

void SpectralWorkspace::ensure_padded() {
    if (padded_) return;
    std::size_t M = (3 * grid_.N) / 2;
    if (M % 2 != 0) ++M;
    padded_ = std::make_unique<SpectralWorkspace>(Grid(grid_.n, grid_.L, M));
}

Field SpectralWorkspace::dealiased_apply(const Field& u, const std::function<double(double)>& fn) {
    if (!(u.grid == grid_)) throw std::invalid_argument("dealiased_apply: field on different grid");
    ensure_padded();
    SpectralWorkspace& pad = *padded_;

    const std::size_t N = grid_.N;
    const std::size_t M = pad.grid_.N;
    const std::size_t half = N / 2 + 1;
    const std::size_t halfM = M / 2 + 1;
    const int n = grid_.n;

    std::vector<std::complex<double>> spec(spec_size_);
    to_spectral(u.values, spec.data());

    // Embed into the padded layout; Nyquist bins of the source are dropped
    // (they cannot be represented one-sidedly on the fine grid).
    std::vector<std::complex<double>> pspec(pad.spec_size_, std::complex<double>(0.0, 0.0));
    const std::size_t n0 = n >= 3 ? N : 1;
    const std::size_t n1 = n >= 2 ? N : 1;
    auto embed_index = [&](std::size_t j) -> std::size_t {
        long m = grid_.mode_index(j);
        return m >= 0 ? static_cast<std::size_t>(m) : static_cast<std::size_t>(m + static_cast<long>(M));
    };
    std::size_t bin = 0;
    for (std::size_t j0 = 0; j0 < n0; ++j0) {
        for (std::size_t j1 = 0; j1 < n1; ++j1) {
            for (std::size_t jc = 0; jc < half; ++jc, ++bin) {
                bool drop = jc == N / 2;
                std::size_t t0 = 0, t1 = 0;
                if (n >= 2) {
                    if (n == 3) {
                        if (j0 == N / 2) drop = true;
                        t0 = embed_index(j0);
                    }
                    if (j1 == N / 2) drop = true;
                    t1 = embed_index(j1);
                }
                if (drop) continue;
                std::size_t target = (t0 * (n >= 2 ? M : 1) + t1) * halfM + jc;
                if (n == 1) target = jc;
                pspec[target] = spec[bin];
            }
        }
    }

    std::vector<double> fine(pad.impl_->real_size);
    pad.to_physical(pspec, fine.data());
    for (double& x : fine) x = fn(x);
    pad.to_spectral(fine, pspec.data());

    // Truncate back, zeroing everything at or above the old Nyquist.
    std::fill(spec.begin(), spec.end(), std::complex<double>(0.0, 0.0));
    bin = 0;
    for (std::size_t j0 = 0; j0 < n0; ++j0) {
        for (std::size_t j1 = 0; j1 < n1; ++j1) {
            for (std::size_t jc = 0; jc < half; ++jc, ++bin) {
                bool drop = jc == N / 2;
                std::size_t t0 = 0, t1 = 0;
                if (n >= 2) {
                    if (n == 3) {
                        if (j0 == N / 2) drop = true;
                        t0 = embed_index(j0);
                    }
                    if (j1 == N / 2) drop = true;
                    t1 = embed_index(j1);
                }
                if (drop) continue;
                std::size_t source = (t0 * (n >= 2 ? M : 1) + t1) * halfM + jc;
                if (n == 1) source = jc;
                spec[bin] = pspec[source];
            }
        }
    }

    Field out(grid_);
    to_physical(spec, out.values.data());
    return out;
}

namespace {

// Per-thread workspace cache so concurrent runs never contend on execution.
struct WorkspaceCache {
    std::map<std::tuple<int, double, std::size_t>, std::unique_ptr<SpectralWorkspace>> map;

    SpectralWorkspace& get(const Grid& g) {
        auto key = std::make_tuple(g.n, g.L, g.N);
        auto it = map.find(key);
        if (it == map.end())
            it = map.emplace(key, std::make_unique<SpectralWorkspace>(g)).first;
        return *it->second;
    }
};

WorkspaceCache& thread_cache() {
    thread_local WorkspaceCache cache;
    return cache;
}

}  // namespace

Field spectral_derivative(const Field& f, int axis) { return thread_cache().get(f.grid).derivative(f, axis); }

Field spectral_laplacian(const Field& f) { return thread_cache().get(f.grid).laplacian(f); }

double l2_norm_sq_spectral(const Field& f) {
    SpectralWorkspace& ws = thread_cache().get(f.grid);
    std::vector<std::complex<double>> spec(ws.spectral_size());
    ws.to_spectral(f.values, spec.data());

    const Grid& g = f.grid;
    const std::size_t N = g.N;
    const std::size_t half = N / 2 + 1;
    const std::size_t n0 = g.n >= 3 ? N : 1;
    const std::size_t n1 = g.n >= 2 ? N : 1;
    double volume = 1.0;
    for (int a = 0; a < g.n; ++a) volume *= g.L;

    // r2c stores only jc <= N/2; interior bins stand for a conjugate pair.
    KahanAccumulator acc;
    std::size_t bin = 0;
    for (std::size_t j0 = 0; j0 < n0; ++j0)
        for (std::size_t j1 = 0; j1 < n1; ++j1)
            for (std::size_t jc = 0; jc < half; ++jc, ++bin) {
                double w = (jc == 0 || jc == N / 2) ? 1.0 : 2.0;
                acc.add(w * std::norm(spec[bin]));
            }
    return volume * acc.sum();
}

}  // namespace kglab
