#pragma once

#include "kglab/field.hpp"
#include "kglab/grid.hpp"

#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace kglab {

/// FFT workspace bound to one grid: owns FFTW plans and scratch buffers.
/// Forward transforms are normalized (coefficients are Fourier-series
/// coefficients of the trigonometric interpolant), so to_physical is the
/// plain synthesis sum. Not thread-safe; use one workspace per thread.
class SpectralWorkspace {
  public:
    explicit SpectralWorkspace(const Grid& g);
    ~SpectralWorkspace();

    SpectralWorkspace(const SpectralWorkspace&) = delete;
    SpectralWorkspace& operator=(const SpectralWorkspace&) = delete;

    const Grid& grid() const { return grid_; }

    /// Number of complex bins of the r2c layout: N^(n-1) * (N/2 + 1).
    std::size_t spectral_size() const { return spec_size_; }

    void to_spectral(std::span<const double> phys, std::complex<double>* spec);
    void to_physical(std::span<const std::complex<double>> spec, double* phys);

    /// |k|^2 per complex bin (full symbol, Nyquist included).
    const std::vector<double>& k_squared() const { return k_squared_; }

    /// Angular wavenumber along `axis` per complex bin, with the Nyquist mode
    /// zeroed (odd-derivative convention for real data).
    const std::vector<double>& k_axis(int axis) const { return k_axis_[axis]; }

    Field derivative(const Field& f, int axis);
    Field laplacian(const Field& f);

    /// Pointwise evaluation of fn(u) with 2/3-rule dealiasing: the spectrum is
    /// zero-padded by 3/2 per axis, fn is applied on the fine grid, and the
    /// result is truncated back. Exact for quadratic products, strongly damps
    /// aliasing for higher powers.
    Field dealiased_apply(const Field& u, const std::function<double(double)>& fn);

  private:
    struct Impl;
    Grid grid_;
    std::size_t spec_size_ = 0;
    std::vector<double> k_squared_;
    std::vector<double> k_axis_[3];
    std::unique_ptr<Impl> impl_;
    std::unique_ptr<SpectralWorkspace> padded_;  // lazy, for dealiased_apply

    void ensure_padded();
};

// Conveniences backed by a process-wide workspace cache (mutex-guarded).
Field spectral_derivative(const Field& f, int axis);
Field spectral_laplacian(const Field& f);

/// Spectral-space l2 norm: sum over modes of |coef|^2 times the torus volume.
/// Equals l2_norm_sq by Parseval; exposed for the cross-check.
double l2_norm_sq_spectral(const Field& f);

}  // namespace kglab
