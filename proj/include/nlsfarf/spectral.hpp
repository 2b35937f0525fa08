#pragma once
// FFT-based spectral operators on the periodic lattice, built on FFTW3.
// Conventions, fixed once for the whole project:
//   forward(v)[k]  = (1/prod N) * sum_x v(x) e^{-i k.x}   (normalized analysis)
//   backward(c)(x) =             sum_k c_k  e^{+i k.x}    (plain synthesis)
// so backward(forward(v)) = v, and Parseval reads
//   integral |v|^2 dx = V * sum_k |c_k|^2.
// All operators act on the affine part v = psi - c; the far-field constant
// lives in the zero mode and is annihilated by every |xi|^2 multiplier, so
// constants are preserved exactly.
//
// FFTW's planner is not thread-safe: plan creation and destruction are
// serialized through one global mutex. Executing a plan only touches the
// workspace's private buffer, so the rule is one workspace per thread;
// a workspace must never run two transforms concurrently.

#include <fftw3.h>

#include <climits>
#include <complex>
#include <cstring>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "nlsfarf/field.hpp"
#include "nlsfarf/grid.hpp"

namespace nlsfarf {

inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

class SpectralWorkspace {
 public:
  explicit SpectralWorkspace(const Grid& grid) : grid_(grid), n_(grid.size()) {
    std::vector<int> dims;
    for (std::size_t p : grid.points) {
      if (p > static_cast<std::size_t>(INT_MAX))
        throw std::invalid_argument("workspace: axis too large for transform");
      dims.push_back(static_cast<int>(p));
    }
    buf_ = static_cast<fftw_complex*>(
        fftw_malloc(sizeof(fftw_complex) * n_));
    if (buf_ == nullptr) throw std::bad_alloc();
    {
      // FFTW_ESTIMATE picks the plan deterministically and leaves the buffer
      // untouched; FFTW_MEASURE would trade that reproducibility for speed.
      std::lock_guard<std::mutex> lock(fftw_planner_mutex());
      fwd_ = fftw_plan_dft(grid.dim, dims.data(), buf_, buf_, FFTW_FORWARD,
                           FFTW_ESTIMATE);
      bwd_ = fftw_plan_dft(grid.dim, dims.data(), buf_, buf_, FFTW_BACKWARD,
                           FFTW_ESTIMATE);
    }
    if (fwd_ == nullptr || bwd_ == nullptr)
      throw std::runtime_error("workspace: transform planning failed");

    k2_.resize(n_);
    dealias_keep_.resize(n_);
    std::vector<std::size_t> idx;
    for (std::size_t flat = 0; flat < n_; ++flat) {
      grid.unflatten(flat, idx);
      double k2 = 0.0;
      bool keep = true;
      for (int a = 0; a < grid.dim; ++a) {
        const double w = grid.wavenumber(a, idx[static_cast<std::size_t>(a)]);
        k2 += w * w;
        const long long m = grid.mode_index(a, idx[static_cast<std::size_t>(a)]);
        const long long n_axis =
            static_cast<long long>(grid.points[static_cast<std::size_t>(a)]);
        if (3 * (m < 0 ? -m : m) >= n_axis) keep = false;  // 2/3 rule
      }
      k2_[flat] = k2;
      dealias_keep_[flat] = keep ? 1 : 0;
    }
  }

  ~SpectralWorkspace() {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    if (fwd_ != nullptr) fftw_destroy_plan(fwd_);
    if (bwd_ != nullptr) fftw_destroy_plan(bwd_);
    if (buf_ != nullptr) fftw_free(buf_);
  }

  SpectralWorkspace(const SpectralWorkspace&) = delete;
  SpectralWorkspace& operator=(const SpectralWorkspace&) = delete;

  const Grid& grid() const { return grid_; }
  // |xi|^2 per flattened lattice index; zero exactly at the zero mode.
  const std::vector<double>& k2() const { return k2_; }
  // 1 where the mode survives the 2/3 rule on every axis, else 0.
  const std::vector<unsigned char>& dealias_mask() const {
    return dealias_keep_;
  }

  // dst[k] = normalized Fourier coefficient of src.
  void forward(const std::vector<cplx>& src, std::vector<cplx>& dst) {
    check_size(src);
    load(src);
    fftw_execute(fwd_);
    dst.resize(n_);
    const double scale = 1.0 / static_cast<double>(n_);
    for (std::size_t i = 0; i < n_; ++i)
      dst[i] = cplx(buf_[i][0] * scale, buf_[i][1] * scale);
  }

  // dst(x) = sum_k src_k e^{i k.x}.
  void backward(const std::vector<cplx>& src, std::vector<cplx>& dst) {
    check_size(src);
    load(src);
    fftw_execute(bwd_);
    dst.resize(n_);
    for (std::size_t i = 0; i < n_; ++i)
      dst[i] = cplx(buf_[i][0], buf_[i][1]);
  }

  // In-place variants over a raw array of grid.size() entries. The data is
  // staged through the private buffer, so results match the two-argument
  // forms bit for bit.
  void forward(cplx* data) {
    std::memcpy(buf_, data, sizeof(cplx) * n_);
    fftw_execute(fwd_);
    const double scale = 1.0 / static_cast<double>(n_);
    for (std::size_t i = 0; i < n_; ++i)
      data[i] = cplx(buf_[i][0] * scale, buf_[i][1] * scale);
  }

  void backward(cplx* data) {
    std::memcpy(buf_, data, sizeof(cplx) * n_);
    fftw_execute(bwd_);
    for (std::size_t i = 0; i < n_; ++i)
      data[i] = cplx(buf_[i][0], buf_[i][1]);
  }

 private:
  void check_size(const std::vector<cplx>& v) const {
    if (v.size() != n_)
      throw std::invalid_argument("workspace: array size does not match grid");
  }
  void load(const std::vector<cplx>& src) {
    static_assert(sizeof(cplx) == sizeof(fftw_complex));
    std::memcpy(buf_, src.data(), sizeof(cplx) * n_);
  }

  Grid grid_;
  std::size_t n_;
  fftw_complex* buf_ = nullptr;
  fftw_plan fwd_ = nullptr;
  fftw_plan bwd_ = nullptr;
  std::vector<double> k2_;
  std::vector<unsigned char> dealias_keep_;
};

// Normalized spectrum of the affine part v = psi - c.
inline std::vector<cplx> spectrum_of_affine(const Field& f,
                                            SpectralWorkspace& ws) {
  std::vector<cplx> v(f.values.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f.values[i] - f.farfield;
  std::vector<cplx> spec;
  ws.forward(v, spec);
  return spec;
}

// Laplacian of psi, computed as synthesis of -|xi|^2 * spectrum(psi - c).
// The result is a plain complex array (its far-field limit is 0, not a
// unit constant, so it is not itself a Field).
inline std::vector<cplx> laplacian(const Field& f, SpectralWorkspace& ws) {
  if (!(f.grid == ws.grid()))
    throw std::invalid_argument("laplacian: field grid does not match workspace");
  std::vector<cplx> spec = spectrum_of_affine(f, ws);
  const std::vector<double>& k2 = ws.k2();
  for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= -k2[i];
  std::vector<cplx> out;
  ws.backward(spec, out);
  return out;
}

// integral |grad psi|^2 dx via Parseval: V * sum_k |xi|^2 |c_k|^2.
inline double grad_norm_sq_integral(const Field& f, SpectralWorkspace& ws) {
  if (!(f.grid == ws.grid()))
    throw std::invalid_argument(
        "grad_norm_sq_integral: field grid does not match workspace");
  // The constant far-field sits in the zero mode where |xi|^2 = 0, so the
  // raw values can be transformed directly.
  std::vector<cplx> spec;
  ws.forward(f.values, spec);
  const std::vector<double>& k2 = ws.k2();
  double s = 0.0;
  for (std::size_t i = 0; i < spec.size(); ++i) s += k2[i] * std::norm(spec[i]);
  return s * f.grid.volume();
}

// Partial derivative along one axis, synthesized from i*k_a * spectrum.
inline std::vector<cplx> spectral_derivative(const std::vector<cplx>& values,
                                             int axis, SpectralWorkspace& ws) {
  std::vector<cplx> spec;
  ws.forward(values, spec);
  const Grid& g = ws.grid();
  std::vector<std::size_t> idx;
  for (std::size_t flat = 0; flat < spec.size(); ++flat) {
    g.unflatten(flat, idx);
    const double k = g.wavenumber(axis, idx[static_cast<std::size_t>(axis)]);
    spec[flat] *= cplx(0.0, k);
  }
  std::vector<cplx> out;
  ws.backward(spec, out);
  return out;
}

// Exact spectral upsampling by an integer factor per axis: coefficients are
// copied into the matching signed modes of the finer lattice and the rest
// are zero. Band-limited fields are reproduced exactly at the new sites.
inline Field upsample_field(const Field& f, int factor) {
  if (factor < 1) throw std::invalid_argument("upsample_field: factor >= 1");
  if (factor == 1) return f;
  const Grid& g = f.grid;
  std::vector<std::size_t> fine_points;
  for (std::size_t p : g.points)
    fine_points.push_back(p * static_cast<std::size_t>(factor));
  Grid fine = make_grid(g.dim, g.extent, fine_points);

  SpectralWorkspace coarse_ws(g);
  SpectralWorkspace fine_ws(fine);
  std::vector<cplx> spec = spectrum_of_affine(f, coarse_ws);

  std::vector<cplx> fine_spec(fine.size(), cplx{0.0, 0.0});
  std::vector<std::size_t> idx, fidx(static_cast<std::size_t>(g.dim));
  for (std::size_t flat = 0; flat < spec.size(); ++flat) {
    g.unflatten(flat, idx);
    for (int a = 0; a < g.dim; ++a) {
      const long long m = g.mode_index(a, idx[static_cast<std::size_t>(a)]);
      const long long nf =
          static_cast<long long>(fine.points[static_cast<std::size_t>(a)]);
      fidx[static_cast<std::size_t>(a)] =
          static_cast<std::size_t>(m >= 0 ? m : m + nf);
    }
    fine_spec[fine.flatten(fidx)] = spec[flat];
  }
  std::vector<cplx> fine_values;
  fine_ws.backward(fine_spec, fine_values);
  Field out;
  out.grid = fine;
  out.farfield = f.farfield;
  out.values = std::move(fine_values);
  for (cplx& z : out.values) z += f.farfield;
  return out;
}

}  // namespace nlsfarf
