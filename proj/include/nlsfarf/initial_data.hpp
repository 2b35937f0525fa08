#pragma once
// Initial data constructors: modulated plane waves, the 1D black soliton
// (periodized by box doubling), and seeded band-limited random fields with
// an energy budget.

#include <cmath>
#include <numbers>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "nlsfarf/energy.hpp"
#include "nlsfarf/field.hpp"
#include "nlsfarf/grid.hpp"
#include "nlsfarf/rng.hpp"
#include "nlsfarf/spectral.hpp"

namespace nlsfarf {

// psi = c (1 + eps cos(k.x)). k must lie on the reciprocal lattice with
// every component below the Nyquist mode, so both +-k are representable.
inline Field init_plane_wave_perturbed(const Grid& grid, cplx c, double eps,
                                       const std::vector<double>& mode_k) {
  if (std::abs(std::abs(c) - 1.0) > 1e-12)
    throw std::invalid_argument("init_plane_wave_perturbed: |c| must be 1");
  if (!(eps > 0.0) || eps > 0.1)
    throw std::invalid_argument(
        "init_plane_wave_perturbed: eps must lie in (0, 0.1]");
  if (mode_k.size() != static_cast<std::size_t>(grid.dim))
    throw std::invalid_argument(
        "init_plane_wave_perturbed: mode_k dimension mismatch");
  std::vector<long> m(grid.dim);
  for (int d = 0; d < grid.dim; ++d) {
    const double unit = 2.0 * std::numbers::pi / grid.extent[d];
    const double md = mode_k[d] / unit;
    m[d] = std::lround(md);
    if (std::abs(mode_k[d] - static_cast<double>(m[d]) * unit) > 1e-9)
      throw std::invalid_argument(
          "init_plane_wave_perturbed: mode_k is not on the reciprocal "
          "lattice");
    const long nyq = static_cast<long>(grid.points[d]) / 2;
    if (std::labs(m[d]) > nyq - 1)
      throw std::invalid_argument(
          "init_plane_wave_perturbed: mode_k exceeds the representable band");
  }
  Field f;
  f.grid = grid;
  f.farfield = c;
  f.values.resize(grid.size());
  std::vector<std::size_t> idx(grid.dim, 0);
  for (std::size_t flat = 0; flat < grid.size(); ++flat) {
    grid.unflatten(flat, idx);
    double phase = 0.0;
    for (int d = 0; d < grid.dim; ++d)
      phase += mode_k[d] * grid.coordinate(d, idx[d]);
    f.values[flat] = c * (1.0 + eps * std::cos(phase));
  }
  validate_field(f);
  return f;
}

// Black soliton tanh(x - x0) periodized by doubling the box: the returned
// field lives on [0, 2L) with the kink/antikink pair
//   psi(x) = tanh(x - L/2) tanh(x - 3L/2),
// zero at both half-box centers and smooth-periodic up to O(e^{-L}) terms.
// Extensive diagnostics of the single soliton are the doubled-box totals
// divided by two. The extent floor keeps the pairing residual below 1e-12.
inline Field init_black_soliton_1d(const Grid& grid) {
  if (grid.dim != 1)
    throw std::invalid_argument("init_black_soliton_1d: grid must be 1D");
  const double L = grid.extent[0];
  if (!(L >= 30.0))
    throw std::invalid_argument(
        "init_black_soliton_1d: extent must be >= 30 so the periodized "
        "profile is stationary to roundoff");
  Field f;
  f.grid = make_grid(1, {2.0 * L}, {2 * grid.points[0]});
  f.farfield = cplx{1.0, 0.0};
  f.values.resize(f.grid.size());
  for (std::size_t j = 0; j < f.grid.size(); ++j) {
    const double x = f.grid.coordinate(0, j);
    f.values[j] = std::tanh(x - 0.5 * L) * std::tanh(x - 1.5 * L);
  }
  validate_field(f);
  return f;
}

// c + s v with v a band-limited complex Gaussian field (top third of
// wavenumbers empty, zero mean) and s the largest scale, found by bracketed
// bisection, with E(c + s v) <= energy_budget. Spectral coefficients are
// drawn in ascending flat-index order from a fixed generator, so the result
// is a pure function of (grid, c, energy_budget, seed).
inline Field init_random_bounded(const Grid& grid, cplx c,
                                 double energy_budget, std::uint64_t seed) {
  if (std::abs(std::abs(c) - 1.0) > 1e-12)
    throw std::invalid_argument("init_random_bounded: |c| must be 1");
  if (!(energy_budget > 0.0))
    throw std::invalid_argument(
        "init_random_bounded: energy_budget must be positive");
  SpectralWorkspace ws(grid);
  const std::vector<unsigned char>& keep = ws.dealias_mask();

  // Band edges per axis (the first zeroed mode), used to taper the spectrum
  // so the field is smooth rather than white inside the band.
  std::vector<double> kband(grid.dim);
  for (int d = 0; d < grid.dim; ++d)
    kband[d] = 2.0 * std::numbers::pi / grid.extent[d] *
               (static_cast<double>(grid.points[d]) / 3.0);

  Rng rng(seed);
  std::vector<cplx> spec(grid.size(), cplx{0.0, 0.0});
  std::vector<std::size_t> idx(grid.dim, 0);
  for (std::size_t flat = 0; flat < grid.size(); ++flat) {
    if (!keep[flat] || flat == 0) continue;
    grid.unflatten(flat, idx);
    double decay = 0.0;
    for (int d = 0; d < grid.dim; ++d) {
      const double r = grid.wavenumber(d, idx[d]) / kband[d];
      decay += 2.0 * r * r;
    }
    const double amp = std::exp(-decay);
    const double re = rng.gaussian();
    const double im = rng.gaussian();
    spec[flat] = amp * cplx{re, im};
  }
  std::vector<cplx> v = spec;
  ws.backward(v.data());

  Field f;
  f.grid = grid;
  f.farfield = c;
  f.values.resize(grid.size());
  const auto energy_at = [&](double s) {
    for (std::size_t j = 0; j < grid.size(); ++j)
      f.values[j] = c + s * v[j];
    return energy_E(f, ws);
  };

  // Bracket the budget from below, then bisect keeping the feasible end.
  // E(0) = 0 < budget guarantees a feasible scale exists.
  double lo = 0.0, hi = 1.0;
  int doublings = 0;
  while (energy_at(hi) <= energy_budget && doublings < 60) {
    lo = hi;
    hi *= 2.0;
    ++doublings;
  }
  if (doublings < 60) {
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (energy_at(mid) <= energy_budget)
        lo = mid;
      else
        hi = mid;
    }
  } else {
    lo = hi;  // even the huge scale fits the budget; keep it
  }
  energy_at(lo);
  validate_field(f);
  return f;
}

}  // namespace nlsfarf
