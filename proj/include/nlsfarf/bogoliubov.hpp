#pragma once
// Linearized plane-wave stability. Writing psi = (1 + u) e^{-i f(1) t} and
// keeping terms linear in u couples the +k and -k sidebands through the
// 2x2 symbol with eigenvalues lambda^2 = (|k|^2/2)(|k|^2/2 + 2 f'(1)).
// A mode grows when lambda^2 < 0, i.e. for f'(1) < 0 on |k|^2 < -4 f'(1),
// at rate sigma(k) = sqrt(-(|k|^2/2)(|k|^2/2 + 2 f'(1))).

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlsfarf/nonlinearity.hpp"
#include "nlsfarf/solver.hpp"
#include "nlsfarf/spectral.hpp"

namespace nlsfarf {

struct BogoliubovReport {
  std::vector<double> k_values;        // |k| magnitudes
  std::vector<double> predicted_rate;  // sigma(|k|)
  std::vector<double> measured_rate;   // NaN until filled by a simulation
  double band_lo = 0.0;                // unstable |k| interval, empty if ==
  double band_hi = 0.0;
};

inline double bogoliubov_sigma(double fprime1, double k_abs) {
  const double half_k2 = 0.5 * k_abs * k_abs;
  const double lambda2 = half_k2 * (half_k2 + 2.0 * fprime1);
  return lambda2 < 0.0 ? std::sqrt(-lambda2) : 0.0;
}

inline BogoliubovReport bogoliubov_analyze(const NonlinearitySpec& spec,
                                           const std::vector<double>& k_grid) {
  const double fp = eval_f_prime(spec, 1.0);
  BogoliubovReport rep;
  rep.k_values = k_grid;
  rep.predicted_rate.reserve(k_grid.size());
  rep.measured_rate.assign(k_grid.size(),
                           std::numeric_limits<double>::quiet_NaN());
  for (double k : k_grid) rep.predicted_rate.push_back(bogoliubov_sigma(fp, k));
  if (fp < 0.0) {
    rep.band_lo = 0.0;
    rep.band_hi = 2.0 * std::sqrt(-fp);
  }
  return rep;
}

struct ModeGrowthFit {
  double rate = 0.0;
  double r_squared = 0.0;
  bool ok = false;
  bool truncated = false;  // the 5% saturation cutoff ended the window early
  std::size_t points_used = 0;
  std::string note;
};

// Least-squares fit of log |v_hat(k)| against t over the linear-growth
// window of a trajectory recorded with keep_snapshots. The window drops
// saturated samples (mode amplitude above 5% of the unit background) and,
// when net growth of at least 10x is seen, drops leading samples still
// contaminated by the decaying sideband branch.
inline ModeGrowthFit measure_mode_growth(const Trajectory& traj,
                                         const std::vector<double>& mode_k) {
  if (traj.snapshots.size() < 5)
    throw std::invalid_argument(
        "measure_mode_growth: need at least 5 snapshots");
  if (traj.snapshots.size() != traj.times.size())
    throw std::invalid_argument(
        "measure_mode_growth: snapshot/time count mismatch");
  const Grid& grid = traj.snapshots.front().grid;
  if (mode_k.size() != static_cast<std::size_t>(grid.dim))
    throw std::invalid_argument("measure_mode_growth: mode_k dim mismatch");

  // Locate the requested mode's flat spectral index.
  std::vector<std::size_t> idx(grid.dim);
  for (int d = 0; d < grid.dim; ++d) {
    const double unit = 2.0 * std::numbers::pi / grid.extent[d];
    const long m = std::lround(mode_k[d] / unit);
    if (std::abs(mode_k[d] - static_cast<double>(m) * unit) > 1e-9)
      throw std::invalid_argument(
          "measure_mode_growth: mode_k is not on the reciprocal lattice");
    const long N = static_cast<long>(grid.points[d]);
    if (std::labs(m) > N / 2 - 1)
      throw std::invalid_argument(
          "measure_mode_growth: mode_k exceeds the representable band");
    idx[static_cast<std::size_t>(d)] =
        static_cast<std::size_t>(m >= 0 ? m : m + N);
  }
  const std::size_t flat = grid.flatten(idx);

  SpectralWorkspace ws(grid);
  std::vector<double> t, loga;
  bool truncated = false;
  for (std::size_t s = 0; s < traj.snapshots.size(); ++s) {
    std::vector<cplx> spec = spectrum_of_affine(traj.snapshots[s], ws);
    const double a = std::abs(spec[flat]);
    if (a > 0.05) {  // saturated relative to the unit background
      truncated = true;
      break;
    }
    t.push_back(traj.times[s]);
    loga.push_back(std::log(std::max(a, 1e-300)));
  }

  ModeGrowthFit fit;
  fit.truncated = truncated;
  if (t.size() < 5) {
    fit.note = "mode saturated before a fit window formed";
    return fit;
  }
  const double a_first = std::exp(loga.front());
  double a_max = 0.0;
  for (double l : loga) a_max = std::max(a_max, std::exp(l));
  std::size_t begin = 0;
  if (a_max >= 10.0 * a_first) {
    while (begin < loga.size() && std::exp(loga[begin]) < 10.0 * a_first)
      ++begin;
    if (loga.size() - begin < 5) begin = loga.size() - 5;
  }

  const std::size_t n = loga.size() - begin;
  double st = 0.0, sy = 0.0;
  for (std::size_t i = begin; i < loga.size(); ++i) {
    st += t[i];
    sy += loga[i];
  }
  const double mt = st / static_cast<double>(n);
  const double my = sy / static_cast<double>(n);
  double stt = 0.0, sty = 0.0, syy = 0.0;
  for (std::size_t i = begin; i < loga.size(); ++i) {
    const double dt = t[i] - mt;
    const double dy = loga[i] - my;
    stt += dt * dt;
    sty += dt * dy;
    syy += dy * dy;
  }
  if (stt == 0.0) {
    fit.note = "degenerate time window";
    return fit;
  }
  fit.rate = sty / stt;
  const double ss_res = syy - sty * sty / stt;
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  fit.points_used = n;
  fit.ok = true;
  return fit;
}

}  // namespace nlsfarf
