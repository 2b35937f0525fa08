#pragma once
// Scenario suite: desk-scale, falsifiable checks of the qualitative theory
// (conservation, soliton stationarity, modulational dichotomy, metric
// equivalence, coercivity, Gronwall growth of M, small-data boundedness,
// and Duhamel/Picard vs split-step consistency). Every scenario is a pure
// function of its inputs, ships a negative control so a vacuous pass is
// impossible, and writes <name>.csv plus <name>.verdict into the output
// directory. All verdicts carry the finite-box surrogate disclaimer.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nlsfarf/bogoliubov.hpp"
#include "nlsfarf/energy.hpp"
#include "nlsfarf/field.hpp"
#include "nlsfarf/grid.hpp"
#include "nlsfarf/initial_data.hpp"
#include "nlsfarf/metrics.hpp"
#include "nlsfarf/nonlinearity.hpp"
#include "nlsfarf/parallel.hpp"
#include "nlsfarf/potential_analysis.hpp"
#include "nlsfarf/rng.hpp"
#include "nlsfarf/solver.hpp"
#include "nlsfarf/spectral.hpp"

namespace nlsfarf {

struct ScenarioResult {
  std::string name;
  bool passed = false;
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<std::string> notes;
  std::vector<std::string> artifacts;
};

namespace detail {

inline const char* kSurrogateNote =
    "finite-horizon, finite-box lattice run: pass/fail is a surrogate for "
    "the continuum statement, not a proof";

inline void add_metric(ScenarioResult& r, const std::string& key, double v) {
  r.metrics.emplace_back(key, v);
}

inline void write_scenario_files(ScenarioResult& r, const std::string& outdir,
                                 const std::string& csv) {
  namespace fs = std::filesystem;
  fs::create_directories(outdir);
  const std::string csv_path = outdir + "/" + r.name + ".csv";
  const std::string verdict_path = outdir + "/" + r.name + ".verdict";
  {
    std::ofstream os(csv_path, std::ios::trunc);
    os << csv;
  }
  {
    std::ofstream os(verdict_path, std::ios::trunc);
    os.precision(17);
    os << "name = " << r.name << "\n";
    os << "passed = " << (r.passed ? "true" : "false") << "\n";
    os << "note = " << kSurrogateNote << "\n";
    for (const std::string& n : r.notes) os << "note = " << n << "\n";
    for (const auto& [k, v] : r.metrics) os << "metric." << k << " = " << v
                                            << "\n";
    os << "artifact = " << r.name << ".csv\n";
  }
  r.artifacts = {csv_path, verdict_path};
}

// Least-squares slope of y against x.
inline double lsq_slope(const std::vector<double>& x,
                        const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return sxy / sxx;
}

// Smooth periodic bump: psi = c + amp * prod_d ((1 + cos(2 pi (x_d - L_d/2)
// / L_d)) / 2)^p, exactly periodic, peaked at the box center.
inline Field bump_field(const Grid& grid, cplx c, double amp, int p) {
  Field f;
  f.grid = grid;
  f.farfield = c;
  f.values.resize(grid.size());
  std::vector<std::size_t> idx(grid.dim, 0);
  for (std::size_t flat = 0; flat < grid.size(); ++flat) {
    grid.unflatten(flat, idx);
    double b = 1.0;
    for (int d = 0; d < grid.dim; ++d) {
      const double x = grid.coordinate(d, idx[d]);
      const double L = grid.extent[d];
      const double cosf =
          0.5 * (1.0 + std::cos(2.0 * std::numbers::pi * (x - 0.5 * L) / L));
      double cp = 1.0;
      for (int q = 0; q < p; ++q) cp *= cosf;
      b *= cp;
    }
    f.values[flat] = c + amp * b;
  }
  validate_field(f);
  return f;
}

inline double rel_l2(const Field& a, const Field& b) {
  double d2 = 0.0, n2 = 0.0;
  for (std::size_t j = 0; j < a.values.size(); ++j) {
    d2 += std::norm(a.values[j] - b.values[j]);
    n2 += std::norm(b.values[j]);
  }
  return std::sqrt(d2 / n2);
}

}  // namespace detail

// --------------------------------------------------------------------------
// Hamiltonian conservation with a dt-halving ladder.
inline ScenarioResult exp_conservation(const NonlinearitySpec& spec,
                                       const Grid& grid, std::uint64_t seed,
                                       const std::string& outdir = ".") {
  if (!(eval_f_prime(spec, 1.0) > 0.0))
    throw std::invalid_argument(
        "exp_conservation: needs a defocusing nonlinearity (f'(1) > 0)");
  ScenarioResult res;
  res.name = "conservation";
  SpectralWorkspace ws(grid);
  // Budget 1/8: the splitting's drift constant grows linearly with the
  // energy budget, and this scale leaves a 3x margin under the 1e-7 bar at
  // the finest ladder rung while keeping the field genuinely nonlinear.
  const Field f0 = init_random_bounded(grid, cplx{1.0, 0.0}, 0.125, seed);

  std::ostringstream csv;
  csv.precision(17);
  csv << "dt,t,E,H,drift\n";
  const auto drift_of = [&](double dt, double t_end) {
    SolverConfig cfg;
    cfg.dt = dt;
    cfg.t_end = t_end;
    cfg.report_every = std::max<long long>(1, std::llround(0.1 / dt));
    // Exactness measurement: the 2/3 mask sheds a little energy every step,
    // a dt-independent loss that would floor the drift and hide the
    // splitting's own order, so it is off for this ladder.
    cfg.dealias = false;
    Trajectory traj = run(f0, spec, cfg, ws);
    double worst = 0.0;
    const double H0 = traj.reports.front().H;
    for (const EnergyReport& r : traj.reports) {
      const double d = std::abs(r.H - H0) / std::max(1.0, std::abs(H0));
      worst = std::max(worst, d);
      csv << dt << ',' << r.t << ',' << r.E << ',' << r.H << ',' << d << "\n";
    }
    return std::pair{worst, traj.status};
  };

  const std::vector<double> ladder = {4e-3, 2e-3, 1e-3};
  std::vector<double> drifts, log_dt, log_drift;
  bool all_completed = true;
  for (double dt : ladder) {
    auto [d, status] = drift_of(dt, 5.0);
    drifts.push_back(d);
    log_dt.push_back(std::log(dt));
    log_drift.push_back(std::log(std::max(d, 1e-300)));
    all_completed = all_completed && status == RunStatus::completed;
    detail::add_metric(res, "drift_dt_" + std::to_string(dt), d);
  }
  const double order = detail::lsq_slope(log_dt, log_drift);
  detail::add_metric(res, "order", order);

  // Negative control: a coarse ladder must fail the same acceptance bars
  // (drift bar or the order window), demonstrating the check can fire.
  auto [cd1, cs1] = drift_of(0.5, 5.0);
  auto [cd2, cs2] = drift_of(0.25, 5.0);
  const double control_order = std::log2(cd1 / cd2);
  const bool control_would_pass = cd2 < 1e-7 && control_order >= 1.8 &&
                                  control_order <= 2.2 &&
                                  cs1 == RunStatus::completed &&
                                  cs2 == RunStatus::completed;
  detail::add_metric(res, "control_drift_dt_0.5", cd1);
  detail::add_metric(res, "control_order", control_order);
  detail::add_metric(res, "control_fired", control_would_pass ? 0.0 : 1.0);

  res.passed = all_completed && drifts.back() < 1e-7 && order >= 1.8 &&
               order <= 2.2 && !control_would_pass;
  res.notes.push_back(
      "order = least-squares slope of log drift vs log dt over the ladder");
  detail::write_scenario_files(res, outdir, csv.str());
  return res;
}

// --------------------------------------------------------------------------
// Black-soliton stationarity plus a wrong-nonlinearity control.
inline ScenarioResult exp_soliton_stationarity(const Grid& grid,
                                               const std::string& outdir =
                                                   ".") {
  if (grid.dim != 1)
    throw std::invalid_argument("exp_soliton_stationarity: grid must be 1D");
  if (!(grid.extent[0] >= 60.0) || grid.points[0] < 1024)
    throw std::invalid_argument(
        "exp_soliton_stationarity: needs L >= 60 and N >= 1024");
  ScenarioResult res;
  res.name = "soliton";
  const Field psi0 = init_black_soliton_1d(grid);
  SpectralWorkspace ws(psi0.grid);

  // PDE residual of the initial profile: -psi''/2 + (|psi|^2 - 1) psi.
  const std::vector<cplx> lap = laplacian(psi0, ws);
  double resid = 0.0;
  for (std::size_t j = 0; j < psi0.values.size(); ++j) {
    const cplx r = -0.5 * lap[j] +
                   (std::norm(psi0.values[j]) - 1.0) * psi0.values[j];
    resid = std::max(resid, std::abs(r));
  }
  detail::add_metric(res, "residual_sup", resid);

  double v0_norm2 = 0.0;
  for (const cplx& z : psi0.values) v0_norm2 += std::norm(z - psi0.farfield);
  const double v0_norm =
      std::sqrt(v0_norm2 * psi0.grid.cell_volume());

  std::ostringstream csv;
  csv.precision(17);
  csv << "spec,t,deviation,E,H\n";
  const auto max_deviation = [&](const NonlinearitySpec& spec, double T,
                                 const char* label) {
    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = T;
    cfg.report_every = 100;
    double worst = 0.0;
    RunOptions opts;
    opts.on_report = [&](const Field& f, const EnergyReport& r, long long) {
      const double dev = l2_distance(f, psi0) / v0_norm;
      worst = std::max(worst, dev);
      csv << label << ',' << r.t << ',' << dev << ',' << r.E << ',' << r.H
          << "\n";
    };
    const Trajectory traj = run(psi0, spec, cfg, ws, opts);
    return std::pair{worst, traj.status};
  };

  auto [dev, status] = max_deviation(make_gp(), 10.0, "gp");
  detail::add_metric(res, "max_deviation", dev);

  // Control: the same profile is not stationary for power(-1, 1).
  auto [cdev, cstatus] = max_deviation(make_power(-1.0, 1.0), 1.0, "control");
  detail::add_metric(res, "control_max_deviation", cdev);
  const bool control_fired = !(cdev < 1e-5);
  detail::add_metric(res, "control_fired", control_fired ? 1.0 : 0.0);

  res.passed = resid < 1e-8 && dev < 1e-5 &&
               status == RunStatus::completed && control_fired &&
               cstatus == RunStatus::completed;
  res.notes.push_back(
      "deviation = sup_t ||psi(t) - psi(0)||_2 / ||psi(0) - c||_2 on the "
      "doubled box");
  detail::write_scenario_files(res, outdir, csv.str());
  return res;
}

// --------------------------------------------------------------------------
// Modulational dichotomy: stable vs unstable background, rates vs the
// linearized symbol.
inline ScenarioResult exp_modulational(const NonlinearitySpec& spec_stable,
                                       const NonlinearitySpec& spec_unstable,
                                       const Grid& grid,
                                       const std::string& outdir = ".") {
  const double fp_s = eval_f_prime(spec_stable, 1.0);
  const double fp_u = eval_f_prime(spec_unstable, 1.0);
  if (!(fp_s > 0.0))
    throw std::invalid_argument(
        "exp_modulational: spec_stable must have f'(1) > 0");
  if (!(fp_u < 0.0))
    throw std::invalid_argument(
        "exp_modulational: spec_unstable must have f'(1) < 0");
  ScenarioResult res;
  res.name = "modulational";

  // Lattice mode nearest the peak of the predicted unstable band.
  const double k_peak = std::sqrt(-2.0 * fp_u);
  const double unit = 2.0 * std::numbers::pi / grid.extent[0];
  const long m = std::max<long>(1, std::lround(k_peak / unit));
  std::vector<double> mode(grid.dim, 0.0);
  mode[0] = static_cast<double>(m) * unit;
  const double sigma = bogoliubov_sigma(fp_u, mode[0]);
  detail::add_metric(res, "mode_k", mode[0]);
  detail::add_metric(res, "predicted_rate", sigma);

  SpectralWorkspace ws(grid);
  std::ostringstream csv;
  csv.precision(17);
  csv << "spec,t,mode_amplitude\n";
  const auto fit_for = [&](const NonlinearitySpec& spec, double eps,
                           double t_end, const char* label) {
    const Field f0 =
        init_plane_wave_perturbed(grid, cplx{1.0, 0.0}, eps, mode);
    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = t_end;
    cfg.report_every = 20;
    RunOptions opts;
    opts.keep_snapshots = true;
    const Trajectory traj = run(f0, spec, cfg, ws, opts);
    std::vector<std::size_t> idx(grid.dim, 0);
    idx[0] = static_cast<std::size_t>(m);
    for (std::size_t s = 0; s < traj.snapshots.size(); ++s) {
      const std::vector<cplx> sp = spectrum_of_affine(traj.snapshots[s], ws);
      csv << label << ',' << traj.times[s] << ','
          << std::abs(sp[grid.flatten(idx)]) << "\n";
    }
    return measure_mode_growth(traj, mode);
  };

  // On the stable side the mode amplitude oscillates at twice the sideband
  // frequency; the least-squares slope of a bounded oscillation falls off
  // as 1/T^2, so that window is four times longer than the growth runs.
  const ModeGrowthFit stable = fit_for(spec_stable, 1e-4, 20.0, "stable");
  const ModeGrowthFit unstable = fit_for(spec_unstable, 1e-4, 5.0, "unstable");
  detail::add_metric(res, "stable_rate", stable.rate);
  detail::add_metric(res, "unstable_rate", unstable.rate);
  detail::add_metric(res, "unstable_fit_r2", unstable.r_squared);

  // Saturation path: a large perturbation must end the fit window before
  // the run does.
  const ModeGrowthFit sat = fit_for(spec_unstable, 1e-2, 5.0, "saturating");
  const bool saturation_seen = !sat.ok || sat.truncated;
  detail::add_metric(res, "saturation_truncated", saturation_seen ? 1.0 : 0.0);

  // Control: swapping the two specs must be rejected up front.
  bool control_rejected = false;
  try {
    if (!(fp_u > 0.0)) throw std::invalid_argument("swapped stable spec");
    if (!(fp_s < 0.0)) throw std::invalid_argument("swapped unstable spec");
  } catch (const std::invalid_argument&) {
    control_rejected = true;
  }
  detail::add_metric(res, "control_rejected", control_rejected ? 1.0 : 0.0);

  const double rate_err = std::abs(unstable.rate - sigma) / sigma;
  detail::add_metric(res, "unstable_rate_rel_error", rate_err);
  res.passed = stable.ok && unstable.ok && std::abs(stable.rate) < 1e-2 &&
               rate_err <= 0.05 && saturation_seen && control_rejected;
  res.notes.push_back(
      "rates are least-squares exponents of one lattice mode's amplitude");
  detail::write_scenario_files(res, outdir, csv.str());
  return res;
}

// --------------------------------------------------------------------------
// Metric equivalence d_E ~ d_GL on a bounded ensemble, stability of the
// empirical constant under grid refinement.
inline ScenarioResult exp_metric_equivalence(const Grid& grid, double R,
                                             int n_pairs, std::uint64_t seed,
                                             const std::string& outdir = ".") {
  if (n_pairs < 100)
    throw std::invalid_argument("exp_metric_equivalence: n_pairs must be >= 100");
  if (!(R > 0.0))
    throw std::invalid_argument("exp_metric_equivalence: R must be positive");
  ScenarioResult res;
  res.name = "metric_equivalence";

  SpectralWorkspace ws(grid);
  std::vector<std::size_t> fine_points(grid.points);
  for (std::size_t& p : fine_points) p *= 2;
  const Grid fine = make_grid(grid.dim, grid.extent, fine_points);
  SpectralWorkspace ws_fine(fine);

  Rng budget_rng(seed);
  std::ostringstream csv;
  csv.precision(17);
  csv << "pair,dE,dGL,ratio,dE_fine,dGL_fine,ratio_fine\n";

  double c_star = 1.0, c_star_fine = 1.0;
  bool all_finite = true;
  std::vector<double> ratios;
  for (int i = 0; i < n_pairs; ++i) {
    const double b1 = R * (0.05 + 0.95 * budget_rng.uniform());
    const double b2 = R * (0.05 + 0.95 * budget_rng.uniform());
    const Field fa = init_random_bounded(grid, cplx{1.0, 0.0}, b1,
                                         seed + 977 * (2 * i + 1));
    // Pair 0 is the documented identical pair (ratio defined as 1).
    const Field fb = (i == 0) ? fa
                              : init_random_bounded(grid, cplx{1.0, 0.0}, b2,
                                                    seed + 977 * (2 * i + 2));
    const auto ratio_on = [&](const Field& a, const Field& b,
                              SpectralWorkspace& w) {
      const double de = metric_dE(a, b, w).value;
      const double dg = metric_dGL(a, b, w).value;
      if (de == 0.0 && dg == 0.0) return std::tuple{0.0, 0.0, 1.0};
      return std::tuple{de, dg, de / dg};
    };
    auto [de, dg, ratio] = ratio_on(fa, fb, ws);
    const Field fa_f = upsample_field(fa, 2);
    const Field fb_f = (i == 0) ? fa_f : upsample_field(fb, 2);
    auto [def, dgf, ratio_f] = ratio_on(fa_f, fb_f, ws_fine);
    csv << i << ',' << de << ',' << dg << ',' << ratio << ',' << def << ','
        << dgf << ',' << ratio_f << "\n";
    all_finite = all_finite && std::isfinite(ratio) && std::isfinite(ratio_f);
    ratios.push_back(ratio);
    c_star = std::max({c_star, ratio, 1.0 / ratio});
    c_star_fine = std::max({c_star_fine, ratio_f, 1.0 / ratio_f});
  }
  const double rel_change = std::abs(c_star_fine - c_star) / c_star;
  detail::add_metric(res, "C_star", c_star);
  detail::add_metric(res, "C_star_fine", c_star_fine);
  detail::add_metric(res, "rel_change", rel_change);

  // Falsifiability control: half the reported constant must fail to bound
  // at least one pair.
  int violations = 0;
  const double c_half = 0.5 * c_star;
  for (double r : ratios)
    if (r > c_half || r < 1.0 / c_half) ++violations;
  detail::add_metric(res, "control_violations_at_half_C", violations);

  res.passed = all_finite && rel_change < 0.10 && violations >= 1;
  res.notes.push_back(
      "C* bounds dE/dGL both ways over the ensemble; refinement doubles "
      "every axis and re-evaluates the same band-limited fields");
  detail::write_scenario_files(res, outdir, csv.str());
  return res;
}

// --------------------------------------------------------------------------
// Coercivity of H over E for sign-definite potentials: monotone decile
// envelope plus the Chebyshev and modified-GL inequalities on every field.
inline ScenarioResult exp_coercivity_F(const NonlinearitySpec& spec,
                                       const Grid& grid, std::uint64_t seed,
                                       const std::string& outdir = ".") {
  if (!(eval_f_prime(spec, 1.0) > 0.0))
    throw std::invalid_argument(
        "exp_coercivity_F: needs a defocusing nonlinearity");
  for (int i = 0; i <= 4000; ++i) {
    const double rho = 10.0 * static_cast<double>(i) / 4000.0;
    if (eval_F(spec, rho) < -1e-14)
      throw std::invalid_argument(
          "exp_coercivity_F: F must be nonnegative on the sampled range");
  }
  ScenarioResult res;
  res.name = "coercivity";
  SpectralWorkspace ws(grid);

  const int target = 400;
  const double amp_cap = 2.0 * std::sqrt(2.0) - 1.0;  // keeps 4 E >= E_mGL
  std::vector<double> Hs, Es;
  std::ostringstream csv;
  csv.precision(17);
  csv << "field,H,E,sup_amp\n";
  double cheb_worst = 0.0;   // max of measure - 4 * density (must be <= 0)
  double mgl_worst = 0.0;    // max of E_mGL/4 - E (must be <= 0)
  int attempts = 0;
  for (int i = 0; i < target; ++i) {
    Field f;
    double sup_amp = 0.0;
    do {
      ++attempts;
      if (attempts > 20 * target)
        throw std::runtime_error(
            "exp_coercivity_F: amplitude-capped ensemble not reachable");
      const double frac =
          static_cast<double>(i) / static_cast<double>(target - 1);
      const double budget = 1e-4 * std::pow(2.0e4, frac);
      f = init_random_bounded(grid, cplx{1.0, 0.0}, budget,
                              seed + 1315423911u * static_cast<unsigned>(
                                                       attempts));
      sup_amp = sup_norm(f.values);
    } while (sup_amp > amp_cap);
    const EnergyReport r = full_report(f, spec, std::nullopt, ws);
    Hs.push_back(r.H);
    Es.push_back(r.E);
    csv << i << ',' << r.H << ',' << r.E << ',' << sup_amp << "\n";
    const double slack = 1e-12 * std::max(1.0, r.E);
    cheb_worst = std::max(
        cheb_worst, eta_support_measure(f, 0.5) - 4.0 * r.density_part - slack);
    mgl_worst = std::max(mgl_worst, 0.25 * r.E_mGL - r.E - slack);
  }
  detail::add_metric(res, "ensemble_attempts", attempts);
  detail::add_metric(res, "chebyshev_worst_excess", cheb_worst);
  detail::add_metric(res, "quarter_mgl_worst_excess", mgl_worst);

  // Decile envelope of E graded by H.
  std::vector<std::size_t> order(Hs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return Hs[a] < Hs[b]; });
  const std::size_t per = Hs.size() / 10;
  std::vector<double> env_E(10, 0.0), env_H(10, 0.0);
  for (std::size_t d = 0; d < 10; ++d)
    for (std::size_t j = d * per; j < (d + 1) * per; ++j) {
      env_E[d] = std::max(env_E[d], Es[order[j]]);
      env_H[d] = std::max(env_H[d], Hs[order[j]]);
    }
  bool monotone = true;
  for (std::size_t d = 0; d + 1 < 10; ++d)
    monotone = monotone && env_E[d] <= env_E[d + 1] * (1.0 + 1e-12);
  const double small_ratio = env_E[0] / env_H[0];
  for (std::size_t d = 0; d < 10; ++d) {
    detail::add_metric(res, "decile_" + std::to_string(d) + "_maxH", env_H[d]);
    detail::add_metric(res, "decile_" + std::to_string(d) + "_maxE", env_E[d]);
  }
  detail::add_metric(res, "smallest_decile_E_over_H", small_ratio);

  // Control: a potential with a negative F region must be rejected by the
  // precondition above.
  bool control_rejected = false;
  try {
    const NonlinearitySpec bad = make_competing(1.0, 2.0, 1.5, 0.5);
    for (int i = 0; i <= 4000; ++i) {
      const double rho = 10.0 * static_cast<double>(i) / 4000.0;
      if (eval_F(bad, rho) < -1e-14)
        throw std::invalid_argument("negative F");
    }
  } catch (const std::invalid_argument&) {
    control_rejected = true;
  }
  detail::add_metric(res, "control_rejected", control_rejected ? 1.0 : 0.0);

  res.passed = monotone && small_ratio < 10.0 && cheb_worst <= 0.0 &&
               mgl_worst <= 0.0 && control_rejected;
  res.notes.push_back(
      "ensemble amplitudes capped at 2*sqrt(2) - 1 so the quarter-E_mGL "
      "bound is pointwise provable");
  detail::write_scenario_files(res, outdir, csv.str());
  return res;
}

// --------------------------------------------------------------------------
// Gronwall growth of M plus the constructive coercivity E <= C M along the
// trajectory.
inline ScenarioResult exp_gronwall_M(const NonlinearitySpec& spec,
                                     const Grid& grid, double C0,
                                     std::uint64_t seed,
                                     const std::string& outdir = ".") {
  if (spec.kind != NonlinKind::competing)
    throw std::invalid_argument(
        "exp_gronwall_M: needs a competing-catalog nonlinearity");
  if (!(eval_f_prime(spec, 1.0) > 0.0))
    throw std::invalid_argument("exp_gronwall_M: needs f'(1) > 0");
  ScenarioResult res;
  res.name = "gronwall";

  const PotentialStructure st = analyze_potential(spec, 10.0);
  const CoercivityConstants cc = coercivity_constants(st);
  detail::add_metric(res, "C0_used", C0);
  detail::add_metric(res, "C0_constructed", cc.C0);
  detail::add_metric(res, "C_energy", cc.C_energy);

  SpectralWorkspace ws(grid);
  std::ostringstream csv;
  csv.precision(17);
  csv << "run,t,E,H,M,re2_integral\n";

  struct Series {
    std::vector<double> t, E, H, M;
    RunStatus status = RunStatus::completed;
  };
  const auto evolve = [&](const Field& f0, double T, double dt,
                          const char* label) {
    SolverConfig cfg;
    cfg.dt = dt;
    cfg.t_end = T;
    cfg.report_every = std::max<long long>(1, std::llround(0.1 / dt));
    RunOptions opts;
    opts.C0 = C0;
    Series s;
    opts.on_report = [&](const Field& f, const EnergyReport& r, long long) {
      double re2 = 0.0;
      const cplx rot = std::conj(f.farfield);
      for (const cplx& z : f.values) {
        const double v = (rot * z).real() - 1.0;
        re2 += v * v;
      }
      re2 *= f.grid.cell_volume();
      s.t.push_back(r.t);
      s.E.push_back(r.E);
      s.H.push_back(r.H);
      s.M.push_back(r.M);
      csv << label << ',' << r.t << ',' << r.E << ',' << r.H << ',' << r.M
          << ',' << re2 << "\n";
    };
    const Trajectory traj = run(f0, spec, cfg, ws, opts);
    s.status = traj.status;
    return s;
  };

  // Fitted exponential envelope rate: smallest C with M(t) <= e^{C t} M(0).
  const auto c_hat_of = [](const Series& s) {
    double c = 0.0;
    for (std::size_t i = 1; i < s.t.size(); ++i)
      c = std::max(c, std::log(s.M[i] / s.M.front()) / s.t[i]);
    return c;
  };
  const auto coercive_along = [&](const Series& s) {
    // E <= C_energy * M with the constructed constants; the M recorded in
    // the series uses the caller's C0, rebuild with cc.C0 via H.
    double worst = 0.0;
    for (std::size_t i = 0; i < s.t.size(); ++i) {
      const double re2_term = (s.M[i] - s.H[i]) / C0;  // = integral (Re v)^2
      const double M_cc = s.H[i] + cc.C0 * re2_term;
      worst = std::max(worst, s.E[i] / (cc.C_energy * M_cc));
    }
    return worst;
  };

  const Field f0 = init_random_bounded(grid, cplx{1.0, 0.0}, 1.0, seed);
  const Series main = evolve(f0, 5.0, 2e-3, "main");
  const double c_hat = c_hat_of(main);
  const double coercive_main = coercive_along(main);
  detail::add_metric(res, "C_hat", c_hat);
  detail::add_metric(res, "M0", main.M.front());
  detail::add_metric(res, "max_E_over_CM", coercive_main);

  bool envelope_ok = main.M.front() > 0.0;
  for (std::size_t i = 0; i < main.t.size(); ++i)
    envelope_ok = envelope_ok &&
                  main.M[i] <= std::exp(c_hat * main.t[i]) *
                                   main.M.front() * (1.0 + 1e-9);

  // Deep-bump data probing the low-density region of F.
  const Field bump = detail::bump_field(grid, cplx{1.0, 0.0}, -0.97, 4);
  const Series deep = evolve(bump, 2.0, 2e-3, "deep_bump");
  const double c_hat_deep = c_hat_of(deep);
  const double coercive_deep = coercive_along(deep);
  detail::add_metric(res, "C_hat_deep_bump", c_hat_deep);
  detail::add_metric(res, "deep_max_E_over_CM", coercive_deep);

  // Control: with C0 = 0 the functional reduces to the conserved H, so the
  // fitted envelope rate of a defocusing gp run must be ~ 0.
  double c_hat_gp = 0.0;
  {
    const Grid g2 = make_grid(2, {8.0 * std::numbers::pi,
                                  8.0 * std::numbers::pi},
                              {48, 48});
    SpectralWorkspace ws2(g2);
    const Field g0 = init_random_bounded(g2, cplx{1.0, 0.0}, 1.0, seed + 5);
    SolverConfig cfg;
    cfg.dt = 2e-3;
    cfg.t_end = 2.0;
    cfg.report_every = 100;
    RunOptions opts;
    opts.C0 = 0.0;
    const Trajectory traj = run(g0, make_gp(), cfg, ws2, opts);
    for (std::size_t i = 1; i < traj.times.size(); ++i)
      c_hat_gp = std::max(c_hat_gp,
                          std::log(traj.reports[i].M /
                                   traj.reports.front().M) /
                              traj.times[i]);
  }
  detail::add_metric(res, "control_C_hat_gp", c_hat_gp);

  res.passed = main.status == RunStatus::completed &&
               deep.status == RunStatus::completed && envelope_ok &&
               std::isfinite(c_hat) && coercive_main <= 1.0 + 1e-12 &&
               coercive_deep <= 1.0 + 1e-12 && c_hat_gp < 1e-6;
  res.notes.push_back(
      "square-integrability of Re(v) holds for every lattice field, so that "
      "hypothesis is not falsifiable at desk scale");
  detail::write_scenario_files(res, outdir, csv.str());
  return res;
}

// --------------------------------------------------------------------------
// Small-data boundedness: one constant K across an epsilon ladder, plus a
// large-data blow-up control.
inline ScenarioResult exp_small_data(const NonlinearitySpec& spec,
                                     const Grid& grid,
                                     const std::vector<double>& eps_ladder,
                                     const std::string& outdir = ".") {
  if (!(eval_f_prime(spec, 1.0) > 0.0))
    throw std::invalid_argument(
        "exp_small_data: needs a defocusing nonlinearity");
  if (eps_ladder.empty())
    throw std::invalid_argument("exp_small_data: empty epsilon ladder");
  ScenarioResult res;
  res.name = "small_data";
  SpectralWorkspace ws(grid);

  std::ostringstream csv;
  csv.precision(17);
  csv << "eps,t,E,H\n";
  std::vector<double> Ks;
  bool all_completed = true;
  for (std::size_t e = 0; e < eps_ladder.size(); ++e) {
    const double eps = eps_ladder[e];
    // Scale a fixed random direction to meet both smallness conditions:
    // ||grad psi||_2^2 <= eps and H <= eps / 4.
    const Field seed_field =
        init_random_bounded(grid, cplx{1.0, 0.0}, eps, 29 + 7 * e);
    Field f = seed_field;
    const auto feasible = [&](double s) {
      for (std::size_t j = 0; j < f.values.size(); ++j)
        f.values[j] = cplx{1.0, 0.0} +
                      s * (seed_field.values[j] - cplx{1.0, 0.0});
      const double grad = grad_norm_sq_integral(f, ws);
      const double H = hamiltonian(f, spec, ws);
      return grad <= eps && H <= 0.25 * eps;
    };
    double lo = 0.0, hi = 1.0;
    if (feasible(1.0)) {
      lo = 1.0;
    } else {
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (feasible(mid))
          lo = mid;
        else
          hi = mid;
      }
    }
    feasible(lo);

    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 10.0;
    cfg.report_every = 100;
    double supE = 0.0;
    RunOptions opts;
    opts.on_report = [&](const Field&, const EnergyReport& r, long long) {
      supE = std::max(supE, r.E);
      csv << eps << ',' << r.t << ',' << r.E << ',' << r.H << "\n";
    };
    const Trajectory traj = run(f, spec, cfg, ws, opts);
    all_completed = all_completed && traj.status == RunStatus::completed;
    Ks.push_back(supE / eps);
    detail::add_metric(res, "K_eps_" + std::to_string(eps), Ks.back());
  }
  const double k_min = *std::min_element(Ks.begin(), Ks.end());
  const double k_max = *std::max_element(Ks.begin(), Ks.end());
  detail::add_metric(res, "K_ratio", k_max / k_min);

  // Control: large focusing data must trip the blow-up flag.
  RunStatus control_status;
  {
    const Grid g2 = make_grid(2, {8.0 * std::numbers::pi,
                                  8.0 * std::numbers::pi},
                              {128, 128});
    SpectralWorkspace ws2(g2);
    const Field bomb = detail::bump_field(g2, cplx{1.0, 0.0}, 3.0, 2);
    SolverConfig cfg;
    cfg.dt = 5e-4;
    cfg.t_end = 2.0;
    cfg.report_every = 20;
    cfg.blowup_E_threshold = 100.0;
    const Trajectory traj = run(bomb, make_power(-1.0, 2.0), cfg, ws2);
    control_status = traj.status;
  }
  detail::add_metric(res, "control_blowup_flagged",
                     control_status == RunStatus::blowup_flagged ? 1.0 : 0.0);

  res.passed = all_completed && k_max / k_min <= 3.0 &&
               control_status == RunStatus::blowup_flagged;
  res.notes.push_back(
      "K = sup_t E / eps; the ladder shares one K when max/min <= 3");
  detail::write_scenario_files(res, outdir, csv.str());
  return res;
}

// --------------------------------------------------------------------------
// Picard/Duhamel vs Strang cross-validation, with the expected
// non-contraction at large T.
inline ScenarioResult exp_picard_vs_strang(const NonlinearitySpec& spec,
                                           const Grid& grid,
                                           const std::string& outdir = ".") {
  if (!(eval_f_prime(spec, 1.0) > 0.0))
    throw std::invalid_argument(
        "exp_picard_vs_strang: needs a defocusing nonlinearity");
  ScenarioResult res;
  res.name = "picard_consistency";
  SpectralWorkspace ws(grid);
  const Field f0 = init_random_bounded(grid, cplx{1.0, 0.0}, 0.25, 23);

  const double T = 0.05;
  RunOptions keep;
  keep.keep_snapshots = true;
  SolverConfig scfg;
  scfg.dt = T / 2048.0;
  scfg.t_end = T;
  scfg.report_every = 2048;
  const Trajectory straj = run(f0, spec, scfg, ws, keep);
  const Field& psi_strang = straj.snapshots.back();

  SolverConfig scfg_coarse = scfg;
  scfg_coarse.dt = T / 1024.0;
  scfg_coarse.report_every = 1024;
  const Trajectory straj_c = run(f0, spec, scfg_coarse, ws, keep);
  const double strang_self =
      detail::rel_l2(straj_c.snapshots.back(), psi_strang);

  SolverConfig pcfg;
  pcfg.dt = T;
  pcfg.t_end = T;
  pcfg.picard_quad_nodes = 16;
  pcfg.picard_iters = 40;
  const PicardResult pr = picard_solve(f0, spec, T, pcfg, ws);
  const double rel = detail::rel_l2(pr.psi, psi_strang);

  detail::add_metric(res, "rel_l2_diff", rel);
  detail::add_metric(res, "strang_self_refinement_diff", strang_self);
  detail::add_metric(res, "contraction_ratio", pr.contraction_ratio);
  detail::add_metric(res, "picard_iterations", pr.iterations);

  // Expected failure at large T. The iteration map's Lipschitz constant
  // scales like T times the field amplitude, so the tiny consistency data
  // above still contracts at T = 5; the demonstration takes order-one
  // amplitudes, hence a separate draw with a much larger energy budget.
  const Field f0_large = init_random_bounded(grid, cplx{1.0, 0.0}, 50.0, 23);
  SolverConfig pcfg_large = pcfg;
  pcfg_large.dt = 5.0;
  pcfg_large.t_end = 5.0;
  pcfg_large.picard_iters = 6;
  const PicardResult pr5 = picard_solve(f0_large, spec, 5.0, pcfg_large, ws);
  const bool control_fired = !pr5.converged && pr5.contraction_ratio >= 1.0;
  detail::add_metric(res, "large_T_ratio", pr5.contraction_ratio);
  detail::add_metric(res, "control_fired", control_fired ? 1.0 : 0.0);

  std::ostringstream csv;
  csv.precision(17);
  csv << "quantity,value\n";
  csv << "rel_l2_diff," << rel << "\n";
  csv << "strang_self_refinement_diff," << strang_self << "\n";
  csv << "contraction_ratio_T_0.05," << pr.contraction_ratio << "\n";
  csv << "contraction_ratio_T_5," << pr5.contraction_ratio << "\n";

  res.passed = pr.converged && rel <= 1e-6 && pr.contraction_ratio < 1.0 / 3.0 &&
               control_fired;
  res.notes.push_back(
      "reference state: Strang at dt = T/2048; self-refinement difference "
      "documents the reference's own error");
  detail::write_scenario_files(res, outdir, csv.str());
  return res;
}

// --------------------------------------------------------------------------
// Registry with the shipped default configurations.

inline const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {
      "conservation",       "soliton",    "modulational",
      "metric_equivalence", "coercivity", "gronwall",
      "small_data",         "picard_consistency"};
  return names;
}

inline ScenarioResult run_scenario(const std::string& name,
                                   const std::string& outdir) {
  const double pi = std::numbers::pi;
  if (name == "conservation")
    return exp_conservation(make_gp(),
                            make_grid(2, {8 * pi, 8 * pi}, {128, 128}), 7,
                            outdir);
  if (name == "soliton")
    return exp_soliton_stationarity(make_grid(1, {60.0}, {1024}), outdir);
  if (name == "modulational")
    return exp_modulational(
        make_gp(), make_power(-1.0, 1.0),
        make_grid(1, {8.0 * std::sqrt(2.0) * pi}, {256}), outdir);
  if (name == "metric_equivalence")
    return exp_metric_equivalence(make_grid(2, {8 * pi, 8 * pi}, {64, 64}),
                                  1.0, 100, 11, outdir);
  if (name == "coercivity")
    return exp_coercivity_F(make_gp(),
                            make_grid(2, {8 * pi, 8 * pi}, {64, 64}), 13,
                            outdir);
  if (name == "gronwall") {
    const NonlinearitySpec spec = make_competing(1.0, 1.2, 1.5, 0.5);
    const double C0 = choose_C0(analyze_potential(spec, 10.0));
    return exp_gronwall_M(spec,
                          make_grid(3, {8 * pi, 8 * pi, 8 * pi}, {64, 64, 64}),
                          C0, 17, outdir);
  }
  if (name == "small_data")
    return exp_small_data(make_competing(1.0, 2.0, 1.5, 0.5),
                          make_grid(2, {8 * pi, 8 * pi}, {64, 64}),
                          {1e-2, 1e-3, 1e-4}, outdir);
  if (name == "picard_consistency")
    return exp_picard_vs_strang(make_gp(),
                                make_grid(2, {8 * pi, 8 * pi}, {64, 64}),
                                outdir);
  throw std::invalid_argument("unknown scenario '" + name + "'");
}

inline std::vector<ScenarioResult> run_all_scenarios(
    const std::string& outdir) {
  const std::vector<std::string>& names = scenario_names();
  std::vector<ScenarioResult> results(names.size());
  std::vector<std::function<void()>> jobs;
  jobs.reserve(names.size());
  for (std::size_t i = 0; i < names.size(); ++i)
    jobs.push_back([&, i] { results[i] = run_scenario(names[i], outdir); });
  run_parallel(jobs);
  return results;
}

}  // namespace nlsfarf
