#pragma once
// Structural analysis of a nonlinearity's potential F: sign of f'(1)
// (defocusing or not), roots of f, the region where F is negative, and
// the local convexity window around the far-field density where F is
// comparable to (rho - 1)^2 from both sides.

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "nlsfarf/nonlinearity.hpp"

namespace nlsfarf {

struct PotentialStructure {
  NonlinearitySpec spec;
  double rho_max = 0.0;
  double fprime1 = 0.0;
  bool defocusing = false;             // f'(1) > 0
  std::vector<double> roots_of_f;      // sorted, within [rho_min, rho_max]
  std::vector<char> root_tangential;   // 1 = no sign change (multiplicity unknown)
  std::optional<double> rho2;          // largest rho < 1 with F(rho) < 0
  bool F_positive_above_one = false;
  // Convexity window: largest delta <= 1/2 such that
  //   (1/C1) (rho-1)^2 <= F(rho) <= C1 (rho-1)^2   on (1-delta, 1+delta)
  // with the constant capped at C1 <= 4/f'(1), sampled at 1e-3 resolution.
  // For focusing specs the same window is computed for |F| so the report
  // stays informative; downstream coercivity rejects those anyway.
  // No window within the cap => window_established = false, delta = 0.
  bool window_established = false;
  double convexity_window_delta = 0.0;
  double C1 = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

inline double bisect_root(const NonlinearitySpec& s, double lo, double hi,
                          double flo) {
  for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = eval_f(s, mid);
    if (fm == 0.0) return mid;
    if ((flo < 0.0) == (fm < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline double bisect_F_sign(const NonlinearitySpec& s, double lo, double hi,
                            bool lo_negative) {
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    const bool mneg = eval_F(s, mid) < 0.0;
    if (mneg == lo_negative)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

inline PotentialStructure analyze_potential(const NonlinearitySpec& spec,
                                            double rho_max) {
  if (!(rho_max >= 4.0))
    throw std::invalid_argument("analyze_potential: rho_max must be >= 4");

  PotentialStructure st;
  st.spec = spec;
  st.rho_max = rho_max;
  st.fprime1 = eval_f_prime(spec, 1.0);
  if (std::abs(st.fprime1) < 1e-10)
    throw std::invalid_argument(
        "analyze_potential: f'(1) vanishes; the quadratic Taylor window at "
        "the far-field density degenerates");
  st.defocusing = st.fprime1 > 0.0;

  // Roots of f: sign-change scan over a log grid, refined by bisection.
  // Tangential near-zeros (local minima of |f| below 1e-10 with no sign
  // change) are recorded with an unknown-multiplicity marker.
  const int n_grid = 10000;
  const double rho_min = 1e-8;
  std::vector<double> rg(n_grid), fg(n_grid);
  const double llo = std::log(rho_min), lhi = std::log(rho_max);
  for (int i = 0; i < n_grid; ++i) {
    rg[static_cast<std::size_t>(i)] =
        std::exp(llo + (lhi - llo) * static_cast<double>(i) /
                           static_cast<double>(n_grid - 1));
    fg[static_cast<std::size_t>(i)] =
        eval_f(spec, rg[static_cast<std::size_t>(i)]);
  }
  for (int i = 0; i + 1 < n_grid; ++i) {
    const double f0 = fg[static_cast<std::size_t>(i)];
    const double f1 = fg[static_cast<std::size_t>(i + 1)];
    if (f0 == 0.0) {
      st.roots_of_f.push_back(rg[static_cast<std::size_t>(i)]);
      st.root_tangential.push_back(0);
    } else if ((f0 < 0.0) != (f1 < 0.0)) {
      st.roots_of_f.push_back(detail::bisect_root(
          spec, rg[static_cast<std::size_t>(i)],
          rg[static_cast<std::size_t>(i + 1)], f0));
      st.root_tangential.push_back(0);
    } else if (i > 0) {
      const double fm1 = fg[static_cast<std::size_t>(i - 1)];
      if (std::abs(f0) < 1e-10 && std::abs(f0) <= std::abs(fm1) &&
          std::abs(f0) <= std::abs(f1)) {
        st.roots_of_f.push_back(rg[static_cast<std::size_t>(i)]);
        st.root_tangential.push_back(1);
      }
    }
  }
  // Deduplicate within 1e-9 (bisection from adjacent cells can repeat).
  {
    std::vector<double> roots;
    std::vector<char> tang;
    for (std::size_t i = 0; i < st.roots_of_f.size(); ++i) {
      if (!roots.empty() && std::abs(st.roots_of_f[i] - roots.back()) < 1e-9)
        continue;
      roots.push_back(st.roots_of_f[i]);
      tang.push_back(st.root_tangential[i]);
    }
    st.roots_of_f = std::move(roots);
    st.root_tangential = std::move(tang);
  }

  // Negative region of F below 1: scan [0, 1] uniformly, then bisect the
  // upper boundary of {F < 0}.
  {
    const int n = 10000;
    int last_neg = -1;
    for (int i = 0; i < n; ++i) {
      const double rho = static_cast<double>(i) / static_cast<double>(n);
      if (eval_F(spec, rho) < 0.0) last_neg = i;
    }
    if (last_neg >= 0) {
      const double lo = static_cast<double>(last_neg) / static_cast<double>(n);
      const double hi =
          static_cast<double>(last_neg + 1) / static_cast<double>(n);
      st.rho2 = detail::bisect_F_sign(spec, lo, hi, true);
    }
  }

  // Sign of F above 1 on a log grid up to rho_max.
  {
    const int n = 4000;
    bool all_pos = true;
    const double l1 = std::log(1.0 + 1e-6), l2 = std::log(rho_max);
    for (int i = 0; i < n; ++i) {
      const double rho = std::exp(l1 + (l2 - l1) * static_cast<double>(i) /
                                           static_cast<double>(n - 1));
      if (!(eval_F(spec, rho) > 0.0)) {
        all_pos = false;
        break;
      }
    }
    st.F_positive_above_one = all_pos;
  }

  // Convexity window, grown outward from rho = 1 in 1e-3 steps. The running
  // maximum of max(F/d^2, d^2/F) over both sides is the candidate C1; the
  // window ends where that maximum would exceed the cap 4/|f'(1)| or where
  // F (|F| when focusing) stops being positive.
  {
    const double cap = 4.0 / std::abs(st.fprime1);
    const double step = 1e-3;
    double run_max = 0.0;
    int feasible_j = 0;
    double feasible_c1 = std::numeric_limits<double>::quiet_NaN();
    for (int j = 1; j <= 500; ++j) {
      const double d = step * static_cast<double>(j);
      bool ok = true;
      for (const double rho : {1.0 - d, 1.0 + d}) {
        double Fv = eval_F(spec, rho);
        if (!st.defocusing) Fv = std::abs(Fv);
        if (!(Fv > 0.0)) {
          ok = false;
          break;
        }
        run_max = std::max(run_max, std::max(Fv / (d * d), (d * d) / Fv));
      }
      if (!ok || run_max > cap) break;
      feasible_j = j;
      feasible_c1 = run_max;
    }
    if (feasible_j > 0) {
      st.window_established = true;
      st.convexity_window_delta = step * static_cast<double>(feasible_j);
      st.C1 = feasible_c1;
    }
  }

  return st;
}

}  // namespace nlsfarf
