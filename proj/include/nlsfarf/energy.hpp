#pragma once
// The functionals of the energy-space diagnostics, all evaluated with
// trapezoid quadrature on the periodic lattice (= cell volume times the
// sample sum, which matches the spectral Parseval identities exactly):
//
//   E      = integral |grad psi|^2 + (|psi| - 1)^2        (energy space)
//   E_GL   = integral 1/2 |grad psi|^2 + 1/2 (|psi|^2-1)^2  (Ginzburg-Landau)
//   E_mGL  = integral |grad psi|^2 + 1/2 (phi(|psi|)^2-1)^2 (modified GL,
//            amplitude flattened by the phi cutoff above 2)
//   H      = integral 1/2 |grad psi|^2 + F(|psi|^2)       (Hamiltonian)
//   M      = H + C0 integral (Re(psi) - 1)^2              (Gronwall functional,
//            far-field rotated to 1)
//   Z      = ||grad psi||_2 + || |psi|-1 ||_2             (instantaneous)
//
// plus the chi amplitude decomposition, the level-set measure of
// { ||psi|-1| > delta }, and the constructive coercivity constants that
// make E <= C * M checkable as a per-site inequality.

#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlsfarf/cutoffs.hpp"
#include "nlsfarf/field.hpp"
#include "nlsfarf/nonlinearity.hpp"
#include "nlsfarf/potential_analysis.hpp"
#include "nlsfarf/spectral.hpp"

namespace nlsfarf {

struct EnergyReport {
  double t = 0.0;
  double E = 0.0;
  double grad_part = 0.0;     // integral |grad psi|^2
  double density_part = 0.0;  // integral (|psi| - 1)^2
  double E_GL = 0.0;
  double E_mGL = 0.0;
  double H = 0.0;
  double M = std::numeric_limits<double>::quiet_NaN();  // NaN when no C0 given
  double Z = 0.0;
};

inline const char* energy_csv_header() {
  return "t,E,grad_part,density_part,E_GL,E_mGL,H,M,Z,status";
}

inline std::string energy_csv_row(const EnergyReport& r,
                                  const std::string& status) {
  std::ostringstream os;
  os.precision(17);
  os << r.t << ',' << r.E << ',' << r.grad_part << ',' << r.density_part << ','
     << r.E_GL << ',' << r.E_mGL << ',' << r.H << ',' << r.M << ',' << r.Z
     << ',' << status;
  return os.str();
}

inline double energy_E(const Field& f, SpectralWorkspace& ws) {
  const double g = grad_norm_sq_integral(f, ws);
  double d = 0.0;
  for (const cplx& z : f.values) {
    const double m = std::abs(z) - 1.0;
    d += m * m;
  }
  return g + d * f.grid.cell_volume();
}

inline double energy_GL(const Field& f, SpectralWorkspace& ws) {
  const double g = grad_norm_sq_integral(f, ws);
  double d = 0.0;
  for (const cplx& z : f.values) {
    const double m = std::norm(z) - 1.0;
    d += m * m;
  }
  return 0.5 * g + 0.5 * d * f.grid.cell_volume();
}

inline double energy_mGL(const Field& f, SpectralWorkspace& ws) {
  const double g = grad_norm_sq_integral(f, ws);
  double d = 0.0;
  for (const cplx& z : f.values) {
    const double p = phi_amplitude(std::abs(z));
    const double m = p * p - 1.0;
    d += m * m;
  }
  return g + 0.5 * d * f.grid.cell_volume();
}

inline double hamiltonian(const Field& f, const NonlinearitySpec& spec,
                          SpectralWorkspace& ws) {
  const double g = grad_norm_sq_integral(f, ws);
  double d = 0.0;
  for (const cplx& z : f.values) d += eval_F(spec, std::norm(z));
  return 0.5 * g + d * f.grid.cell_volume();
}

// M = H + C0 * integral (Re(psi) - 1)^2. The caller must have rotated the
// far-field to 1 (multiply by conj(c)); Re(psi - 1) is gauge-dependent and
// only meaningful in that normalization.
inline double functional_M(const Field& f, double C0,
                           const NonlinearitySpec& spec,
                           SpectralWorkspace& ws) {
  double re2 = 0.0;
  for (const cplx& z : f.values) {
    const double r = z.real() - 1.0;
    re2 += r * r;
  }
  return hamiltonian(f, spec, ws) + C0 * re2 * f.grid.cell_volume();
}

// Lattice measure of { x : ||psi(x)| - 1| > delta }.
inline double eta_support_measure(const Field& f, double delta) {
  if (!(delta > 0.0))
    throw std::invalid_argument("eta_support_measure: delta must be positive");
  std::size_t count = 0;
  for (const cplx& z : f.values)
    if (std::abs(std::abs(z) - 1.0) > delta) ++count;
  return static_cast<double>(count) * f.grid.cell_volume();
}

struct ChiDecomposition {
  Field psi_inf;                // chi(psi) psi, bounded by 3
  std::vector<cplx> psi_q;      // psi - psi_inf, supported where |psi| > 2
  double support_measure_q = 0.0;
};

inline ChiDecomposition decompose_chi(const Field& f) {
  ChiDecomposition out;
  out.psi_inf.grid = f.grid;
  out.psi_inf.farfield = f.farfield;  // chi = 1 at unit modulus
  out.psi_inf.values.resize(f.values.size());
  out.psi_q.resize(f.values.size());
  std::size_t support = 0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    const double c = chi(f.values[i]);
    out.psi_inf.values[i] = c * f.values[i];
    // Difference form keeps the sum identity exact and makes psi_q a hard
    // zero wherever chi = 1.
    out.psi_q[i] = f.values[i] - out.psi_inf.values[i];
    if (c < 1.0) ++support;
  }
  out.support_measure_q = static_cast<double>(support) * f.grid.cell_volume();
  return out;
}

// One pass over the field for every functional. The M column is filled when
// C0 is provided; the far-field is rotated to 1 internally for that term
// only (all other functionals are gauge-invariant).
inline EnergyReport full_report(const Field& f, const NonlinearitySpec& spec,
                                std::optional<double> C0,
                                SpectralWorkspace& ws, double t = 0.0) {
  EnergyReport r;
  r.t = t;
  r.grad_part = grad_norm_sq_integral(f, ws);
  const cplx rot = std::conj(f.farfield);
  double dE = 0.0, dGL = 0.0, dmGL = 0.0, dF = 0.0, re2 = 0.0;
  for (const cplx& z : f.values) {
    const double amp = std::abs(z);
    const double rho = std::norm(z);
    const double m1 = amp - 1.0;
    dE += m1 * m1;
    const double m2 = rho - 1.0;
    dGL += m2 * m2;
    const double p = phi_amplitude(amp);
    const double m3 = p * p - 1.0;
    dmGL += m3 * m3;
    dF += eval_F(spec, rho);
    const double re = (rot * z).real() - 1.0;
    re2 += re * re;
  }
  const double cv = f.grid.cell_volume();
  r.density_part = dE * cv;
  r.E = r.grad_part + r.density_part;
  r.E_GL = 0.5 * r.grad_part + 0.5 * dGL * cv;
  r.E_mGL = r.grad_part + 0.5 * dmGL * cv;
  r.H = 0.5 * r.grad_part + dF * cv;
  if (C0.has_value()) r.M = r.H + *C0 * re2 * cv;
  r.Z = std::sqrt(r.grad_part) + std::sqrt(r.density_part);
  return r;
}

// Constructive constants behind the coercivity inequality E <= C_energy * M.
// With delta the convexity window, eta = 1 - sqrt(1 - delta), and densities
// rho = |psi|^2 split into three regions:
//   |rho - 1| <  delta : (|psi|-1)^2 <= (rho-1)^2 <= C1 F(rho)
//   rho >= 1 + delta   : (|psi|-1)^2 <= C_high F(rho)   (sampled supremum)
//   rho <= 1 - delta   : (|psi|-1)^2 <= 1 <= (Re v)^2 / eta^2, and the
//                        negative part of F obeys |F| <= F_neg_max
//                        <= F_neg_max (Re v)^2 / eta^2 there,
// since rho <= 1 - delta forces |Re v| >= 1 - |psi| >= eta after rotation.
// Summing with C0 = (1 + max(C1, C_high, F_neg_max)) / eta^2 gives the
// per-site bound whose integral is E <= C_energy * M.
struct CoercivityConstants {
  double C0 = 0.0;        // weight of the (Re v)^2 term in M
  double C_energy = 0.0;  // E <= C_energy * M
  double eta = 0.0;
  double delta = 0.0;
  double C1 = 0.0;
  double C_high = 0.0;
  double F_neg_max = 0.0;
  double rho_sampled_max = 0.0;  // range over which C_high was certified
};

inline CoercivityConstants coercivity_constants(const PotentialStructure& st) {
  if (!st.defocusing)
    throw std::invalid_argument(
        "coercivity: spec is focusing (f'(1) <= 0); M does not control E");
  if (!st.window_established)
    throw std::invalid_argument(
        "coercivity: no convexity window within the C1 cap could be "
        "established for this spec");
  CoercivityConstants k;
  k.delta = st.convexity_window_delta;
  k.C1 = st.C1;
  k.eta = 1.0 - std::sqrt(1.0 - k.delta);
  k.rho_sampled_max = std::max(1e6, st.rho_max);

  // Supremum of (sqrt(rho)-1)^2 / F on [1+delta, rho_sampled_max]. F > 0
  // there was verified by the structure analysis; every catalog member has
  // F growing at least linearly, so the ratio decays and a log-spaced scan
  // captures the supremum.
  {
    const int n = 20000;
    const double l1 = std::log(1.0 + k.delta);
    const double l2 = std::log(k.rho_sampled_max);
    double sup = 0.0;
    for (int i = 0; i < n; ++i) {
      const double rho = std::exp(l1 + (l2 - l1) * static_cast<double>(i) /
                                           static_cast<double>(n - 1));
      const double Fv = eval_F(st.spec, rho);
      if (!(Fv > 0.0))
        throw std::runtime_error(
            "coercivity: F is not positive above the window; structure "
            "analysis and sampling disagree");
      const double num = std::sqrt(rho) - 1.0;
      sup = std::max(sup, num * num / Fv);
    }
    k.C_high = sup;
  }

  // Largest negative excursion of F on [0, 1-delta].
  {
    const int n = 10000;
    double worst = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double rho =
          (1.0 - k.delta) * static_cast<double>(i) / static_cast<double>(n);
      worst = std::max(worst, -eval_F(st.spec, rho));
    }
    k.F_neg_max = worst;
  }

  k.C0 = (1.0 + std::max(k.C1, std::max(k.C_high, k.F_neg_max))) /
         (k.eta * k.eta);
  k.C_energy = std::max(2.0, std::max(k.C1, k.C_high));
  return k;
}

inline double choose_C0(const PotentialStructure& st) {
  return coercivity_constants(st).C0;
}

}  // namespace nlsfarf
