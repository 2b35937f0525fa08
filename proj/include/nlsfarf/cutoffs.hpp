#pragma once
// The two fixed cutoff profiles used by the diagnostics.
//
// chi: radial C-infinity bump on the complex plane, identically 1 on
// |z| <= 2, supported in |z| < 3. It splits a field into a bounded part
// chi(psi) psi and a square-integrable remainder (1 - chi(psi)) psi.
// Any bump with this support works; this particular smooth step makes
// outputs reproducible.
//
// phi: the amplitude-flattening profile of the modified Ginzburg-Landau
// density. phi(r) = r on [0,2], phi = 3 from r = 4 on, joined on [2,4]
// by the unique quintic with phi(2)=2, phi'(2)=1, phi''(2)=0, phi(4)=3,
// phi'(4)=0, phi''(4)=0. In the bridge variable s = (r-2)/2 that quintic
// is 2 + 2s - 2s^3 + s^4, whose derivative 1 - s^2(3-2s) decreases
// monotonically from 1 to 0, so phi' stays in [0,1] with no clamping.

#include <cmath>
#include <complex>

namespace nlsfarf {

inline double chi_radial(double r) {
  if (r <= 2.0) return 1.0;
  if (r >= 3.0) return 0.0;
  const double t = r - 2.0;
  return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

inline double chi(std::complex<double> z) { return chi_radial(std::abs(z)); }

inline double phi_amplitude(double r) {
  if (r <= 2.0) return r;
  if (r >= 4.0) return 3.0;
  const double s = 0.5 * (r - 2.0);
  return 2.0 + s * (2.0 + s * s * (-2.0 + s));
}

inline double phi_amplitude_deriv(double r) {
  if (r < 2.0) return 1.0;
  if (r > 4.0) return 0.0;
  const double s = 0.5 * (r - 2.0);
  return 1.0 - s * s * (3.0 - 2.0 * s);
}

}  // namespace nlsfarf
