#pragma once
// Complex scalar field on a periodic lattice together with its far-field
// constant c, |c| = 1. The pair (c, values) represents psi; the affine part
// v = psi - c is what the spectral operators act on, so the constant is
// preserved exactly by construction.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "nlsfarf/grid.hpp"

namespace nlsfarf {

using cplx = std::complex<double>;

struct Field {
  Grid grid;
  cplx farfield{1.0, 0.0};
  std::vector<cplx> values;  // row-major, axis 0 slowest, size grid.size()
};

inline Field make_constant_field(const Grid& grid, cplx farfield) {
  Field f;
  f.grid = grid;
  f.farfield = farfield;
  f.values.assign(grid.size(), farfield);
  return f;
}

// Checks the representation invariants: value count, finiteness, |c| = 1.
inline void validate_field(const Field& f) {
  if (f.values.size() != f.grid.size())
    throw std::invalid_argument("field: value count does not match grid size");
  if (std::abs(std::abs(f.farfield) - 1.0) > 1e-12)
    throw std::invalid_argument("field: far-field constant must have unit modulus");
  for (const cplx& z : f.values)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw std::invalid_argument("field: non-finite value encountered");
}

inline bool field_all_finite(const Field& f) {
  for (const cplx& z : f.values)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

// Gauge rotation psi -> conj(c) * psi, making the far-field exactly 1. The
// equation and every gauge-invariant functional are unchanged; functionals
// that single out Re(psi - 1) require this normalization.
inline Field rotate_to_unit_farfield(const Field& f) {
  Field out = f;
  const cplx phase = std::conj(f.farfield);
  for (cplx& z : out.values) z *= phase;
  out.farfield = {1.0, 0.0};
  return out;
}

// Lattice L2 norm of the pointwise difference, sqrt(sum |a-b|^2 * cell).
inline double l2_distance(const Field& a, const Field& b) {
  if (!(a.grid == b.grid))
    throw std::invalid_argument("l2_distance: fields live on different grids");
  double s = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const cplx d = a.values[i] - b.values[i];
    s += std::norm(d);
  }
  return std::sqrt(s * a.grid.cell_volume());
}

// Lattice L2 norm of values measured against the field's own far-field.
inline double l2_norm_affine(const Field& f) {
  double s = 0.0;
  for (const cplx& z : f.values) s += std::norm(z - f.farfield);
  return std::sqrt(s * f.grid.cell_volume());
}

inline double sup_norm(const std::vector<cplx>& values) {
  double m = 0.0;
  for (const cplx& z : values) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace nlsfarf
