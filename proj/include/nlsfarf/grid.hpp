#pragma once
// Periodic rectangular lattice in d = 1, 2, 3 dimensions. The box [0,L_1) x
// ... x [0,L_d) stands in for all of R^d; a field's far-field behavior is
// carried by a single complex constant, so only data that relaxes to that
// constant are representable (no phase winding at infinity).

#include <cstddef>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlsfarf {

struct Grid {
  int dim = 0;
  std::vector<double> extent;        // per-axis box length L_i
  std::vector<std::size_t> points;   // per-axis sample count N_i, even, >= 4

  std::size_t size() const {
    std::size_t n = 1;
    for (std::size_t p : points) n *= p;
    return n;
  }
  double spacing(int axis) const {
    return extent[static_cast<std::size_t>(axis)] /
           static_cast<double>(points[static_cast<std::size_t>(axis)]);
  }
  double volume() const {
    double v = 1.0;
    for (double l : extent) v *= l;
    return v;
  }
  double cell_volume() const {
    return volume() / static_cast<double>(size());
  }
  double coordinate(int axis, std::size_t index) const {
    return spacing(axis) * static_cast<double>(index);
  }
  // Wavenumber of FFT bin j on one axis, in the set {2*pi*k/L : k = -N/2 ... N/2-1}.
  double wavenumber(int axis, std::size_t index) const {
    const auto n = points[static_cast<std::size_t>(axis)];
    const auto j = static_cast<long long>(index);
    const long long k = j < static_cast<long long>(n / 2)
                            ? j
                            : j - static_cast<long long>(n);
    return 2.0 * std::numbers::pi * static_cast<double>(k) /
           extent[static_cast<std::size_t>(axis)];
  }
  // Signed integer mode index of FFT bin j (the k above).
  long long mode_index(int axis, std::size_t index) const {
    const auto n = points[static_cast<std::size_t>(axis)];
    const auto j = static_cast<long long>(index);
    return j < static_cast<long long>(n / 2) ? j
                                             : j - static_cast<long long>(n);
  }
  // Row-major flattening, axis 0 slowest.
  std::size_t flatten(const std::vector<std::size_t>& idx) const {
    std::size_t flat = 0;
    for (int a = 0; a < dim; ++a)
      flat = flat * points[static_cast<std::size_t>(a)] +
             idx[static_cast<std::size_t>(a)];
    return flat;
  }
  void unflatten(std::size_t flat, std::vector<std::size_t>& idx) const {
    idx.resize(static_cast<std::size_t>(dim));
    for (int a = dim - 1; a >= 0; --a) {
      const auto n = points[static_cast<std::size_t>(a)];
      idx[static_cast<std::size_t>(a)] = flat % n;
      flat /= n;
    }
  }

  bool operator==(const Grid& o) const {
    return dim == o.dim && extent == o.extent && points == o.points;
  }
};

// Validating constructor. Powers of two give the fastest transforms but any
// even N_i >= 4 is accepted.
inline Grid make_grid(int dim, const std::vector<double>& extents,
                      const std::vector<std::size_t>& points) {
  if (dim < 1 || dim > 3)
    throw std::invalid_argument("make_grid: dim must be 1, 2, or 3, got " +
                                std::to_string(dim));
  if (extents.size() != static_cast<std::size_t>(dim) ||
      points.size() != static_cast<std::size_t>(dim))
    throw std::invalid_argument(
        "make_grid: extents and points must each have one entry per axis");
  for (int a = 0; a < dim; ++a) {
    const double l = extents[static_cast<std::size_t>(a)];
    const std::size_t n = points[static_cast<std::size_t>(a)];
    if (!(l > 0.0) || !std::isfinite(l)) {
      std::ostringstream os;
      os << "make_grid: extent on axis " << a << " must be positive, got " << l;
      throw std::invalid_argument(os.str());
    }
    if (n < 4 || n % 2 != 0) {
      std::ostringstream os;
      os << "make_grid: points on axis " << a << " must be even and >= 4, got "
         << n;
      throw std::invalid_argument(os.str());
    }
  }
  Grid g;
  g.dim = dim;
  g.extent = extents;
  g.points = points;
  return g;
}

}  // namespace nlsfarf
