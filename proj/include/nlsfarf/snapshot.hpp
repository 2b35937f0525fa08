#pragma once
// Checkpoint format. Fixed little-endian layout, loadable without libraries:
//
//   offset 0            magic "NLSFARF1" (8 bytes)
//   offset 8            version  u32 (= 1)
//   offset 12           dim      u32
//   offset 16           N_i      u32 x dim
//   offset 16 + 4 dim   L_i      f64 x dim
//   offset 16 + 12 dim  farfield f64 re, f64 im
//   offset 32 + 12 dim  time     f64
//   offset 40 + 12 dim  payload  2 prod(N_i) f64, re/im interleaved,
//                                row-major with axis 0 slowest
//
// Doubles are copied raw, so write followed by read reproduces the field
// bit for bit. Readers fail loudly with the byte offset of the problem.

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlsfarf/field.hpp"
#include "nlsfarf/grid.hpp"

namespace nlsfarf {

static_assert(std::endian::native == std::endian::little,
              "snapshot format assumes a little-endian host");

struct Snapshot {
  Field field;
  double time = 0.0;
};

namespace detail {

constexpr char kSnapshotMagic[8] = {'N', 'L', 'S', 'F', 'A', 'R', 'F', '1'};
constexpr std::uint32_t kSnapshotVersion = 1;

inline void put_u32(std::string& buf, std::uint32_t v) {
  char b[4];
  std::memcpy(b, &v, 4);
  buf.append(b, 4);
}

inline void put_f64(std::string& buf, double v) {
  char b[8];
  std::memcpy(b, &v, 8);
  buf.append(b, 8);
}

}  // namespace detail

inline void write_snapshot(const Field& f, double t, const std::string& path) {
  std::string buf;
  buf.reserve(40 + 12 * static_cast<std::size_t>(f.grid.dim) +
              16 * f.values.size());
  buf.append(detail::kSnapshotMagic, 8);
  detail::put_u32(buf, detail::kSnapshotVersion);
  detail::put_u32(buf, static_cast<std::uint32_t>(f.grid.dim));
  for (int d = 0; d < f.grid.dim; ++d)
    detail::put_u32(buf, static_cast<std::uint32_t>(f.grid.points[d]));
  for (int d = 0; d < f.grid.dim; ++d) detail::put_f64(buf, f.grid.extent[d]);
  detail::put_f64(buf, f.farfield.real());
  detail::put_f64(buf, f.farfield.imag());
  detail::put_f64(buf, t);
  for (const cplx& z : f.values) {
    detail::put_f64(buf, z.real());
    detail::put_f64(buf, z.imag());
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os)
    throw std::runtime_error("snapshot: cannot open '" + path +
                             "' for writing");
  os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!os) throw std::runtime_error("snapshot: write failed for '" + path + "'");
}

inline Snapshot read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is)
    throw std::runtime_error("snapshot: cannot open '" + path +
                             "' for reading");
  std::vector<char> buf((std::istreambuf_iterator<char>(is)),
                        std::istreambuf_iterator<char>());

  std::size_t off = 0;
  const auto need = [&](std::size_t bytes, const char* what) {
    if (buf.size() - off < bytes)
      throw std::runtime_error("snapshot: truncated file, " +
                               std::string(what) + " missing at byte " +
                               std::to_string(off));
  };
  const auto get_u32 = [&](const char* what) {
    need(4, what);
    std::uint32_t v;
    std::memcpy(&v, buf.data() + off, 4);
    off += 4;
    return v;
  };
  const auto get_f64 = [&](const char* what) {
    need(8, what);
    double v;
    std::memcpy(&v, buf.data() + off, 8);
    off += 8;
    return v;
  };

  need(8, "magic");
  if (std::memcmp(buf.data(), detail::kSnapshotMagic, 8) != 0)
    throw std::runtime_error("snapshot: bad magic at byte 0");
  off = 8;
  const std::uint32_t version = get_u32("version");
  if (version != detail::kSnapshotVersion)
    throw std::runtime_error("snapshot: unsupported version " +
                             std::to_string(version) + " at byte 8");
  const std::uint32_t dim = get_u32("dim");
  if (dim < 1 || dim > 3)
    throw std::runtime_error("snapshot: invalid dim " + std::to_string(dim) +
                             " at byte 12");
  std::vector<std::size_t> points(dim);
  for (std::uint32_t d = 0; d < dim; ++d) {
    const std::size_t at = off;
    points[d] = get_u32("grid points");
    if (points[d] < 4 || points[d] % 2 != 0)
      throw std::runtime_error("snapshot: invalid point count at byte " +
                               std::to_string(at));
  }
  std::vector<double> extent(dim);
  for (std::uint32_t d = 0; d < dim; ++d) {
    const std::size_t at = off;
    extent[d] = get_f64("grid extents");
    if (!(extent[d] > 0.0) || !std::isfinite(extent[d]))
      throw std::runtime_error("snapshot: invalid extent at byte " +
                               std::to_string(at));
  }

  Snapshot out;
  out.field.grid = make_grid(static_cast<int>(dim), extent, points);
  const double fre = get_f64("farfield");
  const double fim = get_f64("farfield");
  out.field.farfield = cplx{fre, fim};
  out.time = get_f64("time");

  const std::size_t n = out.field.grid.size();
  const std::size_t payload_at = off;
  need(16 * n, "payload");
  out.field.values.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    double re, im;
    std::memcpy(&re, buf.data() + off, 8);
    std::memcpy(&im, buf.data() + off + 8, 8);
    off += 16;
    out.field.values[j] = cplx{re, im};
  }
  if (off != buf.size())
    throw std::runtime_error(
        "snapshot: " + std::to_string(buf.size() - off) +
        " trailing bytes after payload (payload started at byte " +
        std::to_string(payload_at) + ")");
  validate_field(out.field);
  return out;
}

}  // namespace nlsfarf
