#pragma once
// Run configuration: a line-oriented "section.key = value" format ('#'
// starts a comment, lists are comma- or space-separated). Unknown keys are
// rejected with their line number, so typos cannot silently fall back to
// defaults. See default_config_text() for the full key reference.

#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlsfarf/field.hpp"
#include "nlsfarf/grid.hpp"
#include "nlsfarf/initial_data.hpp"
#include "nlsfarf/nonlinearity.hpp"
#include "nlsfarf/solver.hpp"

namespace nlsfarf {

struct InitialConfig {
  std::string kind = "constant";  // constant | plane_wave_perturbed |
                                  // black_soliton | random_bounded
  cplx farfield{1.0, 0.0};
  double eps = 0.01;              // plane-wave perturbation size
  std::vector<long> mode;         // plane-wave integer mode indices
  double energy_budget = 1.0;     // random_bounded budget
  std::uint64_t seed = 1;
};

struct OutputConfig {
  std::string directory = "out";
  long long snapshot_stride = 0;  // snapshot every k-th report, 0 = none
  long long csv_stride = 1;       // CSV row every k-th report
};

struct RunConfig {
  Grid grid;
  NonlinearitySpec nonlinearity = make_gp();
  InitialConfig initial;
  SolverConfig solver;
  OutputConfig output;
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

struct RawEntry {
  std::string value;
  int line = 0;
  bool used = false;
};

class RawConfig {
 public:
  explicit RawConfig(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      const std::string stripped = trim(line);
      if (stripped.empty() || stripped[0] == '#') continue;
      const std::size_t eq = stripped.find('=');
      if (eq == std::string::npos)
        fail(lineno, "expected 'section.key = value'");
      const std::string key = trim(stripped.substr(0, eq));
      const std::string value = trim(stripped.substr(eq + 1));
      if (key.find('.') == std::string::npos)
        fail(lineno, "key '" + key + "' must be section.key");
      if (value.empty()) fail(lineno, "empty value for key '" + key + "'");
      auto [it, fresh] = entries_.try_emplace(key, RawEntry{value, lineno});
      if (!fresh)
        fail(lineno, "duplicate key '" + key + "' (first at line " +
                         std::to_string(it->second.line) + ")");
    }
  }

  [[noreturn]] static void fail(int line, const std::string& what) {
    throw std::invalid_argument("config line " + std::to_string(line) + ": " +
                                what);
  }

  bool has(const std::string& key) const { return entries_.count(key) > 0; }

  std::optional<std::string> take(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    it->second.used = true;
    return it->second.value;
  }

  std::string require(const std::string& key) {
    auto v = take(key);
    if (!v)
      throw std::invalid_argument("config: missing required key '" + key +
                                  "'");
    return *v;
  }

  int line_of(const std::string& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.line;
  }

  double as_double(const std::string& key, const std::string& raw) const {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(raw, &pos);
    } catch (const std::exception&) {
      fail(line_of(key), "key '" + key + "': not a number: '" + raw + "'");
    }
    if (pos != raw.size())
      fail(line_of(key), "key '" + key + "': trailing junk in '" + raw + "'");
    return v;
  }

  long long as_int(const std::string& key, const std::string& raw) const {
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(raw, &pos);
    } catch (const std::exception&) {
      fail(line_of(key), "key '" + key + "': not an integer: '" + raw + "'");
    }
    if (pos != raw.size())
      fail(line_of(key), "key '" + key + "': trailing junk in '" + raw + "'");
    return v;
  }

  bool as_bool(const std::string& key, const std::string& raw) const {
    if (raw == "true" || raw == "1") return true;
    if (raw == "false" || raw == "0") return false;
    fail(line_of(key), "key '" + key + "': expected true/false, got '" + raw +
                           "'");
  }

  std::vector<std::string> as_list(const std::string& raw) const {
    std::vector<std::string> out;
    std::string cur;
    for (char c : raw) {
      if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
        if (!cur.empty()) out.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
  }

  void reject_unused() const {
    int line = 0;
    std::string key;
    for (const auto& [k, e] : entries_) {
      if (!e.used && (line == 0 || e.line < line)) {
        line = e.line;
        key = k;
      }
    }
    if (line != 0) fail(line, "unknown key '" + key + "'");
  }

 private:
  std::map<std::string, RawEntry> entries_;
};

inline NonlinearitySpec build_nonlinearity(RawConfig& raw) {
  const std::string kind = raw.require("nonlinearity.kind");
  const auto num = [&](const std::string& p) {
    const std::string key = "nonlinearity." + p;
    return raw.as_double(key, raw.require(key));
  };
  if (kind == "gp") return make_gp();
  if (kind == "power") return make_power(num("lambda"), num("alpha"));
  if (kind == "competing")
    return make_competing(num("a1"), num("a2"), num("alpha1"), num("alpha2"));
  if (kind == "cubic_quintic")
    return make_cubic_quintic(num("alpha1"), num("alpha3"), num("alpha5"));
  if (kind == "saturated") return make_saturated(num("gamma"));
  if (kind == "exponential") return make_exponential(num("gamma"));
  if (kind == "transiting") return make_transiting(num("a"), num("gamma"));
  if (kind == "logarithmic") return make_logarithmic();
  if (kind == "zero") return make_zero();
  RawConfig::fail(raw.line_of("nonlinearity.kind"),
                  "unknown nonlinearity kind '" + kind + "'");
}

}  // namespace detail

inline RunConfig parse_config(const std::string& text) {
  detail::RawConfig raw(text);
  RunConfig cfg;

  const int dim =
      static_cast<int>(raw.as_int("grid.dim", raw.require("grid.dim")));
  std::vector<double> extents;
  for (const std::string& tok : raw.as_list(raw.require("grid.extents")))
    extents.push_back(raw.as_double("grid.extents", tok));
  std::vector<std::size_t> points;
  for (const std::string& tok : raw.as_list(raw.require("grid.points"))) {
    const long long p = raw.as_int("grid.points", tok);
    if (p <= 0)
      detail::RawConfig::fail(raw.line_of("grid.points"),
                              "grid.points must be positive");
    points.push_back(static_cast<std::size_t>(p));
  }
  try {
    cfg.grid = make_grid(dim, extents, points);
  } catch (const std::exception& e) {
    detail::RawConfig::fail(raw.line_of("grid.dim"), e.what());
  }

  cfg.nonlinearity = detail::build_nonlinearity(raw);

  cfg.initial.kind = raw.require("initial.kind");
  if (cfg.initial.kind != "constant" &&
      cfg.initial.kind != "plane_wave_perturbed" &&
      cfg.initial.kind != "black_soliton" &&
      cfg.initial.kind != "random_bounded")
    detail::RawConfig::fail(raw.line_of("initial.kind"),
                            "unknown initial kind '" + cfg.initial.kind + "'");
  if (auto v = raw.take("initial.farfield_re"))
    cfg.initial.farfield.real(raw.as_double("initial.farfield_re", *v));
  if (auto v = raw.take("initial.farfield_im"))
    cfg.initial.farfield.imag(raw.as_double("initial.farfield_im", *v));
  if (std::abs(std::abs(cfg.initial.farfield) - 1.0) > 1e-9)
    detail::RawConfig::fail(raw.line_of("initial.farfield_re"),
                            "far-field constant must have unit modulus");
  if (auto v = raw.take("initial.eps"))
    cfg.initial.eps = raw.as_double("initial.eps", *v);
  if (auto v = raw.take("initial.mode"))
    for (const std::string& tok : raw.as_list(*v))
      cfg.initial.mode.push_back(
          static_cast<long>(raw.as_int("initial.mode", tok)));
  if (auto v = raw.take("initial.energy_budget"))
    cfg.initial.energy_budget = raw.as_double("initial.energy_budget", *v);
  if (auto v = raw.take("initial.seed"))
    cfg.initial.seed =
        static_cast<std::uint64_t>(raw.as_int("initial.seed", *v));

  if (cfg.initial.kind == "black_soliton" && cfg.grid.dim != 1)
    detail::RawConfig::fail(raw.line_of("initial.kind"),
                            "black_soliton requires grid.dim = 1");
  if (cfg.initial.kind == "plane_wave_perturbed" &&
      cfg.initial.mode.size() != static_cast<std::size_t>(cfg.grid.dim))
    detail::RawConfig::fail(
        raw.line_of("initial.kind"),
        "plane_wave_perturbed needs initial.mode with one index per axis");

  cfg.solver.dt = raw.as_double("solver.dt", raw.require("solver.dt"));
  cfg.solver.t_end =
      raw.as_double("solver.t_end", raw.require("solver.t_end"));
  if (auto v = raw.take("solver.scheme")) {
    if (*v == "strang")
      cfg.solver.scheme = Scheme::strang;
    else if (*v == "picard")
      cfg.solver.scheme = Scheme::picard;
    else
      detail::RawConfig::fail(raw.line_of("solver.scheme"),
                              "unknown scheme '" + *v + "'");
  }
  if (auto v = raw.take("solver.picard_iters"))
    cfg.solver.picard_iters =
        static_cast<int>(raw.as_int("solver.picard_iters", *v));
  if (auto v = raw.take("solver.picard_quad_nodes"))
    cfg.solver.picard_quad_nodes =
        static_cast<int>(raw.as_int("solver.picard_quad_nodes", *v));
  if (auto v = raw.take("solver.blowup_E_threshold"))
    cfg.solver.blowup_E_threshold =
        raw.as_double("solver.blowup_E_threshold", *v);
  if (auto v = raw.take("solver.report_every"))
    cfg.solver.report_every = raw.as_int("solver.report_every", *v);
  if (auto v = raw.take("solver.dealias"))
    cfg.solver.dealias = raw.as_bool("solver.dealias", *v);
  try {
    validate_solver_config(cfg.solver);
  } catch (const std::exception& e) {
    detail::RawConfig::fail(raw.line_of("solver.dt"), e.what());
  }

  if (auto v = raw.take("output.directory")) cfg.output.directory = *v;
  if (auto v = raw.take("output.snapshot_stride"))
    cfg.output.snapshot_stride = raw.as_int("output.snapshot_stride", *v);
  if (auto v = raw.take("output.csv_stride"))
    cfg.output.csv_stride = raw.as_int("output.csv_stride", *v);
  if (cfg.output.snapshot_stride < 0 || cfg.output.csv_stride < 1)
    detail::RawConfig::fail(raw.line_of("output.csv_stride"),
                            "output strides must be nonnegative (csv >= 1)");

  raw.reject_unused();
  return cfg;
}

inline Field make_initial_field(const RunConfig& cfg) {
  const InitialConfig& ic = cfg.initial;
  if (ic.kind == "constant")
    return make_constant_field(cfg.grid, ic.farfield);
  if (ic.kind == "plane_wave_perturbed") {
    std::vector<double> k(cfg.grid.dim);
    for (int d = 0; d < cfg.grid.dim; ++d)
      k[d] = 2.0 * std::numbers::pi * static_cast<double>(ic.mode[d]) /
             cfg.grid.extent[d];
    return init_plane_wave_perturbed(cfg.grid, ic.farfield, ic.eps, k);
  }
  if (ic.kind == "black_soliton") return init_black_soliton_1d(cfg.grid);
  return init_random_bounded(cfg.grid, ic.farfield, ic.energy_budget, ic.seed);
}

// Reference config: every key with its default, suitable for --help output
// and as a starting point for user configs.
inline const char* default_config_text() {
  return
      "# grid\n"
      "grid.dim = 2\n"
      "grid.extents = 25.132741228718345, 25.132741228718345\n"
      "grid.points = 64, 64\n"
      "\n"
      "# nonlinearity: gp | power(lambda,alpha) | competing(a1,a2,alpha1,"
      "alpha2)\n"
      "#   | cubic_quintic(alpha1,alpha3,alpha5) | saturated(gamma)\n"
      "#   | exponential(gamma) | transiting(a,gamma) | logarithmic | zero\n"
      "nonlinearity.kind = gp\n"
      "\n"
      "# initial: constant | plane_wave_perturbed (eps, mode) |\n"
      "#   black_soliton (dim 1) | random_bounded (energy_budget, seed)\n"
      "initial.kind = random_bounded\n"
      "initial.farfield_re = 1.0\n"
      "initial.farfield_im = 0.0\n"
      "initial.energy_budget = 1.0\n"
      "initial.seed = 1\n"
      "\n"
      "# solver\n"
      "solver.dt = 0.001\n"
      "solver.t_end = 1.0\n"
      "solver.scheme = strang\n"
      "solver.picard_iters = 8\n"
      "solver.picard_quad_nodes = 8\n"
      "solver.blowup_E_threshold = 1e6\n"
      "solver.report_every = 100\n"
      "solver.dealias = true\n"
      "\n"
      "# output\n"
      "output.directory = out\n"
      "output.snapshot_stride = 0\n"
      "output.csv_stride = 1\n";
}

}  // namespace nlsfarf
