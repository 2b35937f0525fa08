// Config parsing, checkpoint serialization, the job pool, and the seeded
// random stream: everything a resumed or scripted run depends on.

#include <catch2/catch_amalgamated.hpp>

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "nlsfarf/config.hpp"
#include "nlsfarf/parallel.hpp"
#include "nlsfarf/rng.hpp"
#include "nlsfarf/snapshot.hpp"

using namespace nlsfarf;
using Catch::Matchers::ContainsSubstring;

namespace {

// Fixture text; keys sit on known line numbers so error messages can be
// pinned (grid.dim on line 2, solver.dt on line 7).
const char* kBaseConfig =
    "# test fixture\n"
    "grid.dim = 2\n"
    "grid.extents = 16.0, 16.0\n"
    "grid.points = 16, 16\n"
    "nonlinearity.kind = gp\n"
    "initial.kind = constant\n"
    "solver.dt = 0.001\n"
    "solver.t_end = 0.1\n";

std::string with_line(const std::string& extra) {
  return std::string(kBaseConfig) + extra + "\n";
}

std::filesystem::path temp_file(const char* name) {
  return std::filesystem::temp_directory_path() / name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  REQUIRE(is);
  return std::string((std::istreambuf_iterator<char>(is)),
                     std::istreambuf_iterator<char>());
}

void spit(const std::filesystem::path& p, const std::string& bytes) {
  std::ofstream os(p, std::ios::binary | std::ios::trunc);
  REQUIRE(os);
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

// RAII guard so env-var tests cannot leak into later test cases.
class EnvGuard {
 public:
  explicit EnvGuard(const char* name) : name_(name) {
    if (const char* v = std::getenv(name)) saved_ = v;
  }
  ~EnvGuard() {
    if (saved_.empty())
      unsetenv(name_);
    else
      setenv(name_, saved_.c_str(), 1);
  }

 private:
  const char* name_;
  std::string saved_;
};

}  // namespace

TEST_CASE("config parsing fills defaults and validates keys") {
  SECTION("minimal config leaves documented defaults in place") {
    const RunConfig cfg = parse_config(kBaseConfig);
    CHECK(cfg.grid.dim == 2);
    CHECK(cfg.grid.extent[0] == 16.0);
    CHECK(cfg.grid.points[1] == 16);
    CHECK(cfg.nonlinearity.kind == NonlinKind::gp);
    CHECK(cfg.initial.kind == "constant");
    CHECK(cfg.initial.farfield == cplx{1.0, 0.0});
    CHECK(cfg.solver.scheme == Scheme::strang);
    CHECK(cfg.solver.picard_iters == 8);
    CHECK(cfg.solver.report_every == 100);
    CHECK(cfg.solver.dealias);
    CHECK(cfg.output.directory == "out");
    CHECK(cfg.output.snapshot_stride == 0);
    CHECK(cfg.output.csv_stride == 1);
  }

  SECTION("the shipped reference config parses cleanly") {
    const RunConfig cfg = parse_config(default_config_text());
    CHECK(cfg.grid.dim == 2);
    CHECK(cfg.grid.points[0] == 64);
    CHECK(cfg.initial.kind == "random_bounded");
    CHECK(cfg.solver.blowup_E_threshold == 1e6);
  }

  SECTION("unknown keys are rejected with their line number") {
    REQUIRE_THROWS_WITH(parse_config(with_line("solver.dtt = 5")),
                        ContainsSubstring("unknown key 'solver.dtt'") &&
                            ContainsSubstring("line 9"));
  }

  SECTION("duplicate keys are rejected citing both lines") {
    REQUIRE_THROWS_WITH(parse_config(with_line("solver.dt = 0.002")),
                        ContainsSubstring("duplicate key 'solver.dt'") &&
                            ContainsSubstring("first at line 7"));
  }

  SECTION("missing required keys are named") {
    std::string txt(kBaseConfig);
    const std::size_t at = txt.find("solver.dt = 0.001\n");
    txt.erase(at, std::string("solver.dt = 0.001\n").size());
    REQUIRE_THROWS_WITH(parse_config(txt),
                        ContainsSubstring("missing required key 'solver.dt'"));
  }

  SECTION("malformed lines and values") {
    REQUIRE_THROWS_WITH(parse_config(with_line("just some words")),
                        ContainsSubstring("expected 'section.key = value'"));
    REQUIRE_THROWS_WITH(parse_config(with_line("dt = 1")),
                        ContainsSubstring("must be section.key"));
    REQUIRE_THROWS_WITH(parse_config(with_line("output.directory =")),
                        ContainsSubstring("empty value"));
    std::string bad(kBaseConfig);
    bad.replace(bad.find("0.001"), 5, "banan");
    REQUIRE_THROWS_WITH(parse_config(bad), ContainsSubstring("not a number"));
    bad = kBaseConfig;
    bad.replace(bad.find("0.001"), 5, "0.01x");
    REQUIRE_THROWS_WITH(parse_config(bad), ContainsSubstring("trailing junk"));
  }

  SECTION("booleans and scheme names") {
    RunConfig cfg = parse_config(with_line("solver.dealias = false"));
    CHECK_FALSE(cfg.solver.dealias);
    cfg = parse_config(with_line("solver.scheme = picard"));
    CHECK(cfg.solver.scheme == Scheme::picard);
    REQUIRE_THROWS_WITH(parse_config(with_line("solver.scheme = rk4")),
                        ContainsSubstring("unknown scheme 'rk4'"));
    REQUIRE_THROWS_WITH(parse_config(with_line("solver.dealias = maybe")),
                        ContainsSubstring("expected true/false"));
  }

  SECTION("lists accept commas or spaces") {
    std::string txt(kBaseConfig);
    txt.replace(txt.find("16.0, 16.0"), 10, "16.0 8.0  ");
    txt.replace(txt.find("16, 16"), 6, "32, 16");
    const RunConfig cfg = parse_config(txt);
    CHECK(cfg.grid.extent[1] == 8.0);
    CHECK(cfg.grid.points[0] == 32);
  }

  SECTION("grid errors carry the config line") {
    std::string txt(kBaseConfig);
    txt.replace(txt.find("16, 16"), 6, "15, 16");
    REQUIRE_THROWS_WITH(parse_config(txt), ContainsSubstring("config line 2"));
    txt = kBaseConfig;
    txt.replace(txt.find("16, 16"), 6, "-4, 16");
    REQUIRE_THROWS_WITH(parse_config(txt),
                        ContainsSubstring("grid.points must be positive"));
  }

  SECTION("far-field constant must sit on the unit circle") {
    REQUIRE_THROWS_WITH(parse_config(with_line("initial.farfield_re = 0.5")),
                        ContainsSubstring("unit modulus"));
    const RunConfig cfg = parse_config(with_line(
        "initial.farfield_re = 0.6\ninitial.farfield_im = 0.8"));
    CHECK(cfg.initial.farfield == cplx{0.6, 0.8});
  }

  SECTION("initial-data semantic checks") {
    std::string txt(kBaseConfig);
    txt.replace(txt.find("constant"), 8, "black_soliton");
    REQUIRE_THROWS_WITH(parse_config(txt),
                        ContainsSubstring("black_soliton requires grid.dim = 1"));
    txt = kBaseConfig;
    txt.replace(txt.find("initial.kind = constant"),
                std::string("initial.kind = constant").size(),
                "initial.kind = plane_wave_perturbed\ninitial.mode = 1");
    REQUIRE_THROWS_WITH(parse_config(txt),
                        ContainsSubstring("one index per axis"));
  }

  SECTION("solver validation failures point at the solver block") {
    std::string txt(kBaseConfig);
    txt.replace(txt.find("solver.t_end = 0.1"),
                std::string("solver.t_end = 0.1").size(),
                "solver.t_end = 0.0001");
    REQUIRE_THROWS_WITH(parse_config(txt),
                        ContainsSubstring("dt must not exceed t_end"));
  }

  SECTION("output strides are range checked") {
    REQUIRE_THROWS_WITH(parse_config(with_line("output.csv_stride = 0")),
                        ContainsSubstring("output strides"));
    const RunConfig cfg =
        parse_config(with_line("output.snapshot_stride = 3"));
    CHECK(cfg.output.snapshot_stride == 3);
  }
}

TEST_CASE("initial field construction follows the config") {
  SECTION("constant") {
    const RunConfig cfg = parse_config(with_line(
        "initial.farfield_re = 0.6\ninitial.farfield_im = 0.8"));
    const Field f = make_initial_field(cfg);
    CHECK(f.farfield == cplx{0.6, 0.8});
    CHECK(f.values[5] == cplx{0.6, 0.8});
  }

  SECTION("seeded random data reproduces the library call bit for bit") {
    std::string txt(kBaseConfig);
    txt.replace(txt.find("initial.kind = constant"),
                std::string("initial.kind = constant").size(),
                "initial.kind = random_bounded\ninitial.energy_budget = 0.5\n"
                "initial.seed = 77");
    const RunConfig cfg = parse_config(txt);
    const Field got = make_initial_field(cfg);
    const Field want =
        init_random_bounded(cfg.grid, cplx{1.0, 0.0}, 0.5, 77);
    REQUIRE(got.values.size() == want.values.size());
    for (std::size_t j = 0; j < got.values.size(); ++j)
      REQUIRE(got.values[j] == want.values[j]);
  }

  SECTION("plane-wave modes are integer multiples of the box frequency") {
    const char* txt =
        "grid.dim = 1\n"
        "grid.extents = 16.0\n"
        "grid.points = 32\n"
        "nonlinearity.kind = gp\n"
        "initial.kind = plane_wave_perturbed\n"
        "initial.eps = 0.05\n"
        "initial.mode = 2\n"
        "solver.dt = 0.001\n"
        "solver.t_end = 0.1\n";
    const RunConfig cfg = parse_config(txt);
    const Field got = make_initial_field(cfg);
    const double k = 2.0 * std::numbers::pi * 2.0 / 16.0;
    const Field want =
        init_plane_wave_perturbed(cfg.grid, cplx{1.0, 0.0}, 0.05, {k});
    for (std::size_t j = 0; j < got.values.size(); ++j)
      REQUIRE(got.values[j] == want.values[j]);
  }

  SECTION("soliton profile carries the unit far field") {
    const char* txt =
        "grid.dim = 1\n"
        "grid.extents = 60.0\n"
        "grid.points = 512\n"
        "nonlinearity.kind = gp\n"
        "initial.kind = black_soliton\n"
        "solver.dt = 0.001\n"
        "solver.t_end = 0.1\n";
    const Field f = make_initial_field(parse_config(txt));
    CHECK(f.farfield == cplx{1.0, 0.0});
    CHECK(f.grid.points[0] == 1024);  // profile needs the doubled period
  }
}

TEST_CASE("checkpoint files round-trip bit for bit") {
  const Grid g = make_grid(2, {12.0, 10.0}, {16, 8});
  const Field f =
      init_random_bounded(g, std::polar(1.0, 0.7), 0.9, 424242);
  const double t = 0.1 + 1.0 / 3.0;
  const auto path = temp_file("nlsfarf_roundtrip.nls");
  write_snapshot(f, t, path.string());

  const Snapshot s = read_snapshot(path.string());
  CHECK(s.time == t);
  CHECK(s.field.grid == g);
  CHECK(s.field.farfield == f.farfield);
  REQUIRE(s.field.values.size() == f.values.size());
  std::size_t mismatches = 0;
  for (std::size_t j = 0; j < f.values.size(); ++j)
    if (s.field.values[j] != f.values[j]) ++mismatches;
  CHECK(mismatches == 0);
}

TEST_CASE("checkpoint reader fails loudly on damage") {
  const Grid g = make_grid(2, {12.0, 10.0}, {8, 8});
  const Field f = init_random_bounded(g, cplx{1.0, 0.0}, 0.5, 7);
  const auto path = temp_file("nlsfarf_damage.nls");
  write_snapshot(f, 1.5, path.string());
  const std::string good = slurp(path);
  const auto damaged = temp_file("nlsfarf_damaged.nls");

  SECTION("missing file") {
    REQUIRE_THROWS_WITH(read_snapshot("/nonexistent/dir/x.nls"),
                        ContainsSubstring("cannot open"));
  }

  SECTION("bad magic") {
    std::string bytes = good;
    bytes[0] = 'X';
    spit(damaged, bytes);
    REQUIRE_THROWS_WITH(read_snapshot(damaged.string()),
                        ContainsSubstring("bad magic at byte 0"));
  }

  SECTION("unsupported version") {
    std::string bytes = good;
    bytes[8] = 2;  // little-endian u32 low byte
    spit(damaged, bytes);
    REQUIRE_THROWS_WITH(read_snapshot(damaged.string()),
                        ContainsSubstring("unsupported version 2 at byte 8"));
  }

  SECTION("invalid header fields carry their byte offset") {
    std::string bytes = good;
    bytes[12] = 4;  // dim
    spit(damaged, bytes);
    REQUIRE_THROWS_WITH(read_snapshot(damaged.string()),
                        ContainsSubstring("invalid dim 4 at byte 12"));
    bytes = good;
    bytes[16] = 7;  // first axis point count
    spit(damaged, bytes);
    REQUIRE_THROWS_WITH(read_snapshot(damaged.string()),
                        ContainsSubstring("invalid point count at byte 16"));
  }

  SECTION("truncated payload names the payload offset") {
    spit(damaged, good.substr(0, good.size() - 8));
    REQUIRE_THROWS_WITH(read_snapshot(damaged.string()),
                        ContainsSubstring("truncated file") &&
                            ContainsSubstring("payload missing at byte 64"));
  }

  SECTION("truncated header names the field being read") {
    spit(damaged, good.substr(0, 10));
    REQUIRE_THROWS_WITH(read_snapshot(damaged.string()),
                        ContainsSubstring("truncated file") &&
                            ContainsSubstring("version"));
  }

  SECTION("trailing bytes are rejected") {
    spit(damaged, good + "zzzz");
    REQUIRE_THROWS_WITH(read_snapshot(damaged.string()),
                        ContainsSubstring("4 trailing bytes"));
  }

  SECTION("non-finite payload values are rejected") {
    std::string bytes = good;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::memcpy(bytes.data() + 64, &nan, 8);
    spit(damaged, bytes);
    REQUIRE_THROWS_AS(read_snapshot(damaged.string()), std::exception);
  }
}

TEST_CASE("worker pool") {
  EnvGuard guard("NLSFARF_THREADS");

  SECTION("thread budget honors the environment cap") {
    setenv("NLSFARF_THREADS", "3", 1);
    CHECK(thread_budget() == 3);
    setenv("NLSFARF_THREADS", "0", 1);
    CHECK(thread_budget() >= 1);  // 0 means auto
    setenv("NLSFARF_THREADS", "abc", 1);
    CHECK(thread_budget() >= 1);  // unparsable falls back to auto
    unsetenv("NLSFARF_THREADS");
    CHECK(thread_budget() >= 1);
  }

  SECTION("every job runs exactly once") {
    setenv("NLSFARF_THREADS", "4", 1);
    std::vector<std::atomic<int>> hits(64);
    std::vector<std::function<void()>> jobs;
    for (std::size_t i = 0; i < hits.size(); ++i)
      jobs.push_back([&hits, i] { hits[i].fetch_add(1); });
    run_parallel(jobs);
    for (const auto& h : hits) REQUIRE(h.load() == 1);
    run_parallel({});  // empty list is a no-op
  }

  SECTION("the first failure in job order is rethrown after completion") {
    for (const char* threads : {"1", "4"}) {
      setenv("NLSFARF_THREADS", threads, 1);
      std::atomic<int> done{0};
      std::vector<std::function<void()>> jobs;
      for (int i = 0; i < 32; ++i)
        jobs.push_back([&done, i] {
          if (i == 10) throw std::runtime_error("job10");
          if (i == 20) throw std::runtime_error("job20");
          done.fetch_add(1);
        });
      REQUIRE_THROWS_WITH(run_parallel(jobs), ContainsSubstring("job10"));
      REQUIRE(done.load() == 30);
    }
  }
}

TEST_CASE("seeded random stream is reproducible") {
  Rng a(1234), b(1234), c(999);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 16; ++i) {
    const double ua = a.uniform();
    const double ub = b.uniform();
    const double uc = c.uniform();
    all_equal = all_equal && ua == ub;
    any_diff = any_diff || ua != uc;
    REQUIRE(ua >= 0.0);
    REQUIRE(ua < 1.0);
  }
  CHECK(all_equal);
  CHECK(any_diff);

  Rng g1(55), g2(55);
  for (int i = 0; i < 16; ++i) REQUIRE(g1.gaussian() == g2.gaussian());
}
