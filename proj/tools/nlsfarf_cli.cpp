// Command-line front end: run/resume simulations from plain-text configs,
// analyze snapshots, execute the scenario suite, and print the nonlinearity
// catalog. Exit codes: 0 success (or pass), 1 scenario failure, 2 usage
// error, 3 runtime error. Status flags such as blowup_flagged are data, not
// errors, and land in the verdict file of the run.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nlsfarf/nlsfarf.hpp"

namespace {

using namespace nlsfarf;

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

// C0 for the M column when the potential admits the constructive constants;
// runs with other potentials simply report M as nan.
std::optional<double> try_choose_C0(const NonlinearitySpec& spec) {
  try {
    return choose_C0(analyze_potential(spec, 10.0));
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

struct CsvSink {
  std::ofstream os;
  long long stride = 1;
  long long count = 0;
  explicit CsvSink(const std::string& path, long long stride_)
      : os(path, std::ios::trunc), stride(stride_) {
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    os << energy_csv_header() << "\n";
  }
  void push(const EnergyReport& r, const std::string& status) {
    if (count++ % stride == 0) os << energy_csv_row(r, status) << "\n";
  }
};

std::string snapshot_name(long long report_index) {
  std::ostringstream os;
  os << "snap_" << std::setw(6) << std::setfill('0') << report_index
     << ".nls";
  return os.str();
}

void write_run_verdict(const std::string& dir, const Trajectory& traj,
                       double t_start) {
  std::ofstream os(dir + "/run.verdict", std::ios::trunc);
  os.precision(17);
  os << "status = " << run_status_name(traj.status) << "\n";
  os << "t_start = " << t_start << "\n";
  os << "t_last = " << traj.times.back() << "\n";
  os << "reports = " << traj.reports.size() << "\n";
  os << "blowup_threshold_effective = " << traj.effective_blowup_threshold
     << "\n";
  os << "csv = run.csv\n";
  os << "final_snapshot = final.nls\n";
}

int cmd_run(const std::string& config_path) {
  const RunConfig cfg = parse_config(read_file(config_path));
  const Field f0 = make_initial_field(cfg);
  namespace fs = std::filesystem;
  fs::create_directories(cfg.output.directory);
  SpectralWorkspace ws(f0.grid);

  CsvSink csv(cfg.output.directory + "/run.csv", cfg.output.csv_stride);
  long long report_index = 0;
  Field last = f0;
  double last_t = 0.0;
  RunOptions opts;
  opts.C0 = try_choose_C0(cfg.nonlinearity);
  opts.on_report = [&](const Field& f, const EnergyReport& r, long long) {
    csv.push(r, "running");
    if (cfg.output.snapshot_stride > 0 &&
        report_index % cfg.output.snapshot_stride == 0)
      write_snapshot(f, r.t,
                     cfg.output.directory + "/" + snapshot_name(report_index));
    ++report_index;
    last = f;
    last_t = r.t;
  };
  const Trajectory traj = run(f0, cfg.nonlinearity, cfg.solver, ws, opts);
  write_snapshot(last, last_t, cfg.output.directory + "/final.nls");
  write_run_verdict(cfg.output.directory, traj, 0.0);
  std::cout << "status = " << run_status_name(traj.status) << "\n";
  return 0;
}

int cmd_resume(const std::string& snapshot_path,
               const std::string& config_path) {
  const RunConfig cfg = parse_config(read_file(config_path));
  const Snapshot snap = read_snapshot(snapshot_path);
  namespace fs = std::filesystem;
  fs::create_directories(cfg.output.directory);
  SpectralWorkspace ws(snap.field.grid);

  SolverConfig scfg = cfg.solver;
  const long long k0 = std::llround(snap.time / scfg.dt);
  if (std::abs(static_cast<double>(k0) * scfg.dt - snap.time) >
      1e-9 * std::max(1.0, std::abs(snap.time)))
    throw std::runtime_error(
        "snapshot time is not an integer multiple of solver.dt");
  if (!(cfg.solver.t_end > snap.time + 0.5 * scfg.dt))
    throw std::runtime_error("snapshot is already at or past solver.t_end");
  scfg.t_end = cfg.solver.t_end - static_cast<double>(k0) * scfg.dt;

  CsvSink csv(cfg.output.directory + "/resume.csv", cfg.output.csv_stride);
  long long report_index = 0;
  Field last = snap.field;
  double last_t = snap.time;
  RunOptions opts;
  opts.C0 = try_choose_C0(cfg.nonlinearity);
  opts.step_offset = k0;
  opts.on_report = [&](const Field& f, const EnergyReport& r, long long) {
    csv.push(r, "running");
    if (cfg.output.snapshot_stride > 0 &&
        report_index % cfg.output.snapshot_stride == 0)
      write_snapshot(f, r.t,
                     cfg.output.directory + "/" + snapshot_name(report_index));
    ++report_index;
    last = f;
    last_t = r.t;
  };
  const Trajectory traj = run(snap.field, cfg.nonlinearity, scfg, ws, opts);
  write_snapshot(last, last_t, cfg.output.directory + "/final.nls");
  write_run_verdict(cfg.output.directory, traj, snap.time);
  std::cout << "status = " << run_status_name(traj.status) << "\n";
  return 0;
}

int cmd_analyze(const std::string& snapshot_path,
                const std::string& config_path) {
  const Snapshot snap = read_snapshot(snapshot_path);
  NonlinearitySpec spec = make_gp();
  if (!config_path.empty())
    spec = parse_config(read_file(config_path)).nonlinearity;
  SpectralWorkspace ws(snap.field.grid);
  const EnergyReport r =
      full_report(snap.field, spec, try_choose_C0(spec), ws, snap.time);
  std::cout << energy_csv_header() << "\n"
            << energy_csv_row(r, "analyzed") << "\n";
  return 0;
}

int cmd_scenario(const std::string& name, const std::string& outdir) {
  const auto print = [](const ScenarioResult& r) {
    std::cout << r.name << ": " << (r.passed ? "PASS" : "FAIL") << "\n";
  };
  bool all_passed = true;
  if (name == "all") {
    for (const ScenarioResult& r : run_all_scenarios(outdir)) {
      print(r);
      all_passed = all_passed && r.passed;
    }
  } else {
    const ScenarioResult r = run_scenario(name, outdir);
    print(r);
    all_passed = r.passed;
  }
  return all_passed ? 0 : 1;
}

int cmd_catalog() {
  struct Entry {
    std::string label;
    NonlinearitySpec spec;
  };
  const std::vector<Entry> entries = {
      {"gp", make_gp()},
      {"power_defocusing", make_power(1.0, 1.5)},
      {"power_focusing", make_power(-1.0, 1.0)},
      {"competing_mild", make_competing(1.0, 1.2, 1.5, 0.5)},
      {"competing_negative_well", make_competing(1.0, 2.0, 1.5, 0.5)},
      {"cubic_quintic", make_cubic_quintic(1.0, 4.0, 3.0)},
      {"saturated", make_saturated(1.0)},
      {"exponential", make_exponential(1.0)},
      {"transiting", make_transiting(0.1, 0.5)},
      {"logarithmic", make_logarithmic()},
      {"zero", make_zero()},
  };
  std::cout.precision(17);
  for (const Entry& e : entries) {
    std::cout << "[" << e.label << "]\n";
    for (const auto& [k, v] : spec_to_key_values(e.spec))
      std::cout << "  " << k << " = " << v << "\n";
    try {
      const PotentialStructure st = analyze_potential(e.spec, 10.0);
      std::cout << "  f_prime_at_1 = " << st.fprime1 << "\n";
      std::cout << "  defocusing = " << (st.defocusing ? "true" : "false")
                << "\n";
      std::cout << "  roots_of_f =";
      for (std::size_t i = 0; i < st.roots_of_f.size(); ++i)
        std::cout << " " << st.roots_of_f[i]
                  << (st.root_tangential[i] ? " (tangential)" : "");
      std::cout << "\n";
      if (st.rho2)
        std::cout << "  negative_F_below = " << *st.rho2 << "\n";
      std::cout << "  F_positive_above_one = "
                << (st.F_positive_above_one ? "true" : "false") << "\n";
      if (st.window_established)
        std::cout << "  convexity_window_delta = "
                  << st.convexity_window_delta << "\n  C1 = " << st.C1
                  << "\n";
      else
        std::cout << "  convexity_window = none within the constant cap\n";
    } catch (const std::exception& ex) {
      std::cout << "  structure_analysis = unavailable (" << ex.what()
                << ")\n";
    }
    try {
      const KatoReport kr = check_kato(e.spec);
      std::cout << "  kato_alpha = " << kr.alpha_used << "\n";
      std::cout << "  kato_sup_f_ratio = " << kr.max_ratio_f << "\n";
      std::cout << "  kato_sup_rho_fprime_ratio = " << kr.max_ratio_rho_fprime
                << "\n";
      std::cout << "  kato_growth_detected = "
                << (kr.growth_detected ? "true" : "false") << "\n";
      std::cout << "  kato_passed = " << (kr.passed ? "true" : "false")
                << "\n";
    } catch (const std::exception& ex) {
      std::cout << "  kato = unavailable (" << ex.what() << ")\n";
    }
    std::cout << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Simulation and diagnostics for nonlinear Schrodinger equations with "
      "nonvanishing far-field conditions"};
  app.require_subcommand(1);
  app.footer(std::string("Reference config with all defaults:\n\n") +
             default_config_text());

  std::string config_path, snapshot_path, scenario_name, outdir = "out";

  CLI::App* c_run = app.add_subcommand("run", "Run a simulation from a config");
  c_run->add_option("config", config_path, "config file")
      ->required()
      ->check(CLI::ExistingFile);

  CLI::App* c_resume =
      app.add_subcommand("resume", "Continue a run from a snapshot");
  c_resume->add_option("snapshot", snapshot_path, "snapshot file")
      ->required()
      ->check(CLI::ExistingFile);
  c_resume->add_option("config", config_path, "config file")
      ->required()
      ->check(CLI::ExistingFile);

  CLI::App* c_analyze =
      app.add_subcommand("analyze", "Print the diagnostics row of a snapshot");
  c_analyze->add_option("snapshot", snapshot_path, "snapshot file")
      ->required()
      ->check(CLI::ExistingFile);
  c_analyze
      ->add_option("config", config_path,
                   "config supplying the nonlinearity (default: gp)")
      ->check(CLI::ExistingFile);

  CLI::App* c_scenario =
      app.add_subcommand("scenario", "Run one scenario or 'all'");
  c_scenario->add_option("name", scenario_name, "scenario name or 'all'")
      ->required();
  c_scenario->add_option("--outdir", outdir, "artifact directory");

  CLI::App* c_catalog =
      app.add_subcommand("catalog", "Print the nonlinearity catalog");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (c_run->parsed()) return cmd_run(config_path);
    if (c_resume->parsed()) return cmd_resume(snapshot_path, config_path);
    if (c_analyze->parsed()) return cmd_analyze(snapshot_path, config_path);
    if (c_catalog->parsed()) return cmd_catalog();
    if (c_scenario->parsed()) {
      bool known = scenario_name == "all";
      for (const std::string& n : scenario_names())
        known = known || n == scenario_name;
      if (!known) {
        std::cerr << "unknown scenario '" << scenario_name
                  << "'; available:";
        for (const std::string& n : scenario_names()) std::cerr << " " << n;
        std::cerr << " all\n";
        return 2;
      }
      return cmd_scenario(scenario_name, outdir);
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 3;
  }
  return 2;
}
