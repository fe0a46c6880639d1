#include "nlfv/config.hpp"
#include "nlfv/format.hpp"
#include "nlfv/harness.hpp"
#include "nlfv/output.hpp"
#include "nlfv/parallel.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>

using namespace nlfv;

namespace {

struct Options {
  std::string config;
  std::string snapshots;
  std::string diagnostics;
  std::string out_dir;
  std::string mode;
  int levels = 0;
  double dx0 = 0.0;
  std::string etas;
  bool reference = false;
  bool quiet = false;
};

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Config load(const Options& o) {
  Config c = parse_config(o.config);
  if (!o.snapshots.empty()) {
    c.snapshots = parse_real_list(o.snapshots, "--snapshots");
    const double t_end = c.dimension == 1 ? c.run1d.t_end : c.run2d.t_end;
    for (double t : c.snapshots)
      if (t < 0.0 || t > t_end * (1 + 1e-12))
        throw ConfigError("--snapshots: every time must lie in [0, t_end]");
  }
  if (!o.diagnostics.empty()) {
    const auto d = parse_diagnostics_level(o.diagnostics);
    c.run1d.diagnostics = c.run2d.diagnostics = d;
  }
  if (!o.mode.empty()) c.run1d.mode = c.run2d.mode = parse_convolution_mode(o.mode);
  if (!o.out_dir.empty()) c.output.dir = o.out_dir;
  if (o.levels) {
    if (o.levels < 2) throw ConfigError("--levels must be at least 2");
    c.study.levels = o.levels;
  }
  if (o.dx0 > 0.0) c.study.dx0 = o.dx0;
  if (!o.etas.empty()) c.study.etas = parse_real_list(o.etas, "--etas");
  return c;
}

void require_dimension(const Config& c, int d, const char* cmd) {
  if (c.dimension != d)
    throw ConfigError(std::string(cmd) + ": config '" + c.source + "' describes a " +
                      std::to_string(c.dimension) + "D problem");
}

void print_warnings(const std::vector<std::string>& w, bool quiet) {
  if (quiet) return;
  for (const auto& s : w) std::cerr << "warning: " << s << "\n";
}

std::string stem(const Config& c) { return c.output.prefix.empty() ? "" : c.output.prefix + "_"; }

void write_diagnostics(OutputSet& out, const Config& c, const DiagnosticsReport& r) {
  if (r.level == DiagnosticsLevel::Off) return;
  out.write(stem(c) + "diagnostics.csv", report_csv(r));
  out.write(stem(c) + "summary.json", report_summary_json(r) + "\n");
}

void summary_line(const DiagnosticsReport& r, bool quiet) {
  if (quiet || r.level == DiagnosticsLevel::Off) return;
  std::cout << "diagnostics: max mass drift " << format_double(r.max_mass_drift)
            << ", min " << format_double(*std::min_element(r.min.begin(), r.min.end()))
            << ", max " << format_double(*std::max_element(r.max.begin(), r.max.end()));
  if (r.level == DiagnosticsLevel::Full)
    std::cout << ", max entropy residual " << format_double(r.max_entropy_residual);
  std::cout << ", " << r.violations.size() << " violation(s)\n";
}

int cmd_run1d(const Options& o, const std::string& cmdline) {
  const auto t0 = Clock::now();
  Config c = load(o);
  require_dimension(c, 1, "run1d");
  OutputSet out(c.output.dir, cmdline, config_json(c));
  out.phase("setup", since(t0));

  const auto t1 = Clock::now();
  RunResult1D r = run_1d(c.run1d, c.snapshots);
  out.phase("solve", since(t1));
  print_warnings(r.warnings, o.quiet);

  const auto t2 = Clock::now();
  std::optional<Field1D> ref;
  if (o.reference) ref = local_reference_1d(c.run1d);
  out.phase("reference", since(t2));

  const auto t3 = Clock::now();
  const Grid1D& g = c.run1d.grid;
  std::vector<std::pair<std::string, const Field1D*>> curves;
  for (std::size_t s = 0; s < r.snapshots.size(); ++s) {
    const std::string t = format_double(r.snapshot_times[s]);
    out.write(stem(c) + "t" + t + ".csv", csv_1d(r.snapshots[s], g));
    curves.emplace_back("t = " + t, &r.snapshots[s]);
  }
  out.write(stem(c) + "final.csv", csv_1d(r.final_state, g));
  if (curves.empty()) curves.emplace_back("t = " + format_double(c.run1d.t_end), &r.final_state);
  if (ref) {
    out.write(stem(c) + "local_reference.csv", csv_1d(*ref, g));
    curves.emplace_back("local reference", &*ref);
  }
  if (c.output.svg) out.write(stem(c) + "profiles.svg", svg_profiles(curves, g, c.run1d.model.name));
  write_diagnostics(out, c, r.diagnostics);
  out.phase("write", since(t3));
  out.note("steps", std::to_string(r.steps));
  out.note("dt", format_double(r.dt));
  out.note("lambda", format_double(r.lambda));
  out.note("convolution", to_string(r.mode));
  out.note("threads", std::to_string(thread_count()));
  const std::string manifest = out.finish(stem(c));
  if (!o.quiet) {
    std::cout << "run1d: " << r.steps << " steps, dt = " << format_double(r.dt)
              << ", convolution " << to_string(r.mode) << "\n";
    summary_line(r.diagnostics, o.quiet);
    std::cout << "manifest: " << manifest << "\n";
  }
  return 0;
}

int cmd_run2d(const Options& o, const std::string& cmdline) {
  const auto t0 = Clock::now();
  Config c = load(o);
  require_dimension(c, 2, "run2d");
  OutputSet out(c.output.dir, cmdline, config_json(c));
  out.phase("setup", since(t0));

  const auto t1 = Clock::now();
  RunResult2D r = run_2d(c.run2d, c.snapshots);
  out.phase("solve", since(t1));
  print_warnings(r.warnings, o.quiet);

  const auto t3 = Clock::now();
  const Grid2D& g = c.run2d.grid;
  for (std::size_t s = 0; s < r.snapshots.size(); ++s) {
    const std::string t = format_double(r.snapshot_times[s]);
    out.write(stem(c) + "t" + t + ".csv", csv_2d(r.snapshots[s], g));
    if (c.output.pgm) out.write(stem(c) + "t" + t + ".pgm", pgm_heatmap(r.snapshots[s]));
  }
  if (r.snapshots.empty()) {
    out.write(stem(c) + "final.csv", csv_2d(r.final_state, g));
    if (c.output.pgm) out.write(stem(c) + "final.pgm", pgm_heatmap(r.final_state));
  }
  write_diagnostics(out, c, r.diagnostics);
  out.phase("write", since(t3));
  out.note("steps", std::to_string(r.steps));
  out.note("dt", format_double(r.dt));
  out.note("lambda_x", format_double(r.lambda_x));
  out.note("lambda_y", format_double(r.lambda_y));
  out.note("convolution", to_string(r.mode));
  out.note("threads", std::to_string(thread_count()));
  const std::string manifest = out.finish(stem(c));
  if (!o.quiet) {
    std::cout << "run2d: " << r.steps << " steps, dt = " << format_double(r.dt)
              << ", convolution " << to_string(r.mode) << "\n";
    summary_line(r.diagnostics, o.quiet);
    std::cout << "manifest: " << manifest << "\n";
  }
  return 0;
}

int cmd_converge(const Options& o, const std::string& cmdline) {
  const auto t0 = Clock::now();
  Config c = load(o);
  if (c.study.dx0) c.set_dx(*c.study.dx0);
  c.run1d.diagnostics = c.run2d.diagnostics = DiagnosticsLevel::Off;
  OutputSet out(c.output.dir, cmdline, config_json(c));
  out.phase("setup", since(t0));
  auto progress = [&](int level, double dx, double secs) {
    out.phase("level " + std::to_string(level), secs);
    if (!o.quiet)
      std::cerr << "level " << level << ": dx = " << format_double(dx) << " done in "
                << format_double(std::round(secs * 100) / 100) << " s\n";
  };
  const ConvergenceTable t = c.dimension == 1
                                 ? convergence_study(c.run1d, c.study.levels, progress)
                                 : convergence_study(c.run2d, c.study.levels, progress);
  print_warnings(t.warnings, o.quiet);
  const std::string csv = csv_convergence(t);
  out.write(stem(c) + "convergence.csv", csv);
  const std::string manifest = out.finish(stem(c));
  if (!o.quiet) std::cout << csv << "manifest: " << manifest << "\n";
  return 0;
}

int cmd_eta_sweep(const Options& o, const std::string& cmdline) {
  const auto t0 = Clock::now();
  Config c = load(o);
  require_dimension(c, 1, "eta-sweep");
  c.run1d.diagnostics = DiagnosticsLevel::Off;
  OutputSet out(c.output.dir, cmdline, config_json(c));
  out.phase("setup", since(t0));
  const auto t1 = Clock::now();
  const Field1D ref = local_reference_1d(c.run1d);
  out.phase("reference", since(t1));
  const auto t2 = Clock::now();
  const auto rows = eta_sweep(c.run1d, c.study.etas, &ref);
  out.phase("sweep", since(t2));

  const Grid1D& g = c.run1d.grid;
  std::vector<std::pair<std::string, const Field1D*>> curves;
  for (const auto& r : rows) {
    out.write(stem(c) + "eta" + format_double(r.eta) + ".csv", csv_1d(r.solution, g));
    curves.emplace_back("eta = " + format_double(r.eta), &r.solution);
  }
  out.write(stem(c) + "local_reference.csv", csv_1d(ref, g));
  curves.emplace_back("local reference", &ref);
  if (c.output.svg) out.write(stem(c) + "eta_sweep.svg", svg_profiles(curves, g, "eta sweep"));
  const std::string csv = csv_eta_sweep(rows);
  out.write(stem(c) + "eta_sweep.csv", csv);
  const std::string manifest = out.finish(stem(c));
  if (!o.quiet) std::cout << csv << "manifest: " << manifest << "\n";
  return 0;
}

int cmd_check(const Options& o, const std::string& cmdline) {
  const auto t0 = Clock::now();
  Options opts = o;
  if (opts.diagnostics.empty()) opts.diagnostics = "full";
  if (opts.mode.empty()) opts.mode = "direct";
  Config c = load(opts);
  OutputSet out(c.output.dir, cmdline, config_json(c));
  out.phase("setup", since(t0));

  std::vector<std::string> failures;
  const Model& m = c.dimension == 1 ? c.run1d.model : c.run2d.model;
  for (const auto& s : check_model_bounds(m)) failures.push_back("model: " + s);

  const auto t1 = Clock::now();
  DiagnosticsReport rep;
  if (c.dimension == 1) {
    RunResult1D r = run_1d(c.run1d);
    print_warnings(r.warnings, o.quiet);
    rep = std::move(r.diagnostics);
  } else {
    RunResult2D r = run_2d(c.run2d);
    print_warnings(r.warnings, o.quiet);
    rep = std::move(r.diagnostics);
  }
  out.phase("solve", since(t1));
  for (const auto& v : rep.violations)
    failures.push_back(v.kind + " at step " + std::to_string(v.step) + ", cell " +
                       std::to_string(v.cell) + ": " + format_double(v.value));
  if (!rep.total_variation.empty()) {
    const double tv0 = rep.total_variation.front();
    const double tvmax = *std::max_element(rep.total_variation.begin(), rep.total_variation.end());
    if (tvmax > tv0 + 1.0)
      failures.push_back("total variation grew from " + format_double(tv0) + " to " +
                         format_double(tvmax));
  }
  write_diagnostics(out, c, rep);
  const std::string manifest = out.finish(stem(c));
  if (!o.quiet) {
    summary_line(rep, false);
    for (const auto& f : failures) std::cout << "FAIL " << f << "\n";
    std::cout << (failures.empty() ? "check: pass" : "check: fail") << "\n";
    std::cout << "manifest: " << manifest << "\n";
  }
  return failures.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-volume solvers for nonlocal conservation laws "
               "u_t + div(f(u) nu(mu * beta(u))) = 0 in one and two space dimensions.\n"
               "Worker threads: NLFV_THREADS (0 or unset = all cores).\n"
               "Exit codes: 0 success, 1 invariant violation or numerical failure, "
               "2 configuration error."};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", o.config, "INI config file")->required();
    sub->add_option("-o,--out", o.out_dir, "output directory (overrides output.dir)");
    sub->add_option("--diagnostics", o.diagnostics, "diagnostics level: full, basic or off")
        ->check(CLI::IsMember({"full", "basic", "off"}));
    sub->add_option("--mode", o.mode, "convolution: auto, direct or fft")
        ->check(CLI::IsMember({"auto", "direct", "fft"}));
    sub->add_flag("-q,--quiet", o.quiet, "print nothing but errors");
  };

  auto* run1d = app.add_subcommand("run1d", "run a 1D simulation and write snapshots");
  common(run1d);
  run1d->add_option("--snapshots", o.snapshots, "comma separated output times");
  run1d->add_flag("--reference", o.reference, "also solve the local law with Godunov's scheme");

  auto* run2d = app.add_subcommand("run2d", "run a 2D simulation and write CSV/PGM snapshots");
  common(run2d);
  run2d->add_option("--snapshots", o.snapshots, "comma separated output times");

  auto* converge = app.add_subcommand("converge", "mesh-refinement study: dx,l1_distance,alpha");
  common(converge);
  converge->add_option("--levels", o.levels, "number of distances (levels + 1 runs)");
  converge->add_option("--dx0", o.dx0, "coarsest mesh width");

  auto* sweep = app.add_subcommand("eta-sweep", "L1 distance to the local solution per kernel radius");
  common(sweep);
  sweep->add_option("--etas", o.etas, "comma separated kernel radii");

  auto* check = app.add_subcommand("check", "run with full diagnostics and report invariant violations");
  common(check);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::string cmdline;
  for (int i = 0; i < argc; ++i) cmdline += (i ? " " : "") + std::string(argv[i]);

  try {
    configure_threads();
    if (run1d->parsed()) return cmd_run1d(o, cmdline);
    if (run2d->parsed()) return cmd_run2d(o, cmdline);
    if (converge->parsed()) return cmd_converge(o, cmdline);
    if (sweep->parsed()) return cmd_eta_sweep(o, cmdline);
    if (check->parsed()) return cmd_check(o, cmdline);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
