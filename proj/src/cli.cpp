#include "mfsplateau/cli.hpp"

#include <filesystem>
#include <optional>
#include <ostream>

#include <fmt/format.h>

#include "CLI11.hpp"

namespace mfsplateau {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

ApproximateSurface final_surface(const RunConfig& config, const SolveReport& report) {
  return build_surface(MfsBasis(config.n, config.radius), make_curve(config.curve), report.final_config);
}

SolveReport solve_config(const RunConfig& config) {
  config.validate();
  const MfsBasis basis(config.n, config.radius);
  const BoundaryCurve curve = make_curve(config.curve);
  return nesterov_run(basis, curve, config.initial_configuration(), config.optimizer(), config.diagnostics);
}

}  // namespace

void cmd_solve(const RunConfig& config, std::ostream& log) {
  const SolveReport report = solve_config(config);
  const fs::path dir(config.output.dir);
  write_text(dir / "report.json", dump_json(report_to_json(report, config)));
  if (config.output.mesh || config.output.grid) {
    const auto surface = final_surface(config, report);
    if (config.output.mesh) {
      const auto mesh = sample_mesh(surface, config.output.mesh_n_r, config.output.mesh_n_theta);
      write_text(dir / "mesh.obj", mesh_obj(mesh));
      write_text(dir / "mesh_scalars.csv", mesh_scalars_csv(mesh));
    }
    if (config.output.grid) {
      GridSpec g = config.grid;
      g.field = GridField::dilatation;
      write_text(dir / "grid_dilatation.csv", grid_csv(surface, g));
    }
  }
  log << fmt::format("solve: E = {:.6e}, D = {:.10g}, sup|Phi| (|z| <= {}) = {:.3e}, {} iterations, {}\n",
                     report.final_energy, report.dirichlet_energy, config.diagnostics.interior_radius,
                     report.dilatation_sup_interior, report.iters_run, (dir / "report.json").string());
}

void cmd_sweep(const RunConfig& config, std::ostream& log) {
  config.validate();
  if (config.sweep.s_values.empty()) throw ConfigError("sweep needs at least one s value");
  SweepSpec spec{config.sweep.s_values, config.sweep.m, config.batch()};
  const auto reports = sweep(spec);
  const fs::path dir(config.output.dir);

  json runs = json::array();
  for (std::size_t i = 0; i < reports.size(); ++i) {
    RunConfig run_config = config;
    run_config.initial.kind = InitialSpec::Kind::fourier;
    run_config.initial.s = spec.s_values[i];
    run_config.initial.m = spec.m;
    const auto name = fmt::format("run_{:03d}.json", i);
    write_text(dir / name, dump_json(report_to_json(reports[i], run_config)));
    runs.push_back({{"s", spec.s_values[i]},
                    {"report", name},
                    {"dirichlet_energy", std::isfinite(reports[i].dirichlet_energy) ? json(reports[i].dirichlet_energy)
                                                                                     : json(nullptr)},
                    {"final_energy", std::isfinite(reports[i].final_energy) ? json(reports[i].final_energy)
                                                                             : json(nullptr)},
                    {"stop_reason", reports[i].stop_reason},
                    {"monotone", reports[i].monotone}});
  }
  const auto clusters = classify(reports, config.sweep.digits, config.sweep.fingerprint);
  json summary;
  summary["schema_version"] = kSchemaVersion;
  summary["config"] = to_json(config);
  summary["runs"] = runs;
  summary["clusters"] = clusters_to_json(clusters, reports);
  write_text(dir / "summary.json", dump_json(summary));

  std::string energies;
  for (const auto& c : clusters) energies += fmt::format(" {:.{}g}", c.energy_mean, config.sweep.digits + 2);
  log << fmt::format("sweep: {} runs, {} clusters, Dirichlet energies:{}\n", reports.size(), clusters.size(),
                     energies);
}

void cmd_random_search(const RunConfig& config, std::ostream& log) {
  config.validate();
  RandomSearchSpec spec;
  spec.samples = config.random_search.samples;
  spec.seed = config.random_search.seed;
  spec.n_knots = config.random_search.knots;
  spec.batch = config.batch();
  const auto reports = random_search(spec);
  const fs::path dir(config.output.dir);

  std::string csv = "sample,dirichlet_energy,final_energy,monotone,stop_reason\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    csv += fmt::format("{},{},{},{},{}\n", i, format_double(r.dirichlet_energy), format_double(r.final_energy),
                       r.monotone ? 1 : 0, r.stop_reason.rfind("numerical_error", 0) == 0 ? "numerical_error"
                                                                                           : r.stop_reason);
  }
  write_text(dir / "energies.csv", csv);

  const auto clusters = classify(reports, config.random_search.digits);
  json out;
  out["schema_version"] = kSchemaVersion;
  out["config"] = to_json(config);
  out["initial_spline"] = {{"kind", "periodic monotone cubic Hermite"},
                           {"knots", spec.n_knots},
                           {"sample_streams", "child_seed(seed, index)"}};
  out["clusters"] = clusters_to_json(clusters, reports);
  write_text(dir / "clusters.json", dump_json(out));
  log << fmt::format("random-search: {} samples, {} clusters\n", reports.size(), clusters.size());
}

void cmd_grid(const RunConfig& config, std::ostream& log) {
  const SolveReport report = solve_config(config);
  const auto surface = final_surface(config, report);
  const fs::path path = fs::path(config.output.dir) /
                        (config.grid.field == GridField::dilatation ? "grid_dilatation.csv" : "grid_mean_curvature.csv");
  write_text(path, grid_csv(surface, config.grid));
  log << fmt::format("grid: {} x {} cells, {}\n", config.grid.n_r + 1, config.grid.n_theta, path.string());
}

namespace {

struct Overrides {
  std::string config_path;
  std::optional<int> n;
  std::optional<double> radius;
  std::optional<double> rho;
  std::optional<double> eta;
  std::optional<int> iters;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::optional<std::string> out;
  // subcommand-specific
  std::vector<double> s_values;
  std::optional<int> m;
  std::optional<int> digits;
  std::optional<int> samples;
  std::optional<int> knots;
  std::optional<std::string> field;
  std::optional<int> n_r;
  std::optional<int> n_theta;
  bool mesh = false;
};

void add_common(CLI::App* sub, Overrides& o) {
  sub->add_option("--config", o.config_path, "JSON run configuration (defaults are used when omitted)");
  sub->add_option("--n", o.n, "number of collocation and singular points");
  sub->add_option("--radius", o.radius, "radius R > 1 of the singular-point circle");
  sub->add_option("--rho", o.rho, "energy sampling radius in (0, 1)");
  sub->add_option("--eta", o.eta, "Nesterov step size in (0, 1)");
  sub->add_option("--iters", o.iters, "number of Nesterov iterations");
  sub->add_option("--seed", o.seed, "seed for random initial configurations");
  sub->add_option("--jobs", o.jobs, "worker threads for sweep and random-search");
  sub->add_option("--out", o.out, "output directory");
}

RunConfig resolve(const std::string& command, const Overrides& o) {
  RunConfig c = o.config_path.empty() ? RunConfig{} : load_config(o.config_path);
  if (o.n) c.n = *o.n;
  if (o.radius) c.radius = *o.radius;
  if (o.rho) c.rho = *o.rho;
  if (o.eta) c.eta = *o.eta;
  if (o.iters) c.max_iters = *o.iters;
  if (o.jobs) c.jobs = *o.jobs;
  if (o.out) c.output.dir = *o.out;
  if (o.seed) {
    if (command == "random-search") {
      c.random_search.seed = *o.seed;
    } else {
      c.initial.kind = InitialSpec::Kind::random;
      c.initial.seed = *o.seed;
    }
  }
  if (!o.s_values.empty()) c.sweep.s_values = o.s_values;
  if (o.m) c.sweep.m = *o.m;
  if (o.digits) (command == "sweep" ? c.sweep.digits : c.random_search.digits) = *o.digits;
  if (o.samples) c.random_search.samples = *o.samples;
  if (o.knots) c.random_search.knots = *o.knots;
  if (o.field) {
    if (*o.field == "dilatation") {
      c.grid.field = GridField::dilatation;
    } else if (*o.field == "mean_curvature") {
      c.grid.field = GridField::mean_curvature;
    } else {
      throw ConfigError("--field must be dilatation or mean_curvature");
    }
  }
  if (o.n_r) c.grid.n_r = *o.n_r;
  if (o.n_theta) c.grid.n_theta = *o.n_theta;
  if (o.mesh) c.output.mesh = true;
  return c;
}

int report_error(std::ostream& err, const char* kind, const std::string& message, int code) {
  json e;
  e["error"] = {{"kind", kind}, {"message", message}, {"exit_code", code}};
  err << e.dump() << "\n";
  return code;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Minimal surfaces spanning closed space curves via the method of fundamental solutions"};
  app.require_subcommand(1);
  Overrides o;

  auto* solve = app.add_subcommand("solve", "optimize one configuration and write report.json");
  add_common(solve, o);
  solve->add_flag("--mesh", o.mesh, "also write mesh.obj and mesh_scalars.csv");

  auto* sw = app.add_subcommand("sweep", "run the Fourier-perturbed family phi(s) and classify");
  add_common(sw, o);
  sw->add_option("--s", o.s_values, "perturbation amplitudes s")->delimiter(',');
  sw->add_option("--m", o.m, "perturbation mode m");
  sw->add_option("--digits", o.digits, "significant digits used for clustering");

  auto* rs = app.add_subcommand("random-search", "optimize random monotone initial configurations and classify");
  add_common(rs, o);
  rs->add_option("--samples", o.samples, "number of random initial configurations");
  rs->add_option("--knots", o.knots, "spline knots per random configuration");
  rs->add_option("--digits", o.digits, "significant digits used for clustering");

  auto* gr = app.add_subcommand("grid", "optimize, then sample a scalar field on a polar grid");
  add_common(gr, o);
  gr->add_option("--field", o.field, "dilatation or mean_curvature");
  gr->add_option("--n-r", o.n_r, "radial grid intervals");
  gr->add_option("--n-theta", o.n_theta, "angular grid samples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    return report_error(err, "usage_error", e.what(), kExitConfig);
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const RunConfig config = resolve(command, o);
    if (command == "solve") {
      cmd_solve(config, out);
    } else if (command == "sweep") {
      cmd_sweep(config, out);
    } else if (command == "random-search") {
      cmd_random_search(config, out);
    } else {
      cmd_grid(config, out);
    }
  } catch (const ConfigError& e) {
    return report_error(err, "config_error", e.what(), kExitConfig);
  } catch (const NumericalError& e) {
    return report_error(err, "numerical_error", e.what(), kExitNumerical);
  } catch (const fs::filesystem_error& e) {
    return report_error(err, "config_error", e.what(), kExitConfig);
  }
  return kExitOk;
}

}  // namespace mfsplateau
