#include "mfsplateau/io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace mfsplateau {

using nlohmann::json;

namespace {

// Reads one JSON object, rejecting keys that were never asked for.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j.is_object()) throw ConfigError(where_ + " must be a JSON object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  template <class T>
  void get(const std::string& key, T& out) {
    if (!has(key)) return;
    out = convert<T>(j_.at(key), path(key));
  }

  std::string path(const std::string& key) const { return where_.empty() ? key : where_ + "." + key; }

  void finish() const {
    for (const auto& item : j_.items()) {
      if (!seen_.contains(item.key())) throw ConfigError("unknown key '" + path(item.key()) + "'");
    }
  }

  template <class T>
  static T convert(const json& v, const std::string& where) {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError("'" + where + "' must be a boolean");
      return v.get<bool>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError("'" + where + "' must be a string");
      return v.get<std::string>();
    } else if constexpr (std::is_same_v<T, std::uint64_t>) {
      if (!v.is_number_unsigned()) throw ConfigError("'" + where + "' must be a non-negative integer");
      return v.get<std::uint64_t>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw ConfigError("'" + where + "' must be an integer");
      const auto x = v.get<std::int64_t>();
      if (x < std::numeric_limits<T>::min() || x > std::numeric_limits<T>::max()) {
        throw ConfigError("'" + where + "' is out of range");
      }
      return static_cast<T>(x);
    } else if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) throw ConfigError("'" + where + "' must be a number");
      return v.get<double>();
    } else if constexpr (std::is_same_v<T, std::vector<double>>) {
      if (!v.is_array()) throw ConfigError("'" + where + "' must be an array of numbers");
      std::vector<double> out;
      for (const auto& e : v) out.push_back(convert<double>(e, where));
      return out;
    }
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

const char* field_name(GridField f) { return f == GridField::dilatation ? "dilatation" : "mean_curvature"; }

GridField parse_field(const std::string& s) {
  if (s == "dilatation") return GridField::dilatation;
  if (s == "mean_curvature") return GridField::mean_curvature;
  throw ConfigError("grid field must be 'dilatation' or 'mean_curvature', got '" + s + "'");
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json angles_json(std::span<const double> a) { return json(std::vector<double>(a.begin(), a.end())); }

}  // namespace

json curve_to_json(const CurveDescriptor& curve) {
  json j;
  j["name"] = curve.name;
  j["params"] = json::object();
  for (const auto& [k, v] : curve.params) j["params"][k] = v;
  if (!curve.control.empty()) {
    json pts = json::array();
    for (const auto& p : curve.control) pts.push_back({p[0], p[1], p[2]});
    j["control"] = pts;
  }
  return j;
}

CurveDescriptor curve_from_json(const json& j) {
  ObjectReader r(j, "curve");
  CurveDescriptor d;
  if (!r.has("name")) throw ConfigError("curve.name is required");
  r.get("name", d.name);
  if (r.has("params")) {
    const json& p = r.raw("params");
    if (!p.is_object()) throw ConfigError("curve.params must be a JSON object");
    for (const auto& item : p.items()) {
      d.params[item.key()] = ObjectReader::convert<double>(item.value(), "curve.params." + item.key());
    }
  }
  if (r.has("control")) {
    const json& c = r.raw("control");
    if (!c.is_array()) throw ConfigError("curve.control must be an array of [x, y, z] points");
    for (const auto& p : c) {
      if (!p.is_array() || p.size() != 3) throw ConfigError("curve.control entries must be [x, y, z]");
      d.control.push_back({ObjectReader::convert<double>(p[0], "curve.control"),
                           ObjectReader::convert<double>(p[1], "curve.control"),
                           ObjectReader::convert<double>(p[2], "curve.control")});
    }
  }
  r.finish();
  (void)make_curve(d);  // rejects unknown names and parameters early
  return d;
}

bool operator==(const DiagnosticsSpec& a, const DiagnosticsSpec& b) {
  return a.interior_radius == b.interior_radius && a.n_r == b.n_r && a.n_theta == b.n_theta &&
         a.quadrature.n_r == b.quadrature.n_r && a.quadrature.n_theta == b.quadrature.n_theta &&
         a.fingerprint_samples == b.fingerprint_samples;
}

bool operator==(const RunConfig& a, const RunConfig& b) { return to_json(a) == to_json(b); }

void RunConfig::validate() const {
  if (n < 4) throw ConfigError("n must be at least 4");
  if (!(radius > 1.0) || !std::isfinite(radius)) throw ConfigError("radius must exceed 1");
  optimizer().validate();
  if (jobs < 1) throw ConfigError("jobs must be at least 1");
  if (!(diagnostics.interior_radius > 0.0 && diagnostics.interior_radius <= 1.0)) {
    throw ConfigError("diagnostics.interior_radius must lie in (0, 1]");
  }
  if (diagnostics.n_r < 1 || diagnostics.n_theta < 1) throw ConfigError("diagnostics grid must be non-empty");
  if (diagnostics.quadrature.n_r < 2 || diagnostics.quadrature.n_theta < 4) {
    throw ConfigError("quadrature needs n_r >= 2 and n_theta >= 4");
  }
  if (diagnostics.fingerprint_samples < 2) throw ConfigError("fingerprint_samples must be at least 2");
  if (output.mesh_n_r < 1 || output.mesh_n_theta < 3) throw ConfigError("mesh needs n_r >= 1 and n_theta >= 3");
  if (grid.n_r < 1 || grid.n_theta < 1) throw ConfigError("grid needs n_r >= 1 and n_theta >= 1");
  if (sweep.digits < 1 || random_search.digits < 1) throw ConfigError("digits must be at least 1");
  if (random_search.samples < 0) throw ConfigError("random_search.samples must be non-negative");
  if (random_search.knots < 4) throw ConfigError("random_search.knots must be at least 4");
  if (initial.kind == InitialSpec::Kind::random && initial.knots < 4) {
    throw ConfigError("initial.knots must be at least 4");
  }
  if (initial.kind == InitialSpec::Kind::explicit_angles && initial.angles.size() != static_cast<std::size_t>(n)) {
    throw ConfigError("initial.angles has " + std::to_string(initial.angles.size()) + " entries, n is " +
                      std::to_string(n));
  }
  for (double a : initial.angles) {
    if (!std::isfinite(a)) throw ConfigError("initial.angles must be finite");
  }
  const BoundaryCurve c = make_curve(curve);
  if (!c.has_derivative()) throw ConfigError("curve has no derivative data");
}

OptimizerSettings RunConfig::optimizer() const {
  OptimizerSettings s;
  s.eta = eta;
  s.max_iters = max_iters;
  s.rho = rho;
  s.grad_tolerance = grad_tolerance;
  s.energy_log_stride = energy_log_stride;
  s.adaptive_step = adaptive_step;
  return s;
}

BatchSpec RunConfig::batch() const {
  BatchSpec b;
  b.curve = curve;
  b.n = n;
  b.radius = radius;
  b.optimizer = optimizer();
  b.diagnostics = diagnostics;
  b.jobs = jobs;
  return b;
}

Configuration RunConfig::initial_configuration() const {
  switch (initial.kind) {
    case InitialSpec::Kind::equidistant:
      return Configuration::equidistant(n, initial.offset);
    case InitialSpec::Kind::fourier:
      return fourier_initial(n, initial.s, initial.m);
    case InitialSpec::Kind::random:
      return random_initial(n, initial.seed, initial.knots);
    case InitialSpec::Kind::explicit_angles:
      if (initial.angles.size() != static_cast<std::size_t>(n)) throw ConfigError("initial.angles must have n entries");
      return Configuration(initial.angles);
  }
  throw ConfigError("unknown initial configuration kind");
}

RunConfig parse_config(const json& j) {
  RunConfig c;
  ObjectReader r(j, "");
  if (r.has("schema_version")) {
    int v = 0;
    r.get("schema_version", v);
    if (v != kSchemaVersion) throw ConfigError("unsupported schema_version " + std::to_string(v));
  }
  if (r.has("curve")) c.curve = curve_from_json(r.raw("curve"));
  r.get("n", c.n);
  r.get("radius", c.radius);
  r.get("rho", c.rho);
  r.get("jobs", c.jobs);

  if (r.has("optimizer")) {
    ObjectReader o(r.raw("optimizer"), "optimizer");
    o.get("eta", c.eta);
    o.get("max_iters", c.max_iters);
    o.get("grad_tolerance", c.grad_tolerance);
    o.get("energy_log_stride", c.energy_log_stride);
    o.get("adaptive_step", c.adaptive_step);
    o.finish();
  }

  if (r.has("initial")) {
    ObjectReader o(r.raw("initial"), "initial");
    std::string kind = "equidistant";
    o.get("kind", kind);
    auto& in = c.initial;
    if (kind == "equidistant") {
      in.kind = InitialSpec::Kind::equidistant;
      o.get("offset", in.offset);
    } else if (kind == "fourier") {
      in.kind = InitialSpec::Kind::fourier;
      o.get("s", in.s);
      o.get("m", in.m);
    } else if (kind == "random") {
      in.kind = InitialSpec::Kind::random;
      o.get("seed", in.seed);
      o.get("knots", in.knots);
    } else if (kind == "explicit") {
      in.kind = InitialSpec::Kind::explicit_angles;
      if (!o.has("angles")) throw ConfigError("initial.angles is required for kind 'explicit'");
      o.get("angles", in.angles);
    } else {
      throw ConfigError("initial.kind must be equidistant, fourier, random or explicit, got '" + kind + "'");
    }
    o.finish();
  }

  if (r.has("output")) {
    ObjectReader o(r.raw("output"), "output");
    o.get("dir", c.output.dir);
    o.get("mesh", c.output.mesh);
    o.get("mesh_n_r", c.output.mesh_n_r);
    o.get("mesh_n_theta", c.output.mesh_n_theta);
    o.get("grid", c.output.grid);
    o.finish();
  }

  if (r.has("diagnostics")) {
    ObjectReader o(r.raw("diagnostics"), "diagnostics");
    auto& d = c.diagnostics;
    o.get("interior_radius", d.interior_radius);
    o.get("n_r", d.n_r);
    o.get("n_theta", d.n_theta);
    o.get("quadrature_n_r", d.quadrature.n_r);
    o.get("quadrature_n_theta", d.quadrature.n_theta);
    o.get("fingerprint_samples", d.fingerprint_samples);
    o.finish();
  }

  if (r.has("grid")) {
    ObjectReader o(r.raw("grid"), "grid");
    if (o.has("field")) {
      std::string f;
      o.get("field", f);
      c.grid.field = parse_field(f);
    }
    o.get("n_r", c.grid.n_r);
    o.get("n_theta", c.grid.n_theta);
    o.finish();
  }

  if (r.has("sweep")) {
    ObjectReader o(r.raw("sweep"), "sweep");
    o.get("s_values", c.sweep.s_values);
    o.get("m", c.sweep.m);
    o.get("digits", c.sweep.digits);
    o.get("fingerprint", c.sweep.fingerprint);
    o.finish();
  }

  if (r.has("random_search")) {
    ObjectReader o(r.raw("random_search"), "random_search");
    o.get("samples", c.random_search.samples);
    o.get("seed", c.random_search.seed);
    o.get("knots", c.random_search.knots);
    o.get("digits", c.random_search.digits);
    o.finish();
  }

  r.finish();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

json to_json(const RunConfig& c) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["curve"] = curve_to_json(c.curve);
  j["n"] = c.n;
  j["radius"] = c.radius;
  j["rho"] = c.rho;
  j["jobs"] = c.jobs;
  j["optimizer"] = {{"eta", c.eta},
                    {"max_iters", c.max_iters},
                    {"grad_tolerance", c.grad_tolerance},
                    {"energy_log_stride", c.energy_log_stride},
                    {"adaptive_step", c.adaptive_step}};
  json in;
  switch (c.initial.kind) {
    case InitialSpec::Kind::equidistant:
      in = {{"kind", "equidistant"}, {"offset", c.initial.offset}};
      break;
    case InitialSpec::Kind::fourier:
      in = {{"kind", "fourier"}, {"s", c.initial.s}, {"m", c.initial.m}};
      break;
    case InitialSpec::Kind::random:
      in = {{"kind", "random"}, {"seed", c.initial.seed}, {"knots", c.initial.knots}};
      break;
    case InitialSpec::Kind::explicit_angles:
      in = {{"kind", "explicit"}, {"angles", c.initial.angles}};
      break;
  }
  j["initial"] = in;
  j["output"] = {{"dir", c.output.dir},
                 {"mesh", c.output.mesh},
                 {"mesh_n_r", c.output.mesh_n_r},
                 {"mesh_n_theta", c.output.mesh_n_theta},
                 {"grid", c.output.grid}};
  j["diagnostics"] = {{"interior_radius", c.diagnostics.interior_radius},
                      {"n_r", c.diagnostics.n_r},
                      {"n_theta", c.diagnostics.n_theta},
                      {"quadrature_n_r", c.diagnostics.quadrature.n_r},
                      {"quadrature_n_theta", c.diagnostics.quadrature.n_theta},
                      {"fingerprint_samples", c.diagnostics.fingerprint_samples}};
  j["grid"] = {{"field", field_name(c.grid.field)}, {"n_r", c.grid.n_r}, {"n_theta", c.grid.n_theta}};
  j["sweep"] = {{"s_values", c.sweep.s_values},
                {"m", c.sweep.m},
                {"digits", c.sweep.digits},
                {"fingerprint", c.sweep.fingerprint}};
  j["random_search"] = {{"samples", c.random_search.samples},
                        {"seed", c.random_search.seed},
                        {"knots", c.random_search.knots},
                        {"digits", c.random_search.digits}};
  return j;
}

json report_to_json(const SolveReport& r, const RunConfig& config) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["config"] = to_json(config);
  j["initial_config"] = angles_json(r.initial_config.angles());
  j["final_config"] = angles_json(r.final_config.angles());
  j["final_config_reduced"] = angles_json(r.final_config.reduced());
  j["final_energy"] = finite_or_null(r.final_energy);
  j["dilatation_sup_interior"] = finite_or_null(r.dilatation_sup_interior);
  j["dilatation_sup_rho"] = finite_or_null(r.dilatation_sup_rho);
  j["dirichlet_energy"] = finite_or_null(r.dirichlet_energy);
  j["mean_curvature_sup"] = finite_or_null(r.mean_curvature_sup);
  j["iters_run"] = r.iters_run;
  j["eta_final"] = r.eta_final;
  j["stop_reason"] = r.stop_reason;
  json trace = json::array();
  for (const auto& [it, e] : r.energy_trace) trace.push_back({it, finite_or_null(e)});
  j["energy_trace"] = trace;
  j["fingerprint"] = r.fingerprint;
  j["monotone"] = r.monotone;
  j["wall_time"] = r.wall_time;
  return j;
}

json clusters_to_json(const std::vector<SolutionCluster>& clusters, std::span<const SolveReport> reports) {
  json arr = json::array();
  for (const auto& c : clusters) {
    arr.push_back({{"representative", c.representative},
                   {"members", c.members},
                   {"dirichlet_energy_mean", c.energy_mean},
                   {"dirichlet_energy_spread", c.energy_spread},
                   {"representative_energy", finite_or_null(reports[c.representative].final_energy)},
                   {"tolerance", c.tolerance},
                   {"digits", c.digits}});
  }
  return arr;
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw ConfigError("failed writing '" + path.string() + "'");
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  return fmt::format("{:.17g}", v);
}

std::string grid_csv(const ApproximateSurface& surface, const GridSpec& grid) {
  std::string out = "rho,theta,value\n";
  for (int k = 0; k <= grid.n_r; ++k) {
    const double rho = static_cast<double>(k) / grid.n_r;
    for (int j = 0; j < grid.n_theta; ++j) {
      const double theta = kTwoPi * j / grid.n_theta;
      const Complex z = std::polar(rho, theta);
      double value = std::numeric_limits<double>::quiet_NaN();
      if (grid.field == GridField::dilatation) {
        value = std::abs(dilatation(surface, z));
      } else {
        try {
          value = mean_curvature(surface, z);
        } catch (const NumericalError&) {
        }
      }
      out += format_double(rho) + "," + format_double(theta) + "," + format_double(value) + "\n";
    }
  }
  return out;
}

std::string mesh_obj(const SurfaceMesh& mesh) {
  std::string out;
  for (const auto& v : mesh.vertices) {
    out += "v " + format_double(v[0]) + " " + format_double(v[1]) + " " + format_double(v[2]) + "\n";
  }
  for (const auto& f : mesh.faces) {
    out += "f";
    for (auto idx : f) out += " " + std::to_string(idx + 1);
    out += "\n";
  }
  return out;
}

std::string mesh_scalars_csv(const SurfaceMesh& mesh) {
  std::string out = "vertex,abs_dilatation,mean_curvature\n";
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    out += std::to_string(i + 1) + "," + format_double(mesh.abs_dilatation[i]) + "," +
           format_double(mesh.mean_curvature[i]) + "\n";
  }
  return out;
}

}  // namespace mfsplateau
