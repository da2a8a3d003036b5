#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "mfsplateau/curves.hpp"
#include "mfsplateau/optimizer.hpp"
#include "mfsplateau/search.hpp"
#include "mfsplateau/surface.hpp"

namespace mfsplateau {

inline constexpr int kSchemaVersion = 1;

struct InitialSpec {
  enum class Kind { equidistant, fourier, random, explicit_angles };
  Kind kind = Kind::equidistant;
  double offset = 0.0;                 // equidistant
  double s = 0.0;                      // fourier
  int m = 2;                           // fourier
  std::uint64_t seed = 0;              // random
  int knots = 8;                       // random
  std::vector<double> angles;          // explicit

  bool operator==(const InitialSpec&) const = default;
};

struct OutputSpec {
  std::string dir = ".";
  bool mesh = false;
  int mesh_n_r = 20;
  int mesh_n_theta = 64;
  bool grid = false;                   // also write the dilatation grid on solve

  bool operator==(const OutputSpec&) const = default;
};

enum class GridField { dilatation, mean_curvature };

struct GridSpec {
  GridField field = GridField::dilatation;
  int n_r = 20;
  int n_theta = 64;

  bool operator==(const GridSpec&) const = default;
};

struct SweepConfig {
  std::vector<double> s_values;
  int m = 2;
  int digits = 5;
  bool fingerprint = false;

  bool operator==(const SweepConfig&) const = default;
};

struct RandomSearchConfig {
  int samples = 50;
  std::uint64_t seed = 0;
  int knots = 8;
  int digits = 5;

  bool operator==(const RandomSearchConfig&) const = default;
};

/// Everything needed to reproduce a run. Unknown JSON keys are rejected.
struct RunConfig {
  CurveDescriptor curve{"ellipse", {{"a", 2.0}, {"b", 1.0}}, {}};
  int n = 64;
  double radius = 1.5;
  double rho = 0.87;
  double eta = 1e-2;
  int max_iters = 10000;
  double grad_tolerance = 0.0;
  int energy_log_stride = 100;
  bool adaptive_step = false;
  InitialSpec initial{};
  OutputSpec output{};
  DiagnosticsSpec diagnostics{};
  GridSpec grid{};
  SweepConfig sweep{};
  RandomSearchConfig random_search{};
  int jobs = 1;

  /// Range checks owned by the numerical modules, applied up front.
  /// Throws ConfigError.
  void validate() const;

  OptimizerSettings optimizer() const;
  BatchSpec batch() const;
  /// The configured initial configuration (explicit angles must have length n).
  Configuration initial_configuration() const;
};

bool operator==(const DiagnosticsSpec& a, const DiagnosticsSpec& b);
bool operator==(const RunConfig& a, const RunConfig& b);

/// Throws ConfigError on unknown keys, wrong types or out-of-range values.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& config);

nlohmann::json curve_to_json(const CurveDescriptor& curve);
CurveDescriptor curve_from_json(const nlohmann::json& j);

/// Full report: schema version, producing config, run results. NaN values
/// are written as null.
nlohmann::json report_to_json(const SolveReport& report, const RunConfig& config);
nlohmann::json clusters_to_json(const std::vector<SolutionCluster>& clusters, std::span<const SolveReport> reports);

/// Serializes JSON with a trailing newline. Doubles use the shortest
/// representation that round-trips exactly.
std::string dump_json(const nlohmann::json& j);
void write_text(const std::filesystem::path& path, const std::string& text);

/// "%.17g", with NaN written as "nan".
std::string format_double(double v);

/// CSV with header rho,theta,value on the polar grid rho = k/n_r (k = 0..n_r),
/// theta = 2 pi j / n_theta. Mean-curvature cells at degenerate points are nan.
std::string grid_csv(const ApproximateSurface& surface, const GridSpec& grid);

/// Wavefront OBJ (vertices and 1-based faces only) and the matching
/// per-vertex scalar CSV.
std::string mesh_obj(const SurfaceMesh& mesh);
std::string mesh_scalars_csv(const SurfaceMesh& mesh);

}  // namespace mfsplateau
