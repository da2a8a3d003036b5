#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "mfsplateau/cli.hpp"

using namespace mfsplateau;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "mfsplateau");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("mfsplateau_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

json without_wall_time(json j) {
  j.erase("wall_time");
  return j;
}

}  // namespace

TEST_CASE("config: defaults, round trip and strict parsing") {
  const RunConfig defaults = parse_config(json::object());
  CHECK(defaults == RunConfig{});
  CHECK(defaults.curve.name == "ellipse");

  RunConfig c;
  c.curve = crown(3, 0.5).descriptor();
  c.n = 32;
  c.radius = 1.7;
  c.initial.kind = InitialSpec::Kind::fourier;
  c.initial.s = 0.25;
  c.initial.m = 3;
  c.sweep.s_values = {-1.0, 0.0, 1.0};
  c.grid.field = GridField::mean_curvature;
  c.random_search.seed = 1234567890123ULL;
  const RunConfig back = parse_config(json::parse(to_json(c).dump()));
  CHECK(back == c);

  RunConfig e = c;
  e.initial.kind = InitialSpec::Kind::explicit_angles;
  e.initial.angles = {0.0, 1.0, 2.0, 3.0};
  e.n = 4;
  CHECK(parse_config(to_json(e)) == e);
  CHECK(e.initial_configuration().angles()[2] == 2.0);

  std::vector<Vec3> pts;
  for (int j = 0; j < 8; ++j) pts.push_back({std::cos(j * 0.785), std::sin(j * 0.785), 0.1 * j});
  RunConfig s;
  s.curve = bspline_curve(pts, 3).descriptor();
  CHECK(parse_config(to_json(s)) == s);

  CHECK_THROWS_AS(parse_config(json{{"bogus", 1}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"optimizer", {{"etaa", 0.1}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"n", "64"}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"schema_version", 99}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"initial", {{"kind", "spiral"}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"curve", {{"name", "ellipse"}, {"params", {{"q", 1}}}}}}), ConfigError);

  RunConfig bad;
  bad.radius = 0.5;
  CHECK_THROWS_WITH_AS(bad.validate(), "radius must exceed 1", ConfigError);
  bad = {};
  bad.jobs = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("load_config reports missing files and broken JSON") {
  const auto dir = scratch("load");
  fs::create_directories(dir);
  CHECK_THROWS_AS(load_config(dir / "missing.json"), ConfigError);
  std::ofstream(dir / "broken.json") << "{ \"n\": ";
  CHECK_THROWS_AS(load_config(dir / "broken.json"), ConfigError);
  std::ofstream(dir / "ok.json") << R"({"n": 32, "curve": {"name": "circle"}})";
  const auto c = load_config(dir / "ok.json");
  CHECK(c.n == 32);
  CHECK(c.curve.name == "circle");
}

TEST_CASE("format_double is round-trip exact and spells NaN") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 3.141592653589793}) CHECK(std::stod(format_double(v)) == v);
  CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("solve: flat circle report") {
  const auto dir = scratch("solve");
  const auto cfg = dir / "config.json";
  fs::create_directories(dir);
  std::ofstream(cfg) << R"({"curve": {"name": "circle"}, "n": 64, "optimizer": {"max_iters": 50}})";
  const auto r = cli({"solve", "--config", cfg.string(), "--out", dir.string(), "--mesh"});
  CHECK(r.code == 0);
  CHECK(r.err.empty());
  const json report = json::parse(slurp(dir / "report.json"));
  CHECK(report["schema_version"] == kSchemaVersion);
  for (const char* key : {"config", "initial_config", "final_config", "final_config_reduced", "final_energy",
                          "dilatation_sup_interior", "dilatation_sup_rho", "dirichlet_energy", "mean_curvature_sup",
                          "iters_run", "eta_final", "stop_reason", "energy_trace", "fingerprint", "monotone",
                          "wall_time"}) {
    CHECK_MESSAGE(report.contains(key), key);
  }
  CHECK(std::abs(report["dirichlet_energy"].get<double>() - kPi) < 1e-6);
  CHECK(report["final_config"].size() == 64);
  CHECK(report["iters_run"] == 50);
  CHECK(parse_config(report["config"]).n == 64);

  const auto obj = lines(slurp(dir / "mesh.obj"));
  const auto nv = static_cast<std::size_t>(1 + 20 * 64);
  CHECK(obj.size() == nv + 64 + 19 * 64);
  CHECK(obj.front().rfind("v ", 0) == 0);
  CHECK(obj.back().rfind("f ", 0) == 0);
  const auto scalars = lines(slurp(dir / "mesh_scalars.csv"));
  CHECK(scalars.front() == "vertex,abs_dilatation,mean_curvature");
  CHECK(scalars.size() == nv + 1);
}

TEST_CASE("solve: invalid radius exits with a config error") {
  const auto r = cli({"solve", "--radius", "0.5", "--out", scratch("bad").string()});
  CHECK(r.code == 2);
  const json e = json::parse(r.err);
  CHECK(e["error"]["kind"] == "config_error");
  CHECK(e["error"]["message"].get<std::string>().find("radius must exceed 1") != std::string::npos);
  CHECK(e["error"]["exit_code"] == 2);
  CHECK_FALSE(fs::exists(scratch("bad") / "report.json"));

  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({"solve", "--n", "many"}).code == 2);
  CHECK(cli({"grid", "--field", "area"}).code == 2);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("solve: divergence exits with a numerical error") {
  const auto dir = scratch("diverge");
  const auto r = cli({"solve", "--out", dir.string(), "--eta", "0.99", "--iters", "3000", "--n", "32"});
  if (r.code != 0) {
    CHECK(r.code == 3);
    CHECK(json::parse(r.err)["error"]["kind"] == "numerical_error");
  }
}

TEST_CASE("grid: header, flat values and NaN cells") {
  const auto dir = scratch("grid");
  fs::create_directories(dir);
  std::ofstream(dir / "c.json") << R"({"curve": {"name": "circle"}, "n": 64, "optimizer": {"max_iters": 10}})";
  const auto r = cli({"grid", "--config", (dir / "c.json").string(), "--out", dir.string(), "--n-r", "5",
                      "--n-theta", "12"});
  CHECK(r.code == 0);
  const auto rows = lines(slurp(dir / "grid_dilatation.csv"));
  CHECK(rows.front() == "rho,theta,value");
  REQUIRE(rows.size() == 1 + 6 * 12);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double v = std::stod(rows[i].substr(rows[i].rfind(',') + 1));
    CHECK(v < 1e-10);
  }

  RunConfig degenerate;
  degenerate.curve = circle().descriptor();
  degenerate.n = 8;
  degenerate.max_iters = 0;
  degenerate.initial.kind = InitialSpec::Kind::explicit_angles;
  degenerate.initial.angles = std::vector<double>(8, 1.0);
  degenerate.grid = {GridField::mean_curvature, 2, 4};
  degenerate.output.dir = dir.string();
  std::ostringstream log;
  cmd_grid(degenerate, log);
  const auto hrows = lines(slurp(dir / "grid_mean_curvature.csv"));
  REQUIRE(hrows.size() == 1 + 3 * 4);
  for (std::size_t i = 1; i < hrows.size(); ++i) CHECK(hrows[i].substr(hrows[i].rfind(',') + 1) == "nan");
}

TEST_CASE("sweep: empty grid rejected, reruns identical") {
  const auto dir = scratch("sweep");
  CHECK(cli({"sweep", "--out", dir.string()}).code == 2);
  const std::vector<std::string> args{"sweep", "--out", dir.string(), "--n", "16", "--iters", "200",
                                      "--s", "-0.2,0,0.2", "--jobs", "2"};
  REQUIRE(cli(args).code == 0);
  const json first = json::parse(slurp(dir / "summary.json"));
  const json run0 = without_wall_time(json::parse(slurp(dir / "run_000.json")));
  REQUIRE(cli(args).code == 0);
  CHECK(json::parse(slurp(dir / "summary.json")) == first);
  CHECK(without_wall_time(json::parse(slurp(dir / "run_000.json"))) == run0);
  CHECK(first["runs"].size() == 3);
  CHECK(first["clusters"].size() >= 1);
  CHECK(run0["config"]["initial"]["kind"] == "fourier");
  CHECK(run0["config"]["initial"]["s"] == -0.2);
}

TEST_CASE("random-search: zero samples and determinism") {
  const auto dir = scratch("random");
  REQUIRE(cli({"random-search", "--out", dir.string(), "--samples", "0"}).code == 0);
  CHECK(lines(slurp(dir / "energies.csv")).size() == 1);
  CHECK(json::parse(slurp(dir / "clusters.json"))["clusters"].empty());

  const std::vector<std::string> args{"random-search", "--out", dir.string(), "--samples", "3", "--n", "16",
                                      "--iters", "150", "--seed", "5", "--jobs", "3"};
  REQUIRE(cli(args).code == 0);
  const std::string csv = slurp(dir / "energies.csv");
  const std::string clusters = slurp(dir / "clusters.json");
  REQUIRE(cli(args).code == 0);
  CHECK(slurp(dir / "energies.csv") == csv);
  CHECK(slurp(dir / "clusters.json") == clusters);
  CHECK(lines(csv).size() == 4);
  CHECK(lines(csv).front() == "sample,dirichlet_energy,final_energy,monotone,stop_reason");
}

TEST_CASE("the installed executable honours exit codes") {
  const char* exe = std::getenv("MFSPLATEAU_CLI");
  if (exe == nullptr) return;
  const auto dir = scratch("exe");
  const std::string cmd = std::string(exe) + " solve --radius 0.5 --out " + dir.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  CHECK(WEXITSTATUS(status) == 2);
  const std::string ok = std::string(exe) + " solve --n 16 --iters 5 --out " + dir.string() + " >/dev/null";
  CHECK(WEXITSTATUS(std::system(ok.c_str())) == 0);
  CHECK(fs::exists(dir / "report.json"));
}
