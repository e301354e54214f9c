#include <doctest.h>

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "config_reader.hpp"
#include "qdnls/field_io.hpp"
#include "qdnls/projections.hpp"
#include "qdnls/spectral_field.hpp"

using namespace qdnls;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// A fresh directory under the system temp root, removed on scope exit.
struct TempDir {
  fs::path path;
  TempDir() {
    static std::atomic<int> counter{0};
    path = fs::temp_directory_path() / ("qdnls-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path operator/(const std::string& name) const { return path / name; }
};

fs::path write_config(const TempDir& dir, const std::string& name, const json& doc) {
  const auto p = dir / name;
  std::ofstream(p) << doc.dump(2);
  return p;
}

json read_json(const fs::path& p) {
  std::ifstream f(p);
  return json::parse(f);
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

int run(std::vector<std::string> args, const fs::path& config, const fs::path& out) {
  args.insert(args.begin(), "qdnls");
  args.insert(args.end(), {"--config", config.string(), "--out", out.string(), "--quiet", "--jobs", "1"});
  return cli::run(args);
}

json small_simulation() {
  return {{"grid", {{"half_width", 10.0}, {"points", 32}}},
          {"coefficients", {{"alpha", 1.0}, {"beta", -1.0}, {"gamma", 0.5}}},
          {"data", {{"preset", "gaussian"}, {"amplitude", 0.2}}},
          {"integrator", {{"dt", 0.01}, {"t_end", 0.05}}}};
}

}  // namespace

TEST_CASE("config reader resolves defaults and rejects unknown keys") {
  const json doc{{"a", 2.0}, {"inner", {{"b", 3}}}};
  cli::ConfigReader r(doc);
  CHECK(r.number("a", 1.0) == 2.0);
  CHECK(r.number("missing", 5.0) == 5.0);
  auto inner = r.object("inner");
  CHECK(inner.integer("b", 0) == 3);
  CHECK(inner.string("mode", "x", {"x", "y"}) == "x");
  inner.finish();
  r.finish();
  const auto& resolved = r.resolved();
  CHECK(resolved["missing"] == 5.0);
  CHECK(resolved["inner"]["mode"] == "x");

  cli::ConfigReader extra(json{{"a", 1.0}, {"typo", 1}});
  extra.number("a", 0.0);
  try {
    extra.finish();
    FAIL("unknown key accepted");
  } catch (const cli::ConfigError& e) {
    CHECK(e.path() == "/typo");
  }

  cli::ConfigReader nested(json{{"c", {{"alpha", 1.0}}}});
  auto c = nested.required_object("c");
  try {
    c.required_number("gamma");
    FAIL("missing key accepted");
  } catch (const cli::ConfigError& e) {
    CHECK(e.path() == "/c/gamma");
  }

  cli::ConfigReader bad(json{{"mode", "z"}, {"n", "text"}});
  CHECK_THROWS_AS(bad.string("mode", "x", {"x", "y"}), cli::ConfigError);
  CHECK_THROWS_AS(bad.integer("n", 0), cli::ConfigError);
}

TEST_CASE("simulate writes a report that embeds the resolved config") {
  TempDir dir;
  const auto cfg = write_config(dir, "sim.json", small_simulation());
  REQUIRE(run({"simulate"}, cfg, dir / "out") == 0);
  const auto report = read_json(dir / "out" / "report.json");
  CHECK(report["command"] == "simulate");
  CHECK(report["config"]["integrator"]["scheme"] == "exponential-rk4");
  CHECK(report["config"]["seed"] == 1);
  CHECK(report["result"]["status"] == "completed");
  CHECK(report["result"]["m1"]["max_relative_drift"].get<double>() < 1e-8);
  CHECK(fs::exists(dir / "out" / "diagnostics.csv"));
}

TEST_CASE("validation errors exit with code 2 and name the key") {
  TempDir dir;
  auto doc = small_simulation();
  doc["coefficients"].erase("gamma");
  const auto missing = write_config(dir, "missing.json", doc);
  CHECK(run({"simulate"}, missing, dir / "a") == 2);
  auto err = read_json(dir / "a" / "error.json")["error"];
  CHECK(err["exit_code"] == 2);
  CHECK(err["path"] == "/coefficients/gamma");

  doc = small_simulation();
  doc["grid"]["foo"] = 1;
  const auto unknown = write_config(dir, "unknown.json", doc);
  CHECK(run({"simulate"}, unknown, dir / "b") == 2);
  CHECK(read_json(dir / "b" / "error.json")["error"]["path"] == "/grid/foo");

  doc = small_simulation();
  doc["grid"]["points"] = 48;
  const auto odd = write_config(dir, "odd.json", doc);
  CHECK(run({"simulate"}, odd, dir / "c") == 2);
  CHECK(read_json(dir / "c" / "error.json")["error"]["path"] == "/grid/points");

  CHECK(cli::run(std::vector<std::string>{"qdnls", "simulate", "--config", (dir / "none.json").string(),
                                          "--out", (dir / "d").string(), "--quiet"}) == 2);
}

TEST_CASE("blow-up exits with code 3 and references the last snapshot") {
  TempDir dir;
  auto doc = small_simulation();
  doc["data"]["amplitude"] = 20.0;
  doc["integrator"] = {{"dt", 0.01}, {"t_end", 2.0}, {"blowup_factor", 1.2}};
  const auto cfg = write_config(dir, "blowup.json", doc);
  REQUIRE(run({"simulate"}, cfg, dir / "out") == 3);
  const auto err = read_json(dir / "out" / "error.json")["error"];
  CHECK(err["exit_code"] == 3);
  CHECK(err["last_snapshot"] == "last_snapshot.qfld");
  const auto last = read_fields(dir / "out" / "last_snapshot.qfld");
  CHECK(last.size() == 6);
  CHECK(read_json(dir / "out" / "report.json")["result"]["status"] == "blowup");
}

TEST_CASE("identical config and seed give identical reports up to the timestamp") {
  TempDir dir;
  const json doc{{"resonance", {{"radius", 8}}},
                 {"angular", {{"sectors", {64}}, {"samples", 200}}},
                 {"sector_gain", {{"sectors", {64}}, {"fields", 2}}}};
  const auto cfg = write_config(dir, "geometry.json", doc);
  REQUIRE(run({"verify", "geometry", "--seed", "7"}, cfg, dir / "a") == 0);
  REQUIRE(run({"verify", "geometry", "--seed", "7"}, cfg, dir / "b") == 0);
  auto a = read_json(dir / "a" / "report.json");
  auto b = read_json(dir / "b" / "report.json");
  CHECK(a["seed"] == 7);
  CHECK(a["config"]["seed"] == 7);
  a.erase("timestamp");
  b.erase("timestamp");
  CHECK(a.dump() == b.dump());
  CHECK(slurp(dir / "a" / "sector_gain.csv") == slurp(dir / "b" / "sector_gain.csv"));
}

TEST_CASE("potential reconstructs a gradient field end to end") {
  TempDir dir;
  const Grid2D g(8.0, 64);
  const auto W = SpectralField::sample(g, [](double x, double y) { return Complex(std::exp(-(x * x + y * y))); });
  const auto w = gradient(W);
  write_fields(dir / "w.qfld", {w[0], w[1]});
  const auto cfg = write_config(dir, "potential.json", {{"field", "w.qfld"}, {"method", "line"}});
  REQUIRE(run({"potential"}, cfg, dir / "out") == 0);
  const auto result = read_json(dir / "out" / "report.json")["result"];
  CHECK(result["round_trip_error"].get<double>() < 1e-10);
  CHECK(result["reconstructor_agreement"].get<double>() < 1e-8);
  const auto back = read_fields(dir / "out" / "potential.qfld");
  REQUIRE(back.size() == 1);
  CHECK(back[0].grid().points() == 64);

  // A rotational field is a validation error.
  const VectorField rot(Complex(-1.0) * w[1], w[0]);
  write_fields(dir / "rot.qfld", {rot[0], rot[1]});
  const auto bad = write_config(dir, "rot.json", {{"field", "rot.qfld"}});
  CHECK(run({"potential"}, bad, dir / "rot") == 2);
}

TEST_CASE("decompose writes block norms whose squares add up") {
  TempDir dir;
  const Grid2D g(4.0, 32);
  const auto f = SpectralField::sample(g, [](double x, double y) { return Complex(std::exp(-(x * x + y * y))); });
  write_fields(dir / "f.qfld", {f});
  const auto cfg = write_config(dir, "decompose.json", {{"field", "f.qfld"}, {"T", 1.0}, {"time_samples", 16}});
  REQUIRE(run({"decompose"}, cfg, dir / "out") == 0);
  const auto result = read_json(dir / "out" / "report.json")["result"];
  CHECK(result["blocks"].get<int>() > 0);
  // The blocks partition unity in frequency and modulation, so this is only an
  // almost-orthogonality check.
  const double ratio = result["block_l2_sum"].get<double>() / result["l2_norm"].get<double>();
  CHECK(ratio > 0.5);
  CHECK(ratio < 2.0);
  CHECK(fs::exists(dir / "out" / "blocks.csv"));

  const auto bad = write_config(dir, "bad.json", {{"field", "f.qfld"}, {"component", 3}});
  CHECK(run({"decompose"}, bad, dir / "bad") == 2);
}

TEST_CASE("verify inflation reports fitted slopes") {
  TempDir dir;
  const json doc{{"s_values", {0.0}},
                 {"n_values", {16, 32, 64}},
                 {"t_values", {1e-3, 1e-2, 1e-1}},
                 {"n_for_t_fit", 64},
                 {"grid", {{"max_n", 16}}}};
  const auto cfg = write_config(dir, "inflation.json", doc);
  REQUIRE(run({"verify", "inflation"}, cfg, dir / "out") == 0);
  const auto result = read_json(dir / "out" / "report.json")["result"];
  REQUIRE(result["n_fits"].size() == 1);
  const double slope = result["n_fits"][0]["fit"]["exponent"].get<double>();
  CHECK(slope == doctest::Approx(0.5).epsilon(0.3));
  CHECK(result["expected_t_exponent"] == 0.5);
  CHECK(fs::exists(dir / "out" / "plot.svg"));
  CHECK(fs::exists(dir / "out" / "rows.csv"));
}
