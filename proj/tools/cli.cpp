#include "cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>

#include "commands.hpp"
#include "qdnls/error.hpp"
#include "qdnls/report.hpp"

namespace qdnls::cli {

using nlohmann::json;
namespace fs = std::filesystem;

void Artifacts::text(const std::string& name, const std::string& content) {
  std::ofstream f(path(name), std::ios::binary);
  if (!f) throw ValidationError("cannot write " + path(name).string());
  f << content;
  if (!f) throw ValidationError("cannot write " + path(name).string());
  add(name);
}

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Flags {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  CLI::Option* seed_option = nullptr;
  int jobs = 0;
  bool quiet = false;
};

int report_error(const fs::path& out, const std::string& command, int code, json error) {
  error["exit_code"] = code;
  if (!command.empty()) error["command"] = command;
  const json doc{{"error", error}};
  std::cerr << doc.dump() << '\n';
  if (!out.empty()) {
    std::error_code ec;
    fs::create_directories(out, ec);
    std::ofstream f(out / "error.json");
    if (f) f << doc.dump(2) << '\n';
  }
  return code;
}

int execute(const std::string& command, CommandFn fn, const Flags& flags) {
  fs::path out;
  if (!flags.out.empty()) {
    out = flags.out;
  } else {
    const char* root = std::getenv("QDNLS_OUT_DIR");
    out = fs::path(root && *root ? root : ".") / ("qdnls-" + command);
  }
  try {
    json doc;
    {
      std::ifstream in(flags.config);
      if (!in) throw ConfigError("", "cannot read config file " + flags.config);
      try {
        doc = json::parse(in);
      } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("invalid JSON: ") + e.what());
      }
    }
    ConfigReader reader(doc);
    Context ctx;
    ctx.seed = reader.unsigned_integer("seed", 1);
    if (flags.seed_option && flags.seed_option->count() > 0) {
      ctx.seed = flags.seed;
      reader.set("seed", ctx.seed);
    }
    ctx.jobs = flags.jobs > 0 ? flags.jobs : default_jobs();
    ctx.quiet = flags.quiet;
    ctx.config_dir = fs::absolute(flags.config).parent_path();
    ctx.out = out;
    fs::create_directories(out);

    Artifacts art(out);
    Outcome outcome = fn(reader, ctx, art);
    const json report{{"command", command},
                      {"config", reader.resolved()},
                      {"seed", ctx.seed},
                      {"timestamp", utc_timestamp()},
                      {"artifacts", art.names()},
                      {"result", outcome.result}};
    art.text("report.json", report.dump(2) + "\n");
    if (!flags.quiet) std::cout << "wrote " << (out / "report.json").string() << '\n';
    if (outcome.exit_code != 0) {
      outcome.error["report"] = "report.json";
      return report_error(out, command, outcome.exit_code, outcome.error);
    }
    return 0;
  } catch (const ConfigError& e) {
    return report_error(out, command, 2,
                        {{"kind", "validation"}, {"path", e.path().empty() ? "/" : e.path()}, {"message", e.what()}});
  } catch (const ValidationError& e) {
    return report_error(out, command, 2, {{"kind", "validation"}, {"message", e.what()}});
  } catch (const NumericalError& e) {
    return report_error(out, command, 3, {{"kind", "numerical"}, {"message", e.what()}});
  } catch (const fs::filesystem_error& e) {
    return report_error(out, command, 2, {{"kind", "validation"}, {"message", e.what()}});
  } catch (const std::exception& e) {
    return report_error(out, command, 1, {{"kind", "internal"}, {"message", e.what()}});
  }
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Experiments for the quadratic derivative NLS system in two dimensions"};
  app.require_subcommand(1);
  Flags flags;
  std::string chosen;
  CommandFn chosen_fn = nullptr;

  auto add = [&](CLI::App* parent, const std::string& name, const std::string& full, CommandFn fn,
                 const std::string& help) {
    CLI::App* sub = parent->add_subcommand(name, help);
    sub->add_option("--config", flags.config, "JSON config file")->required();
    sub->add_option("--out", flags.out, "output directory (default $QDNLS_OUT_DIR/qdnls-<command>)");
    flags.seed_option = nullptr;
    auto* seed = sub->add_option("--seed", flags.seed, "overrides the config seed");
    sub->add_option("--jobs", flags.jobs, "worker threads (default: logical cores)")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--quiet", flags.quiet, "print nothing on success");
    sub->callback([&, full, fn, seed] {
      chosen = full;
      chosen_fn = fn;
      flags.seed_option = seed;
    });
  };

  add(&app, "simulate", "simulate", simulate_command, "evolve Cartesian data");
  add(&app, "simulate-radial", "simulate-radial", simulate_radial_command, "evolve radial-form data");
  add(&app, "potential", "potential", potential_command, "reconstruct a scalar potential W from w");
  add(&app, "decompose", "decompose", decompose_command, "dyadic block norms |Q_L P_N u|");
  add(&app, "inflation", "verify-inflation", verify_inflation, "norm-inflation experiment");
  CLI::App* verify = app.add_subcommand("verify", "empirical checks of the estimates");
  verify->require_subcommand(1);
  add(verify, "strichartz", "verify-strichartz", verify_strichartz, "linear Strichartz ratios");
  add(verify, "bilinear", "verify-bilinear", verify_bilinear, "bilinear Strichartz sweep");
  add(verify, "geometry", "verify-geometry", verify_geometry, "resonance and angular geometry scans");
  add(verify, "angular", "verify-angular", verify_angular, "angular bilinear sweep");
  add(verify, "trilinear", "verify-trilinear", verify_trilinear, "trilinear target check");
  add(verify, "inflation", "verify-inflation", verify_inflation, "norm-inflation experiment");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return report_error({}, chosen, 2, {{"kind", "usage"}, {"message", e.what()}});
  }
  if (!chosen_fn) return report_error({}, "", 2, {{"kind", "usage"}, {"message", "no command given"}});
  return execute(chosen, chosen_fn, flags);
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace qdnls::cli
