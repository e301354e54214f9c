#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "config_reader.hpp"

namespace qdnls::cli {

struct Context {
  std::filesystem::path out;  // created before the command runs
  std::filesystem::path config_dir;  // relative input paths resolve against this
  std::uint64_t seed = 1;
  int jobs = 1;
  bool quiet = false;
};

// What a command hands back. A nonzero exit code comes with an error object
// that is merged into the machine-readable error report.
struct Outcome {
  nlohmann::json result = nlohmann::json::object();
  int exit_code = 0;
  nlohmann::json error = nlohmann::json::object();
};

// Writes `name` under the output directory and remembers it for the report.
class Artifacts {
 public:
  explicit Artifacts(std::filesystem::path dir) : dir_(std::move(dir)) {}
  std::filesystem::path path(const std::string& name) const { return dir_ / name; }
  void text(const std::string& name, const std::string& content);
  // Records a file the caller wrote itself.
  void add(const std::string& name) { names_.push_back(name); }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> names_;
};

// Every command parses and finishes its config before doing any work.
using CommandFn = Outcome (*)(ConfigReader&, const Context&, Artifacts&);

Outcome simulate_command(ConfigReader&, const Context&, Artifacts&);
Outcome simulate_radial_command(ConfigReader&, const Context&, Artifacts&);
Outcome potential_command(ConfigReader&, const Context&, Artifacts&);
Outcome decompose_command(ConfigReader&, const Context&, Artifacts&);

Outcome verify_strichartz(ConfigReader&, const Context&, Artifacts&);
Outcome verify_bilinear(ConfigReader&, const Context&, Artifacts&);
Outcome verify_geometry(ConfigReader&, const Context&, Artifacts&);
Outcome verify_angular(ConfigReader&, const Context&, Artifacts&);
Outcome verify_trilinear(ConfigReader&, const Context&, Artifacts&);
Outcome verify_inflation(ConfigReader&, const Context&, Artifacts&);

std::filesystem::path resolve_input(const Context& ctx, const std::string& path);

}  // namespace qdnls::cli
