#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qdnls/error.hpp"

namespace qdnls::cli {

// A config document that does not match its schema. `path` is a JSON pointer
// to the offending key.
class ConfigError : public ValidationError {
 public:
  ConfigError(std::string path, const std::string& message)
      : ValidationError(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Typed, schema-checked access to one JSON object. Every accessor records its
// key and the value it resolved to (defaults included); finish() rejects keys
// that no accessor asked for. Child readers write into the same resolved tree.
class ConfigReader {
 public:
  explicit ConfigReader(const nlohmann::json& document);

  double number(const std::string& key, double fallback);
  double required_number(const std::string& key);
  int integer(const std::string& key, int fallback);
  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback);
  bool boolean(const std::string& key, bool fallback);
  std::string string(const std::string& key, const std::string& fallback,
                     const std::vector<std::string>& allowed = {});
  std::string required_string(const std::string& key);
  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback);
  std::vector<int> integers(const std::string& key, const std::vector<int>& fallback);
  std::vector<std::vector<double>> number_rows(const std::string& key,
                                               const std::vector<std::vector<double>>& fallback,
                                               std::size_t row_size);
  bool has(const std::string& key) const;

  // Missing objects read as {} so their defaults still get resolved.
  ConfigReader object(const std::string& key);
  ConfigReader required_object(const std::string& key);

  void finish() const;
  const std::string& path() const { return path_; }
  // The resolved document; only meaningful on the root reader.
  const nlohmann::json& resolved() const { return *resolved_root_; }
  // Overrides a resolved value after the fact (e.g. the --seed flag).
  void set(const std::string& key, nlohmann::json value);

 private:
  ConfigReader(const nlohmann::json& document, std::string path,
               std::shared_ptr<nlohmann::json> root, nlohmann::json* out);
  const nlohmann::json* lookup(const std::string& key);
  std::string child_path(const std::string& key) const;
  [[noreturn]] void fail(const std::string& key, const std::string& message) const;

  nlohmann::json document_;
  std::string path_;
  std::shared_ptr<nlohmann::json> resolved_root_;
  nlohmann::json* out_;
  std::vector<std::string> seen_;
};

}  // namespace qdnls::cli
