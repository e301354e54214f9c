#include "config_reader.hpp"

#include <algorithm>
#include <cmath>

namespace qdnls::cli {

using nlohmann::json;

ConfigReader::ConfigReader(const json& document)
    : ConfigReader(document, "", std::make_shared<json>(json::object()), nullptr) {}

ConfigReader::ConfigReader(const json& document, std::string path, std::shared_ptr<json> root,
                           json* out)
    : document_(document), path_(std::move(path)), resolved_root_(std::move(root)),
      out_(out ? out : resolved_root_.get()) {
  if (!document_.is_object()) throw ConfigError(path_.empty() ? "/" : path_, "expected an object");
}

std::string ConfigReader::child_path(const std::string& key) const { return path_ + "/" + key; }

void ConfigReader::fail(const std::string& key, const std::string& message) const {
  throw ConfigError(child_path(key), message);
}

bool ConfigReader::has(const std::string& key) const { return document_.contains(key); }

const json* ConfigReader::lookup(const std::string& key) {
  seen_.push_back(key);
  const auto it = document_.find(key);
  return it == document_.end() || it->is_null() ? nullptr : &*it;
}

void ConfigReader::set(const std::string& key, json value) { (*out_)[key] = std::move(value); }

double ConfigReader::number(const std::string& key, double fallback) {
  const json* v = lookup(key);
  double x = fallback;
  if (v) {
    if (!v->is_number()) fail(key, "expected a number");
    x = v->get<double>();
    if (!std::isfinite(x)) fail(key, "expected a finite number");
  }
  set(key, x);
  return x;
}

double ConfigReader::required_number(const std::string& key) {
  if (!document_.contains(key)) fail(key, "required key is missing");
  return number(key, 0.0);
}

int ConfigReader::integer(const std::string& key, int fallback) {
  const json* v = lookup(key);
  int x = fallback;
  if (v) {
    if (!v->is_number_integer()) fail(key, "expected an integer");
    const auto wide = v->get<long long>();
    if (wide < -(1LL << 31) || wide >= (1LL << 31)) fail(key, "integer out of range");
    x = static_cast<int>(wide);
  }
  set(key, x);
  return x;
}

std::uint64_t ConfigReader::unsigned_integer(const std::string& key, std::uint64_t fallback) {
  const json* v = lookup(key);
  std::uint64_t x = fallback;
  if (v) {
    if (!v->is_number_unsigned()) fail(key, "expected a nonnegative integer");
    x = v->get<std::uint64_t>();
  }
  set(key, x);
  return x;
}

bool ConfigReader::boolean(const std::string& key, bool fallback) {
  const json* v = lookup(key);
  bool x = fallback;
  if (v) {
    if (!v->is_boolean()) fail(key, "expected true or false");
    x = v->get<bool>();
  }
  set(key, x);
  return x;
}

std::string ConfigReader::string(const std::string& key, const std::string& fallback,
                                 const std::vector<std::string>& allowed) {
  const json* v = lookup(key);
  std::string x = fallback;
  if (v) {
    if (!v->is_string()) fail(key, "expected a string");
    x = v->get<std::string>();
  }
  if (!allowed.empty() && std::find(allowed.begin(), allowed.end(), x) == allowed.end()) {
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
    fail(key, "must be one of " + list);
  }
  set(key, x);
  return x;
}

std::string ConfigReader::required_string(const std::string& key) {
  if (!document_.contains(key)) fail(key, "required key is missing");
  return string(key, "");
}

std::vector<double> ConfigReader::numbers(const std::string& key, const std::vector<double>& fallback) {
  const json* v = lookup(key);
  std::vector<double> x = fallback;
  if (v) {
    if (!v->is_array()) fail(key, "expected an array of numbers");
    x.clear();
    for (const auto& e : *v) {
      if (!e.is_number()) fail(key, "expected an array of numbers");
      x.push_back(e.get<double>());
    }
  }
  set(key, x);
  return x;
}

std::vector<int> ConfigReader::integers(const std::string& key, const std::vector<int>& fallback) {
  const json* v = lookup(key);
  std::vector<int> x = fallback;
  if (v) {
    if (!v->is_array()) fail(key, "expected an array of integers");
    x.clear();
    for (const auto& e : *v) {
      if (!e.is_number_integer()) fail(key, "expected an array of integers");
      x.push_back(e.get<int>());
    }
  }
  set(key, x);
  return x;
}

std::vector<std::vector<double>> ConfigReader::number_rows(const std::string& key,
                                                           const std::vector<std::vector<double>>& fallback,
                                                           std::size_t row_size) {
  const json* v = lookup(key);
  auto x = fallback;
  if (v) {
    const std::string what = "expected an array of " + std::to_string(row_size) + "-number arrays";
    if (!v->is_array()) fail(key, what);
    x.clear();
    for (const auto& row : *v) {
      if (!row.is_array() || row.size() != row_size) fail(key, what);
      std::vector<double> r;
      for (const auto& e : row) {
        if (!e.is_number()) fail(key, what);
        r.push_back(e.get<double>());
      }
      x.push_back(r);
    }
  }
  set(key, x);
  return x;
}

ConfigReader ConfigReader::object(const std::string& key) {
  const json* v = lookup(key);
  if (v && !v->is_object()) fail(key, "expected an object");
  json& slot = (*out_)[key];
  slot = json::object();
  return ConfigReader(v ? *v : json::object(), child_path(key), resolved_root_, &slot);
}

ConfigReader ConfigReader::required_object(const std::string& key) {
  if (!document_.contains(key)) fail(key, "required key is missing");
  return object(key);
}

void ConfigReader::finish() const {
  for (const auto& [key, value] : document_.items()) {
    if (std::find(seen_.begin(), seen_.end(), key) == seen_.end()) fail(key, "unknown key");
  }
}

}  // namespace qdnls::cli
