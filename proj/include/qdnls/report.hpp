#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

namespace qdnls {

struct LogLogFit {
  double exponent = 0.0;
  double intercept = 0.0;
  double stderr_exponent = 0.0;
  int points = 0;

  bool within(double target, double tolerance) const {
    return exponent >= target - tolerance && exponent <= target + tolerance;
  }
};

// Least-squares fit of log y = intercept + exponent * log x. Needs three or
// more points with x, y > 0.
LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

using ParameterPoint = std::vector<std::pair<std::string, double>>;

// One measured point of an empirical-constant sweep. Ratios come from random
// sampling, so best_ratio is a lower bound for the true best constant.
struct EstimateReport {
  std::string estimate_id;
  ParameterPoint parameter_point;
  double best_ratio = 0.0;
  long trials = 0;
  std::string note;

  double parameter(const std::string& name) const;
};

// A family of points sharing an estimate, with the log-log regression of the
// best ratios against one parameter. The fit is present only for four or
// more points.
struct SweepReport {
  std::string estimate_id;
  std::string fit_variable;
  std::vector<EstimateReport> points;
  std::optional<LogLogFit> fit;
  std::vector<std::string> skipped;  // regime violations, with reasons

  double max_ratio() const;
  // Fits log(max best_ratio over equal fit_variable) against log(fit_variable).
  void refit();
};

nlohmann::json to_json(const LogLogFit& fit);
nlohmann::json to_json(const EstimateReport& r);
nlohmann::json to_json(const SweepReport& r);
// Rows "estimate_id,<parameters...>,best_ratio,trials".
std::string to_csv(const std::vector<SweepReport>& reports);

// Evaluates f(0..count-1) on up to `jobs` threads; results keep index order,
// so output never depends on scheduling. The first exception is rethrown.
template <class R>
std::vector<R> parallel_map(std::size_t count, int jobs, const std::function<R(std::size_t)>& f) {
  std::vector<std::optional<R>> slots(count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t i = next++; i < count && !failed; i = next++) {
      try {
        slots[i].emplace(f(i));
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  const std::size_t threads =
      std::min<std::size_t>(count, static_cast<std::size_t>(jobs > 1 ? jobs : 1));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  std::vector<R> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

int default_jobs();

// Independent stream seed for one (experiment seed, a, b) point.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b);

}  // namespace qdnls
