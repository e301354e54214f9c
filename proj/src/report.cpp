#include "qdnls/report.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "qdnls/error.hpp"

namespace qdnls {

LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ValidationError("fit_loglog: size mismatch");
  if (x.size() < 3) throw ValidationError("fit_loglog: needs at least three points");
  const std::size_t n = x.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw ValidationError("fit_loglog: values must be positive");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw ValidationError("fit_loglog: abscissae must not all coincide");
  LogLogFit fit;
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - fit.intercept - fit.exponent * lx[i];
    rss += r * r;
  }
  fit.stderr_exponent = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
  fit.points = static_cast<int>(n);
  return fit;
}

double EstimateReport::parameter(const std::string& name) const {
  for (const auto& [k, v] : parameter_point) {
    if (k == name) return v;
  }
  throw ValidationError("report has no parameter '" + name + "'");
}

double SweepReport::max_ratio() const {
  double m = 0.0;
  for (const auto& p : points) m = std::max(m, p.best_ratio);
  return m;
}

void SweepReport::refit() {
  fit.reset();
  std::map<double, double> best;
  for (const auto& p : points) {
    const double v = p.parameter(fit_variable);
    best[v] = std::max(best[v], p.best_ratio);
  }
  if (best.size() < 4) return;
  std::vector<double> x, y;
  for (const auto& [k, v] : best) {
    if (v <= 0.0) return;
    x.push_back(k);
    y.push_back(v);
  }
  fit = fit_loglog(x, y);
}

nlohmann::json to_json(const LogLogFit& fit) {
  return {{"exponent", fit.exponent},
          {"intercept", fit.intercept},
          {"stderr", fit.stderr_exponent},
          {"points", fit.points}};
}

nlohmann::json to_json(const EstimateReport& r) {
  nlohmann::json point = nlohmann::json::object();
  for (const auto& [k, v] : r.parameter_point) point[k] = v;
  nlohmann::json j = {{"estimate_id", r.estimate_id},
                      {"parameter_point", point},
                      {"best_ratio", r.best_ratio},
                      {"trials", r.trials}};
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

nlohmann::json to_json(const SweepReport& r) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : r.points) pts.push_back(to_json(p));
  nlohmann::json j = {{"estimate_id", r.estimate_id},
                      {"fit_variable", r.fit_variable},
                      {"max_ratio", r.max_ratio()},
                      {"points", pts},
                      {"skipped", r.skipped},
                      {"ratios_are_lower_bounds", true}};
  j["fit"] = r.fit ? to_json(*r.fit) : nlohmann::json(nullptr);
  return j;
}

std::string to_csv(const std::vector<SweepReport>& reports) {
  std::ostringstream out;
  out.precision(17);
  out << "estimate_id,parameters,best_ratio,trials\n";
  for (const auto& r : reports) {
    for (const auto& p : r.points) {
      out << p.estimate_id << ",";
      for (std::size_t i = 0; i < p.parameter_point.size(); ++i) {
        if (i) out << ";";
        out << p.parameter_point[i].first << "=" << p.parameter_point[i].second;
      }
      out << "," << p.best_ratio << "," << p.trials << "\n";
    }
  }
  return out.str();
}

int default_jobs() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::seed_seq seq{seed, a, b};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

}  // namespace qdnls
