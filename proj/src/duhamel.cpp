#include <algorithm>
#include <cmath>

#include "kernel.hpp"
#include "qdnls/error.hpp"
#include "qdnls/solver.hpp"

namespace qdnls {

using detail::Kernel;
using detail::Packed;

DuhamelReport duhamel_iterate(const SystemState& data, const SystemCoefficients& c,
                              const DuhamelConfig& config) {
  if (config.iterations < 1) throw ValidationError("iteration count must be >= 1");
  if (config.time_samples < 2 || config.time_samples % 2 != 0) {
    throw ValidationError("time_samples must be even and >= 2");
  }
  if (!(config.T > 0.0)) throw ValidationError("T must be positive");
  if (data.form() != Form::cartesian) throw ValidationError("Duhamel iteration needs Cartesian data");

  const Kernel kernel(data.grid(), c, Form::cartesian, config.dealias);
  Packed p0 = kernel.pack(data);
  kernel.project(p0);
  const int nt = config.time_samples;
  const double h = config.T / nt;
  const auto& xi2 = kernel.xi2();
  const int comps = kernel.components();
  const double area = data.grid().area();

  std::vector<Packed> prev(nt + 1, kernel.zeros());
  std::vector<Packed> integrand(nt + 1, kernel.zeros());
  Packed scratch;

  // Phases exp(+i t_j sigma |xi|^2) are reused every iteration.
  auto phase = [&](int comp, int j, std::size_t i) {
    return std::polar(1.0, j * h * kernel.sigma(comp) * xi2[i]);
  };

  std::vector<double> differences, factors;
  for (int k = 1; k <= config.iterations; ++k) {
    for (int j = 0; j <= nt; ++j) {
      kernel.nonlinear(prev[j], scratch);
      for (int comp = 0; comp < comps; ++comp) {
        for (std::size_t i = 0; i < xi2.size(); ++i) integrand[j][comp][i] = phase(comp, j, i) * scratch[comp][i];
      }
    }
    std::vector<Packed> next(nt + 1, kernel.zeros());
    std::vector<Packed> partial(nt + 1, kernel.zeros());
    for (int j = 1; j <= nt; ++j) {
      for (int comp = 0; comp < comps; ++comp) {
        auto& out = partial[j][comp];
        const auto& g = integrand;
        for (std::size_t i = 0; i < xi2.size(); ++i) {
          if (j % 2 == 0) {
            out[i] = partial[j - 2][comp][i] +
                     h / 3.0 * (g[j - 2][comp][i] + 4.0 * g[j - 1][comp][i] + g[j][comp][i]);
          } else {
            out[i] = partial[j - 1][comp][i] +
                     h / 12.0 * (5.0 * g[j - 1][comp][i] + 8.0 * g[j][comp][i] - g[j + 1][comp][i]);
          }
        }
      }
    }
    double worst = 0.0;
    for (int j = 0; j <= nt; ++j) {
      double sum = 0.0;
      for (int comp = 0; comp < comps; ++comp) {
        for (std::size_t i = 0; i < xi2.size(); ++i) {
          const Complex value = std::conj(phase(comp, j, i)) * (p0[comp][i] + partial[j][comp][i]);
          next[j][comp][i] = value;
          sum += std::pow(1.0 + xi2[i], config.s) * std::norm(value - prev[j][comp][i]);
        }
      }
      worst = std::max(worst, std::sqrt(area * sum));
    }
    differences.push_back(worst);
    if (k >= 2) {
      const double before = differences[k - 2];
      factors.push_back(before > 0.0 ? worst / before : 0.0);
    }
    prev = std::move(next);
  }
  const double max_factor = factors.empty() ? 0.0 : *std::max_element(factors.begin(), factors.end());
  const bool contracting =
      std::all_of(factors.begin(), factors.end(), [](double f) { return f < 1.0; });
  return DuhamelReport{std::move(differences), std::move(factors), contracting, max_factor,
                       kernel.unpack(prev[nt], data.time + config.T)};
}

}  // namespace qdnls
