#include "qdnls/projections.hpp"

#include <cmath>
#include <map>

#include "qdnls/error.hpp"

namespace qdnls {
namespace {

void require_sector_count(const AngularSector& s) {
  if (s.A() < 64) throw ValidationError("angular projections need A >= 64");
}

// Dyadic N (as exponent) whose psi_N can be nonzero at r >= 0.
template <class Visit>
void visit_dyadic(double r, Visit visit) {
  const double c1 = chi(r);
  if (c1 > 0.0) visit(1.0, c1);
  if (r <= 0.5) return;
  const int e = std::max(0, static_cast<int>(std::floor(std::log2(r))));
  for (int k = std::max(1, e); k <= e + 1; ++k) {
    const double N = std::ldexp(1.0, k);
    const double w = psi(r / N);
    if (w != 0.0) visit(N, w);
  }
}

}  // namespace

SpectralField lp_project(const SpectralField& f, double N) {
  psi_dyadic(N, 0.0);  // validates N
  return f.multiplied([N](double a, double b) { return psi_dyadic(N, std::hypot(a, b)); });
}

TimeSpaceField lp_project(const TimeSpaceField& f, double N) {
  psi_dyadic(N, 0.0);
  return f.multiplied([N](double, double a, double b) { return psi_dyadic(N, std::hypot(a, b)); });
}

TimeSpaceField modulation_project(const TimeSpaceField& f, double sigma, double L) {
  psi_dyadic(L, 0.0);
  return f.multiplied([=](double tau, double a, double b) {
    return psi_dyadic(L, tau + sigma * (a * a + b * b));
  });
}

TimeSpaceField modulation_below(const TimeSpaceField& f, double sigma, double M) {
  psi_below(M, 0.0);
  return f.multiplied([=](double tau, double a, double b) {
    return psi_below(M, tau + sigma * (a * a + b * b));
  });
}

TimeSpaceField modulation_at_least(const TimeSpaceField& f, double sigma, double M) {
  psi_below(M, 0.0);
  return f.multiplied([=](double tau, double a, double b) {
    return 1.0 - psi_below(M, tau + sigma * (a * a + b * b));
  });
}

SpectralField angular_project(const SpectralField& f, const AngularSector& sector) {
  require_sector_count(sector);
  return f.multiplied([&](double a, double b) { return sector.weight({a, b}); });
}

TimeSpaceField angular_project(const TimeSpaceField& f, const AngularSector& sector) {
  require_sector_count(sector);
  return f.multiplied([&](double, double a, double b) { return sector.weight({a, b}); });
}

std::vector<double> sector_masses(const SpectralField& f, int A) {
  const Grid2D& g = f.grid();
  const int n = g.points();
  std::vector<double> mass(A, 0.0);
  std::vector<AngularSector> sectors;
  for (int j = 0; j < A; ++j) sectors.emplace_back(A, j);
  for (int i1 = 0; i1 < n; ++i1) {
    for (int i2 = 0; i2 < n; ++i2) {
      const double c2 = std::norm(f.coefficients()[static_cast<std::size_t>(i1) * n + i2]);
      if (c2 == 0.0) continue;
      const Vec2 xi{g.xi(i1), g.xi(i2)};
      const int centre = sector_of(A, xi);
      for (int d = -2; d <= 2; ++d) {
        const int j = ((centre + d) % A + A) % A;
        const double w = sectors[j].weight(xi);
        mass[j] += w * w * c2;
      }
    }
  }
  for (auto& m : mass) m *= g.area();
  return mass;
}

namespace {

template <class Weight>
double weighted_ts_norm(const TimeSpaceField& u, Weight weight) {
  const Grid2D& g = u.grid();
  const int n = g.points(), nt = u.time_points();
  double sum = 0.0;
  std::size_t at = 0;
  for (int it = 0; it < nt; ++it) {
    const double tau = u.tau(it);
    for (int i1 = 0; i1 < n; ++i1) {
      for (int i2 = 0; i2 < n; ++i2, ++at) {
        const double c2 = std::norm(u.coefficients()[at]);
        if (c2 == 0.0) continue;
        sum += c2 * weight(tau, g.xi(i1), g.xi(i2));
      }
    }
  }
  return std::sqrt(sum * u.period() * g.area());
}

}  // namespace

XsbNorm xsb_norm(const TimeSpaceField& u, double s, double b, double sigma) {
  XsbNorm out{};
  out.direct = weighted_ts_norm(u, [=](double tau, double a, double c) {
    const double r2 = a * a + c * c;
    const double mod = tau + sigma * r2;
    return std::pow(1.0 + r2, s) * std::pow(1.0 + mod * mod, b);
  });
  out.dyadic = weighted_ts_norm(u, [=](double tau, double a, double c) {
    const double r2 = a * a + c * c;
    double space = 0.0, time = 0.0;
    visit_dyadic(std::sqrt(r2), [&](double N, double w) { space += std::pow(N, 2 * s) * w * w; });
    visit_dyadic(std::abs(tau + sigma * r2),
                 [&](double L, double w) { time += std::pow(L, 2 * b) * w * w; });
    return space * time;
  });
  return out;
}

XsbNorm xsb_norm_gradient(const TimeSpaceField& u, double s, double b, double sigma) {
  const auto d1 = u.multiplied([](double, double a, double) { return Complex(0.0, a); });
  const auto d2 = u.multiplied([](double, double, double c) { return Complex(0.0, c); });
  const auto n1 = xsb_norm(d1, s, b, sigma);
  const auto n2 = xsb_norm(d2, s, b, sigma);
  return {std::hypot(n1.direct, n2.direct), std::hypot(n1.dyadic, n2.dyadic)};
}

std::vector<BlockNorm> block_norms(const TimeSpaceField& u, double sigma) {
  const Grid2D& g = u.grid();
  const int n = g.points(), nt = u.time_points();
  std::map<std::pair<double, double>, double> blocks;
  std::size_t at = 0;
  for (int it = 0; it < nt; ++it) {
    const double tau = u.tau(it);
    for (int i1 = 0; i1 < n; ++i1) {
      for (int i2 = 0; i2 < n; ++i2, ++at) {
        const double c2 = std::norm(u.coefficients()[at]);
        if (c2 == 0.0) continue;
        const double r2 = g.xi(i1) * g.xi(i1) + g.xi(i2) * g.xi(i2);
        visit_dyadic(std::sqrt(r2), [&](double N, double wn) {
          visit_dyadic(std::abs(tau + sigma * r2), [&](double L, double wl) {
            blocks[{N, L}] += c2 * wn * wn * wl * wl;
          });
        });
      }
    }
  }
  std::vector<BlockNorm> out;
  const double measure = u.period() * g.area();
  for (const auto& [key, sum] : blocks) out.push_back({key.first, key.second, std::sqrt(sum * measure)});
  return out;
}

}  // namespace qdnls
