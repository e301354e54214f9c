#include "qdnls/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "qdnls/cutoffs.hpp"
#include "qdnls/error.hpp"
#include "qdnls/fft.hpp"
#include "qdnls/report.hpp"

namespace qdnls {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

double min_modulation(const SigmaTriple& t, Vec2 xi1, Vec2 xi2) {
  const Vec2 xi3{-(xi1.x + xi2.x), -(xi1.y + xi2.y)};
  return std::abs(t.s1 * norm2(xi1) + t.s2 * norm2(xi2) + t.s3 * norm2(xi3)) / 3.0;
}

bool ResonanceScanReport::passed() const {
  return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.violations == 0; });
}

ResonanceScanReport resonance_geometry_scan(const ResonanceScanConfig& cfg) {
  if (cfg.radius < 1) throw ValidationError("radius must be positive");
  if (!(cfg.epsilon >= 0.0)) throw ValidationError("epsilon must be nonnegative");
  if (!(cfg.separation > 0.0 && cfg.separation <= 1.0)) throw ValidationError("separation must lie in (0, 1]");

  struct Job {
    std::array<double, 3> coefficients;
    SigmaTriple sigma;
  };
  std::vector<Job> jobs;
  for (const auto& c : cfg.coefficients) {
    const auto coeffs = make_coefficients(c[0], c[1], c[2]);
    if (coeffs.kappa() == 0.0) throw ValidationError("resonance scan needs kappa != 0");
    for (const auto& t : interaction_triples(coeffs)) jobs.push_back({c, t});
  }

  const int R = cfg.radius;
  const long R2 = static_cast<long>(R) * R;
  // Lattice points of the closed disc of radius R.
  std::vector<std::array<int, 2>> disc;
  for (int a = -R; a <= R; ++a) {
    for (int b = -R; b <= R; ++b) {
      if (static_cast<long>(a) * a + static_cast<long>(b) * b <= R2) disc.push_back({a, b});
    }
  }

  ResonanceScanReport out;
  out.entries = parallel_map<ResonanceScanEntry>(jobs.size(), cfg.jobs, [&](std::size_t i) {
    const auto& t = jobs[i].sigma;
    ResonanceScanEntry e{jobs[i].coefficients, t};
    e.separated_constant = 1e300;
    for (const auto& p : disc) {
      const long n1 = static_cast<long>(p[0]) * p[0] + static_cast<long>(p[1]) * p[1];
      for (const auto& q : disc) {
        const long s1 = p[0] + q[0], s2 = p[1] + q[1];
        const long n3 = s1 * s1 + s2 * s2;
        if (n3 > R2) continue;
        const long n2 = static_cast<long>(q[0]) * q[0] + static_cast<long>(q[1]) * q[1];
        const long nmax = std::max({n1, n2, n3});
        if (nmax == 0) continue;
        ++e.triples;
        const double mod = std::abs(t.s1 * n1 + t.s2 * n2 + t.s3 * n3) / 3.0;
        const double ratio = std::sqrt(static_cast<double>(std::min({n1, n2, n3})) / nmax);
        if (ratio < cfg.separation) {
          e.separated_constant = std::min(e.separated_constant, mod / nmax);
        }
        if (mod <= cfg.epsilon * nmax) {
          ++e.low_modulation;
          e.min_size_ratio = std::min(e.min_size_ratio, ratio);
          if (ratio < cfg.separation) ++e.violations;
        }
      }
    }
    if (e.separated_constant == 1e300) e.separated_constant = 0.0;
    return e;
  });
  return out;
}

int AngularScanReport::max_distance() const {
  int m = 0;
  for (const auto& e : entries) m = std::max(m, e.max_distance);
  return m;
}

AngularScanReport angular_separation_scan(const AngularScanConfig& cfg) {
  const SigmaTriple t{cfg.sigma1, cfg.sigma2, cfg.sigma3};
  if (std::abs(t.theta_tilde()) > 1e-12 * std::max({t.s1 * t.s1, t.s2 * t.s2, t.s3 * t.s3})) {
    throw ValidationError("angular separation scan needs theta~ = 0");
  }
  if (t.s1 == 0.0 || t.s2 == 0.0 || t.s3 == 0.0) throw ValidationError("sigmas must be nonzero");
  if (!is_dyadic(cfg.N)) throw ValidationError("N must be dyadic");
  if (cfg.samples < 1) throw ValidationError("samples must be positive");

  AngularScanReport out;
  out.bound = cfg.bound;
  const double N = cfg.N;
  for (int A : cfg.sectors) {
    if (A < 1) throw ValidationError("sector counts must be positive");
    std::mt19937_64 rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(A), 0));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double budget = N * N / (static_cast<double>(A) * A);
    AngularScanEntry e{A, 0, 0};
    auto record = [&](double r1, double r2, double c, double direction, int sign) {
      const double phi = sign * std::acos(std::clamp(c, -1.0, 1.0));
      const Vec2 xi1{r1 * std::cos(direction), r1 * std::sin(direction)};
      const Vec2 xi2{r2 * std::cos(direction + phi), r2 * std::sin(direction + phi)};
      const Vec2 xi3{-(xi1.x + xi2.x), -(xi1.y + xi2.y)};
      const int j1 = sector_of(A, xi1), j2 = sector_of(A, xi2), j3 = sector_of(A, xi3);
      e.max_distance = std::max({e.max_distance, circular_distance(A, j1, j2),
                                 circular_distance(A, j2, j3), circular_distance(A, j1, j3)});
      ++e.accepted;
    };
    for (int s = 0; s < cfg.samples; ++s) {
      const double r1 = N * std::exp2(2.0 * unit(rng) - 1.0);
      const double r2 = N * std::exp2(2.0 * unit(rng) - 1.0);
      // Phi = P + 2 sigma3 r1 r2 cos(angle); |Phi| / 3 <= budget.
      const double P = (t.s1 + t.s3) * r1 * r1 + (t.s2 + t.s3) * r2 * r2;
      const double q = 2.0 * t.s3 * r1 * r2;
      double lo = (-3.0 * budget - P) / q, hi = (3.0 * budget - P) / q;
      if (lo > hi) std::swap(lo, hi);
      // |xi3|^2 = r1^2 + r2^2 + 2 r1 r2 cos in [N^2/4, 4N^2].
      lo = std::max({lo, -1.0, (0.25 * N * N - r1 * r1 - r2 * r2) / (2.0 * r1 * r2)});
      hi = std::min({hi, 1.0, (4.0 * N * N - r1 * r1 - r2 * r2) / (2.0 * r1 * r2)});
      if (lo > hi) continue;
      const double direction = 2.0 * kPi * unit(rng);
      const int sign = unit(rng) < 0.5 ? -1 : 1;
      record(r1, r2, lo + (hi - lo) * unit(rng), direction, sign);
      record(r1, r2, lo, direction, sign);
      record(r1, r2, hi, direction, sign);
    }
    out.entries.push_back(e);
  }
  return out;
}

bool SectorGainReport::passed() const {
  return std::all_of(entries.begin(), entries.end(), [this](const auto& e) { return e.max_scaled <= bound; });
}

SectorGainReport radial_sector_gain(const SectorGainConfig& cfg) {
  if (!(cfg.k_lo > 0.0 && cfg.k_hi > cfg.k_lo)) throw ValidationError("need 0 < k_lo < k_hi");
  if (cfg.basis < 1 || cfg.fields < 1) throw ValidationError("basis and fields must be positive");
  const int B = cfg.basis;
  const double width = (cfg.k_hi - cfg.k_lo) / B;
  std::vector<double> centres(B);
  for (int b = 0; b < B; ++b) centres[b] = cfg.k_lo + (b + 0.5) * width;
  auto profiles = [&](double r, std::vector<double>& phi) {
    for (int b = 0; b < B; ++b) phi[b] = std::exp(-std::pow((r - centres[b]) / width, 2));
  };

  // Random weights are shared across A so every A sees the same fields.
  std::vector<std::vector<Complex>> weights(cfg.fields, std::vector<Complex>(B));
  {
    std::mt19937_64 rng(mix_seed(cfg.seed, 11, 0));
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (auto& w : weights) {
      for (auto& v : w) v = Complex(gauss(rng), gauss(rng));
    }
  }
  auto quadratic = [&](const std::vector<double>& G, const std::vector<Complex>& w) {
    double sum = 0.0;
    for (int a = 0; a < B; ++a) {
      for (int b = 0; b < B; ++b) sum += G[a * B + b] * (std::conj(w[a]) * w[b]).real();
    }
    return sum;
  };

  SectorGainReport out;
  out.bound = cfg.bound;
  const int K = static_cast<int>(std::ceil(cfg.k_hi));
  const double lo2 = cfg.k_lo * cfg.k_lo, hi2 = cfg.k_hi * cfg.k_hi;
  std::vector<double> phi(B);
  for (int A : cfg.sectors) {
    if (A < 1) throw ValidationError("sector counts must be positive");
    std::vector<AngularSector> sectors;
    for (int j = 0; j < A; ++j) sectors.emplace_back(A, j);
    std::vector<double> gram(static_cast<std::size_t>(A) * B * B, 0.0), total(B * B, 0.0);
    for (int k1 = -K; k1 <= K; ++k1) {
      for (int k2 = -K; k2 <= K; ++k2) {
        const double r2 = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
        if (r2 < lo2 || r2 > hi2) continue;
        profiles(std::sqrt(r2), phi);
        const Vec2 xi{static_cast<double>(k1), static_cast<double>(k2)};
        const int centre = sector_of(A, xi);
        for (int a = 0; a < B; ++a) {
          for (int b = 0; b < B; ++b) total[a * B + b] += phi[a] * phi[b];
        }
        for (int d = -2; d <= 2; ++d) {
          const int j = ((centre + d) % A + A) % A;
          const double w = sectors[j].weight(xi);
          if (w == 0.0) continue;
          double* G = &gram[static_cast<std::size_t>(j) * B * B];
          for (int a = 0; a < B; ++a) {
            for (int b = 0; b < B; ++b) G[a * B + b] += w * w * phi[a] * phi[b];
          }
        }
      }
    }
    SectorGainEntry e{A, 0.0};
    std::vector<double> G(B * B);
    for (const auto& w : weights) {
      const double mass = quadratic(total, w);
      for (int j = 0; j < A; ++j) {
        std::copy_n(&gram[static_cast<std::size_t>(j) * B * B], B * B, G.begin());
        e.max_scaled = std::max(e.max_scaled, std::sqrt(A * quadratic(G, w) / mass));
      }
    }
    out.entries.push_back(e);
  }
  return out;
}

}  // namespace qdnls
