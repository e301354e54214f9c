#include "qdnls/bilinear.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "qdnls/cutoffs.hpp"
#include "qdnls/error.hpp"
#include "quadrature.hpp"

namespace qdnls {

namespace {

constexpr double kPi = std::numbers::pi;

void require_dyadic(const std::vector<double>& values, const char* what) {
  if (values.empty()) throw ValidationError(std::string(what) + " must not be empty");
  for (double v : values) {
    if (!is_dyadic(v)) throw ValidationError(std::string(what) + " must be dyadic");
  }
}

std::string format(double v) {
  std::string s = std::to_string(v);
  s.erase(s.find_last_not_of('0') + 1);
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

struct BilinearJob {
  double N1, N2, N3, L1, L2;
  int config;  // index into kConfigs, or -1 for the baseline
};

constexpr const char* kConfigs[] = {"comparable", "high-low", "low-high", "high-high"};

BilinearJob make_job(int config, double N, double L1, double L2) {
  switch (config) {
    case 0: return {N, N, N, L1, L2, config};
    case 1: return {1, N, N, L1, L2, config};
    case 2: return {N, 1, N, L1, L2, config};
    default: return {N, N, 1, L1, L2, config};
  }
}

}  // namespace

BilinearSweepReport bilinear_strichartz_sweep(const BilinearSweepConfig& cfg) {
  if (cfg.sigma1 == 0.0 || cfg.sigma2 == 0.0) throw ValidationError("sigma1, sigma2 must be nonzero");
  if (cfg.sigma1 + cfg.sigma2 == 0.0) throw ValidationError("bilinear estimate needs sigma1 + sigma2 != 0");
  if (!(cfg.b_prime > 0.25 && cfg.b_prime < 0.5)) throw ValidationError("b' must lie in (1/4, 1/2)");
  if (cfg.trials < 1) throw ValidationError("trials must be positive");
  require_dyadic(cfg.n_max, "n_max");
  require_dyadic(cfg.modulations, "modulations");
  const double delta = 0.5 - cfg.b_prime;

  std::vector<BilinearJob> jobs{{1, 1, 1, 1, 1, -1}};
  for (double N : cfg.n_max) {
    for (int c = 0; c < 4; ++c) {
      for (double L1 : cfg.modulations) {
        for (double L2 : cfg.modulations) jobs.push_back(make_job(c, N, L1, L2));
      }
    }
  }

  struct Ratios {
    double sharp = 0.0, interpolated = 0.0;
  };
  const auto results = parallel_map<Ratios>(jobs.size(), cfg.jobs, [&](std::size_t i) {
    const auto& job = jobs[i];
    const double n_min = std::min({job.N1, job.N2, job.N3});
    const double n_max = std::max({job.N1, job.N2, job.N3});
    const double sharp_rhs = std::sqrt(n_min / n_max * job.L1 * job.L2);
    const double interp_rhs = std::pow(n_min, 4.0 * delta) * std::pow(n_min / n_max, 0.5 - 2.0 * delta) *
                              std::pow(job.L1 * job.L2, cfg.b_prime);
    Ratios r;
    for (int t = 0; t < cfg.trials; ++t) {
      // The stream depends on the configuration and trial only, so each trial
      // is the same profile shape at every N.
      std::mt19937_64 rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(job.config + 1), t));
      const auto u1 = random_block(job.N1, job.L1, cfg.sigma1, rng);
      const auto u2 = random_block(job.N2, job.L2, cfg.sigma2, rng);
      const auto v = bilinear_lhs(u1, u2, job.N3, std::nullopt, cfg.engine);
      if (v.norms == 0.0) continue;
      r.sharp = std::max(r.sharp, v.lhs / (sharp_rhs * v.norms));
      r.interpolated = std::max(r.interpolated, v.lhs / (interp_rhs * v.norms));
    }
    return r;
  });

  BilinearSweepReport out;
  out.sharp = {"bilinear_sharp", "N_max", {}, std::nullopt, {}};
  out.interpolated = {"bilinear_interpolated", "N_max", {}, std::nullopt, {}};
  out.baseline_ratio = results[0].sharp;
  for (std::size_t i = 1; i < jobs.size(); ++i) {
    const auto& job = jobs[i];
    const ParameterPoint point{{"N_max", std::max({job.N1, job.N2, job.N3})},
                               {"N1", job.N1}, {"N2", job.N2}, {"N3", job.N3},
                               {"L1", job.L1}, {"L2", job.L2}};
    const std::string note = kConfigs[job.config];
    out.sharp.points.push_back({"bilinear_sharp", point, results[i].sharp, cfg.trials, note});
    out.interpolated.points.push_back({"bilinear_interpolated", point, results[i].interpolated, cfg.trials, note});
  }
  out.sharp.refit();
  out.interpolated.refit();
  return out;
}

namespace {

struct AngularJob {
  int triple;
  std::array<double, 3> N;
  double L;
  int A;
  int j2;
  bool separated;
};

double nearest_dyadic(double x) { return std::max(1.0, std::exp2(std::round(std::log2(x)))); }

// Dyadic sizes around a resonant collinear triple: xi1 = a e, xi2 = e with
// sigma1 a^2 + sigma2 + sigma3 (a + 1)^2 = 0, which has real roots exactly
// when theta~ < 0. Of the two roots the one with the most balanced sizes
// wins; N2 = N. Without this the resonant set of equal-N blocks sits where
// the bumps vanish.
std::array<double, 3> resonant_sizes(const SigmaTriple& t, double N) {
  const double qa = t.s1 + t.s3, qb = 2.0 * t.s3, qc = t.s2 + t.s3;
  std::vector<double> roots;
  if (qa == 0.0) {
    roots.push_back(-qc / qb);
  } else {
    const double disc = std::sqrt(std::max(0.0, qb * qb - 4.0 * qa * qc));
    roots.push_back((-qb + disc) / (2.0 * qa));
    roots.push_back((-qb - disc) / (2.0 * qa));
  }
  double best_a = roots.front(), best_spread = 1e300;
  for (double a : roots) {
    const double lo = std::min({std::abs(a), 1.0, std::abs(a + 1.0)});
    const double hi = std::max({std::abs(a), 1.0, std::abs(a + 1.0)});
    if (lo > 0.0 && hi / lo < best_spread) {
      best_spread = hi / lo;
      best_a = a;
    }
  }
  return {nearest_dyadic(std::abs(best_a) * N), N, nearest_dyadic(std::abs(best_a + 1.0) * N)};
}

}  // namespace

AngularSweepReport angular_bilinear_sweep(const AngularSweepConfig& cfg) {
  const auto coeffs = make_coefficients(cfg.alpha, cfg.beta, cfg.gamma);
  if (!is_dyadic(cfg.N)) throw ValidationError("N must be dyadic");
  require_dyadic(cfg.modulations, "modulations");
  if (cfg.trials < 1) throw ValidationError("trials must be positive");
  if (!(cfg.much_less > 0.0)) throw ValidationError("much_less must be positive");
  const auto triples = interaction_triples(coeffs);

  AngularSweepReport out;
  out.near = {"angular_near", "A", {}, std::nullopt, {}};
  out.separated = {"angular_separated", "A", {}, std::nullopt, {}};
  std::vector<AngularJob> jobs;
  bool any_triple = false;
  for (int k = 0; k < 3; ++k) {
    const auto& t = triples[k];
    const std::string tag = "triple " + std::to_string(k) + ": ";
    if (t.kappa_tilde() == 0.0 || !(t.theta_tilde() < 0.0)) {
      out.near.skipped.push_back(tag + "needs kappa~ != 0 and theta~ < 0");
      continue;
    }
    if (t.s1 + t.s2 == 0.0) {
      out.near.skipped.push_back(tag + "sigma1 + sigma2 = 0");
      continue;
    }
    any_triple = true;
    const auto sizes = resonant_sizes(t, cfg.N);
    const double n_min = *std::min_element(sizes.begin(), sizes.end());
    const double n_max = *std::max_element(sizes.begin(), sizes.end());
    for (double L : cfg.modulations) {
      if (L > cfg.much_less * std::abs(t.theta_tilde()) * n_min * n_min) {
        const std::string why = tag + "L=" + format(L) + ": L_max not << |theta~| N_min^2";
        out.near.skipped.push_back(why);
        out.separated.skipped.push_back(why);
        continue;
      }
      for (int A : cfg.sectors) {
        if (A < 64 || !is_dyadic(A)) {
          out.near.skipped.push_back(tag + "A=" + std::to_string(A) + ": needs dyadic A >= 64");
          continue;
        }
        for (int j2 : {0, 1}) jobs.push_back({k, sizes, L, A, j2, false});
        if (A > n_max) {
          out.separated.skipped.push_back(tag + "A=" + std::to_string(A) + ": needs A <= N_max");
          continue;
        }
        for (int j2 : {16, 32}) jobs.push_back({k, sizes, L, A, j2, true});
      }
    }
  }
  if (!any_triple) throw ValidationError("no interaction with kappa~ != 0 and theta~ < 0");

  const auto ratios = parallel_map<double>(jobs.size(), cfg.jobs, [&](std::size_t i) {
    const auto& job = jobs[i];
    const auto& t = triples[job.triple];
    const double L = job.L, A = job.A;
    const double rhs = job.separated ? std::sqrt(A) / job.N[0] * std::pow(L, 1.5) : L / std::sqrt(A);
    double best = 0.0;
    for (int trial = 0; trial < cfg.trials; ++trial) {
      std::mt19937_64 rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(job.triple), trial));
      const auto u1 = random_block(job.N[0], L, t.s1, rng, AngularSector(job.A, 0));
      const auto u2 = random_block(job.N[1], L, t.s2, rng, AngularSector(job.A, job.j2));
      const auto v = bilinear_lhs(u1, u2, job.N[2], OutputModulation{t.s3, L}, cfg.engine);
      if (v.norms > 0.0) best = std::max(best, v.lhs / (rhs * v.norms));
    }
    return best;
  });

  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& job = jobs[i];
    const auto& t = triples[job.triple];
    ParameterPoint point{{"A", static_cast<double>(job.A)}, {"N1", job.N[0]}, {"N2", job.N[1]},
                         {"N3", job.N[2]}, {"L", job.L},
                         {"j1", 0.0}, {"j2", static_cast<double>(job.j2)},
                         {"sigma1", t.s1}, {"sigma2", t.s2}, {"sigma3", t.s3}};
    auto& sweep = job.separated ? out.separated : out.near;
    sweep.points.push_back({sweep.estimate_id, std::move(point), ratios[i], cfg.trials,
                            "triple " + std::to_string(job.triple)});
  }
  out.near.refit();
  out.separated.refit();
  return out;
}

double sector_mass_fraction(int A, std::optional<int> occupied) {
  const auto& rule = detail::gauss_rule(16);
  // Weights are pi/A-periodic in shape, so integrate over the full circle
  // with panels resolving each sector.
  auto mass = [&](const AngularSector& s) {
    return detail::composite(rule, 8 * A, [&](double th) {
      double w = s.weight_at_angle(th);
      if (occupied) w *= AngularSector(A, *occupied).weight_at_angle(th);
      return w * w;
    }, 0.0, 2.0 * kPi);
  };
  double total = 2.0 * kPi;
  if (occupied) {
    total = detail::composite(rule, 8 * A, [&](double th) {
      const double w = AngularSector(A, *occupied).weight_at_angle(th);
      return w * w;
    }, 0.0, 2.0 * kPi);
  }
  // By rotation symmetry only sectors near the occupied one can win.
  double best = 0.0;
  const int centre = occupied.value_or(0);
  for (int d = -3; d <= 3; ++d) {
    const int j = ((centre + d) % A + A) % A;
    best = std::max(best, mass(AngularSector(A, j)));
  }
  return std::sqrt(best / total);
}

TrilinearReport trilinear_target_check(const TrilinearConfig& cfg) {
  const auto coeffs = make_coefficients(cfg.alpha, cfg.beta, cfg.gamma);
  if (!coeffs.theta_is_zero()) throw ValidationError("trilinear target check needs theta = 0");
  if (!(5.0 / 12 <= cfg.c && cfg.c < cfg.b_prime && cfg.b_prime < 0.5)) {
    throw ValidationError("needs 5/12 <= c < b' < 1/2");
  }
  require_dyadic(cfg.frequencies, "frequencies");
  require_dyadic(cfg.modulations, "modulations");
  if (cfg.trials < 1) throw ValidationError("trials must be positive");
  // Any interaction works for theta = 0; pick one with sigma1 + sigma2 != 0.
  const auto triples = interaction_triples(coeffs);
  const auto it = std::find_if(triples.begin(), triples.end(),
                               [](const SigmaTriple& t) { return t.s1 + t.s2 != 0.0; });
  if (it == triples.end()) throw ValidationError("no interaction with sigma1 + sigma2 != 0");
  const SigmaTriple t = *it;

  TrilinearReport out;
  out.target = {"trilinear_target", "N", {}, std::nullopt, {}};
  out.radial_sector_mass = {"radial_sector_mass", "A", {}, std::nullopt, {}};
  out.sector_control_mass = {"sector_control_mass", "A", {}, std::nullopt, {}};

  struct Job {
    double N, L;
  };
  std::vector<Job> jobs;
  for (double N : cfg.frequencies) {
    for (double L : cfg.modulations) {
      if (L > cfg.much_less * N * N) {
        out.target.skipped.push_back("N=" + format(N) + ", L=" + format(L) +
                                     ": outside the low-modulation case L_max << N^2");
        continue;
      }
      jobs.push_back({N, L});
    }
  }
  const auto ratios = parallel_map<double>(jobs.size(), cfg.jobs, [&](std::size_t i) {
    const auto [N, L] = jobs[i];
    // N1 = N2, so the (N1/N2)^eps factor is 1.
    const double rhs = std::pow(N, cfg.s) * std::pow(L * L * L, cfg.c);
    double best = 0.0;
    for (int trial = 0; trial < cfg.trials; ++trial) {
      std::mt19937_64 rng(mix_seed(cfg.seed, 3, trial));
      const auto u1 = random_block(N, L, t.s1, rng);
      const auto u2 = random_block(N, L, t.s2, rng);
      const auto u3 = random_block(N, L, t.s3, rng);
      const double norms = u1.norm() * u2.norm() * u3.norm();
      if (norms == 0.0) continue;
      const double lhs = N * std::abs(trilinear_integral(u1, u2, u3, cfg.engine));
      best = std::max(best, lhs / (rhs * norms));
    }
    return best;
  });

  std::vector<int> sector_counts;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto [N, L] = jobs[i];
    // Sector count of the comparable-frequency argument: L_max ~ N^2 A^{-2}.
    const int A = std::max(1, static_cast<int>(std::exp2(std::floor(std::log2(N / std::sqrt(L))))));
    out.target.points.push_back({"trilinear_target",
                                 {{"N", N}, {"L", L}, {"A", static_cast<double>(A)},
                                  {"sigma1", t.s1}, {"sigma2", t.s2}, {"sigma3", t.s3}},
                                 ratios[i], cfg.trials, "radial data"});
    if (std::find(sector_counts.begin(), sector_counts.end(), A) == sector_counts.end()) {
      sector_counts.push_back(A);
    }
  }
  std::sort(sector_counts.begin(), sector_counts.end());
  for (int A : sector_counts) {
    const double gain = std::sqrt(static_cast<double>(A));
    out.radial_sector_mass.points.push_back(
        {"radial_sector_mass", {{"A", static_cast<double>(A)}}, gain * sector_mass_fraction(A, std::nullopt),
         1, "exact angular integral"});
    out.sector_control_mass.points.push_back(
        {"sector_control_mass", {{"A", static_cast<double>(A)}}, gain * sector_mass_fraction(A, 0), 1,
         "data in one sector"});
  }
  out.target.refit();
  out.radial_sector_mass.refit();
  out.sector_control_mass.refit();
  return out;
}

}  // namespace qdnls
