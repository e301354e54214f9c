#pragma once

#include <cstdint>
#include <vector>

#include "qdnls/block_engine.hpp"
#include "qdnls/coefficients.hpp"
#include "qdnls/report.hpp"

namespace qdnls {

// Empirical constants of the bilinear L^2 estimates. Data are random
// block-localized profiles (see BlockProfile); every reported ratio is the
// best over the sampled trials and so only bounds the true constant from
// below.

struct BilinearSweepConfig {
  double sigma1 = 1.0;
  double sigma2 = 1.0;
  std::vector<double> n_max{4, 8, 16, 32, 64, 128, 256};
  std::vector<double> modulations{1, 4};  // every (L1, L2) pair from this list
  int trials = 2;
  double b_prime = 0.45;  // interpolated form, 1/4 < b' < 1/2
  EngineOptions engine;
  std::uint64_t seed = 1;
  int jobs = 1;
};

struct BilinearSweepReport {
  // |P_N3(u1 u2)| / ((N_min/N_max)^1/2 (L1 L2)^1/2 |u1| |u2|)
  SweepReport sharp;
  // |P_N3(u1 u2)| / (N_min^{4 delta} (N_min/N_max)^{1/2 - 2 delta} (L1 L2)^b' |u1| |u2|)
  SweepReport interpolated;
  double baseline_ratio = 0.0;  // N1 = N2 = N3 = 1, L1 = L2 = 1, sharp form
};

// Frequency configurations swept at each N_max (N_max = N below):
//   comparable N1 = N2 = N3 = N, high-low N1 = 1 and N2 = N3 = N,
//   low-high N2 = 1 and N1 = N3 = N, high-high N1 = N2 = N and N3 = 1.
// The fit variable is N_max; its ratio is the best over all configurations.
BilinearSweepReport bilinear_strichartz_sweep(const BilinearSweepConfig& config);

struct AngularSweepConfig {
  double alpha = 1.0, beta = 2.0, gamma = -1.0;  // theta = -3, kappa = -2
  double N = 256;  // N2; N1 and N3 follow the resonant collinear triple
  std::vector<double> modulations{1, 4, 16};   // L1 = L2 = L3
  std::vector<int> sectors{64, 128, 256, 512};
  int trials = 1;
  double much_less = 1.0 / 64;  // instantiation of "<<"
  EngineOptions engine;
  std::uint64_t seed = 1;
  int jobs = 1;
};

struct AngularSweepReport {
  // |Q_L3 P_N3(R_j1 u1 R_j2 u2)| / (A^{-1/2} (L1 L2)^1/2 |u1| |u2|), |j1 - j2| <= 1
  SweepReport near;
  // same LHS / (A^{1/2} N1^{-1} (L1 L2 L3)^1/2 |u1| |u2|), 16 <= |j1 - j2| <= 32
  SweepReport separated;
};

// Sweeps every interaction triple of the system with kappa~ != 0 and
// theta~ < 0; fails if there is none. Points outside the hypotheses
// (L_max << |theta~| N_min^2, 64 <= A, A <= N_max for the separated case) are
// skipped with a reason.
AngularSweepReport angular_bilinear_sweep(const AngularSweepConfig& config);

struct TrilinearConfig {
  double alpha = 1.0, beta = -1.0, gamma = 0.5;
  double s = 0.5;
  double b_prime = 0.45;
  double c = 5.0 / 12;
  std::vector<double> frequencies{16, 32, 64, 128};  // N1 = N2 = N3
  std::vector<double> modulations{1, 4, 16};         // L1 = L2 = L3
  int trials = 1;
  double much_less = 1.0 / 64;
  EngineOptions engine;
  std::uint64_t seed = 1;
  int jobs = 1;
};

struct TrilinearReport {
  // N2 |int u1 u2 u3| / (N1^s (L1 L2 L3)^c |u1| |u2| |u3|), radial data
  SweepReport target;
  // Per N: A^{1/2} max_j |R_j^A u| / |u| at the sector count A ~ N / L_max^{1/2}
  // used by the comparable-frequency argument. Radial data stay O(1); the
  // single-sector control grows like A^{1/2}, which is the gap radiality closes.
  SweepReport radial_sector_mass;
  SweepReport sector_control_mass;
};

// Requires theta = 0 and 5/12 <= c < b' < 1/2.
TrilinearReport trilinear_target_check(const TrilinearConfig& config);

// max_j |R_j^A u| / |u| for u with a = psi_N(|xi|) times [omega_j0^A]: the
// angular factor of the sector mass, exactly (radial part cancels).
double sector_mass_fraction(int A, std::optional<int> occupied_sector);

}  // namespace qdnls
