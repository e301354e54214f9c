#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "qdnls/coefficients.hpp"
#include "qdnls/vec2.hpp"

namespace qdnls {

// min over tau1 + tau2 + tau3 = 0 of max_j |tau_j + sigma_j |xi_j|^2| with
// xi3 = -(xi1 + xi2). The three modulations sum to the resonance function,
// so the minimum is a third of its magnitude.
double min_modulation(const SigmaTriple& t, Vec2 xi1, Vec2 xi2);

struct ResonanceScanConfig {
  std::vector<std::array<double, 3>> coefficients{{1.0, -1.0, 0.5}, {2.0, 1.0, 1.0}, {1.0, 2.0, 3.0}};
  int radius = 64;
  double epsilon = 1.0 / 64;    // low modulation: min_modulation <= epsilon max|xi_j|^2
  double separation = 1.0 / 8;  // size ratio below which frequencies count as separated
  int jobs = 1;
};

struct ResonanceScanEntry {
  std::array<double, 3> coefficients;
  SigmaTriple sigma;
  long triples = 0;                 // lattice triples visited
  long low_modulation = 0;          // of which low-modulation
  double min_size_ratio = 1.0;      // min N_min/N_max over low-modulation triples
  // min of min_modulation / max|xi_j|^2 over separated triples
  // (N_min/N_max < separation): the empirical constant of the lower bound.
  double separated_constant = 0.0;
  long violations = 0;              // low-modulation triples with N_min/N_max < separation
};

struct ResonanceScanReport {
  std::vector<ResonanceScanEntry> entries;
  bool passed() const;
};

// Exhaustive scan of integer xi1, xi2 with |xi1|, |xi2|, |xi1 + xi2| <= R, for
// every interaction triple of every coefficient set. Throws if some set has
// kappa = 0.
ResonanceScanReport resonance_geometry_scan(const ResonanceScanConfig& config);

struct AngularScanConfig {
  double sigma1 = -1.0, sigma2 = 0.5, sigma3 = -1.0;  // theta~ = 0
  double N = 1024;
  std::vector<int> sectors{64, 128, 256, 512};
  int samples = 100000;  // per A
  double bound = 8;
  std::uint64_t seed = 1;
};

struct AngularScanEntry {
  int A = 0;
  long accepted = 0;         // sampled triples inside the regime
  int max_distance = 0;      // max pairwise circular sector distance
};

struct AngularScanReport {
  std::vector<AngularScanEntry> entries;
  double bound = 8;
  int max_distance() const;
  bool passed() const { return max_distance() <= bound; }
};

// Samples |xi1|, |xi2| in [N/2, 2N] and the angle between them inside the set
// where min_modulation <= N^2 / A^2 (closed form in cos of the angle), keeps
// triples with |xi3| in [N/2, 2N], and records sector distances. Each
// admissible angle interval is also probed at its endpoints. Requires
// theta~ = 0.
AngularScanReport angular_separation_scan(const AngularScanConfig& config);

struct SectorGainConfig {
  std::vector<int> sectors{64, 128, 256, 512, 1024};
  int fields = 100;
  double k_lo = 128, k_hi = 500;  // radial band of integer frequencies
  int basis = 6;                  // Gaussian radial profiles per field
  double bound = 2.0;
  std::uint64_t seed = 1;
};

struct SectorGainEntry {
  int A = 0;
  double max_scaled = 0.0;  // max over fields and j of A^{1/2} |R_j u| / |u|
};

struct SectorGainReport {
  std::vector<SectorGainEntry> entries;
  double bound = 2.0;
  bool passed() const;
};

// Random radial lattice fields c_k = sum_b w_b exp(-((|k| - r_b) / width)^2)
// with complex Gaussian w. Sector masses are quadratic in w, so each A costs
// one pass over the band to build per-sector Gram matrices.
SectorGainReport radial_sector_gain(const SectorGainConfig& config);

}  // namespace qdnls
