#pragma once

#include <cstdint>
#include <vector>

#include "qdnls/report.hpp"
#include "qdnls/spectral_field.hpp"

namespace qdnls {

// 1/p + 1/q = 1/2 with p > 2; throws ValidationError otherwise.
void check_admissible(double p, double q);

struct StrichartzConfig {
  double sigma = 1.0;
  double p = 4.0;
  double q = 4.0;
  int trials = 4;
  std::vector<double> frequencies{1, 2, 4, 8, 16, 32};  // carrier |xi| of the packets
  std::vector<double> modulations{16, 32, 64, 128};     // L values for the Q_L check
  double half_width = 4.0;
  int points = 256;
  double window = 0.5;   // [0, T] for the free estimate
  int time_samples = 64; // even
  std::uint64_t seed = 1;
};

struct StrichartzReport {
  SweepReport free_wave;   // |e^{it sigma Lap} phi|_{L^p L^q} / |phi|_2 against the carrier
  SweepReport modulation;  // |Q_L u|_{L^p L^q} / (L^1/2 |Q_L u|_2) against L
  // Relative mismatch of the free ratio under phi -> lambda phi(lambda x),
  // T -> T / lambda^2 (exactly scale invariant).
  double rescaling_mismatch = 0.0;
};

// L^p([0, T]; L^q) norm of the free evolution, Simpson in time.
double free_strichartz_norm(const SpectralField& phi, double sigma, double p, double q, double T,
                            int time_samples);

// Inverse Fourier transform of psi at s, i.e. (1/2pi) int psi(theta) e^{i s theta}.
double psi_inverse_transform(double s);

StrichartzReport strichartz_ratio(const StrichartzConfig& config);

}  // namespace qdnls
