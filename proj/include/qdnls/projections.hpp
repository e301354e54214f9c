#pragma once

#include <vector>

#include "qdnls/cutoffs.hpp"
#include "qdnls/spectral_field.hpp"
#include "qdnls/time_space_field.hpp"

namespace qdnls {

// P_N: multiplier psi_N(|xi|).
SpectralField lp_project(const SpectralField& f, double N);
TimeSpaceField lp_project(const TimeSpaceField& f, double N);

// Q_L^sigma: multiplier psi_L(tau + sigma |xi|^2); Q_{<M} and Q_{>=M} are the
// partial sums over L < M and L >= M.
TimeSpaceField modulation_project(const TimeSpaceField& f, double sigma, double L);
TimeSpaceField modulation_below(const TimeSpaceField& f, double sigma, double M);
TimeSpaceField modulation_at_least(const TimeSpaceField& f, double sigma, double M);

// R_j^A: multiplier omega_j^A(direction of xi).
SpectralField angular_project(const SpectralField& f, const AngularSector& sector);
TimeSpaceField angular_project(const TimeSpaceField& f, const AngularSector& sector);

// |R_j^A f|_{L2}^2 for every j in one pass (each frequency touches at most
// four sectors).
std::vector<double> sector_masses(const SpectralField& f, int A);

struct XsbNorm {
  double direct;  // weighted L2 with <xi>^s <tau + sigma|xi|^2>^b
  double dyadic;  // (sum_N sum_L N^2s L^2b |Q_L P_N u|^2)^1/2
  double ratio() const { return direct > 0.0 ? dyadic / direct : 1.0; }
};

XsbNorm xsb_norm(const TimeSpaceField& u, double s, double b, double sigma);
// The quotient-space variant: the X^{s,b} norm of grad u.
XsbNorm xsb_norm_gradient(const TimeSpaceField& u, double s, double b, double sigma);

struct BlockNorm {
  double N;
  double L;
  double value;  // |Q_L^sigma P_N u|_{L2}
};

// All nonzero dyadic block norms, ordered by (N, L).
std::vector<BlockNorm> block_norms(const TimeSpaceField& u, double sigma);

}  // namespace qdnls
