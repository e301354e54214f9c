#pragma once

#include "qdnls/vec2.hpp"

namespace qdnls {

// C-infinity transition: 0 for x <= 0, 1 for x >= 1, built from exp(-1/x).
double smooth_step(double x);

// Even bump with chi = 1 on [-1, 1] and support in (-2, 2):
//   chi(t) = S(2-|t|) / (S(2-|t|) + S(|t|-1)),  S(x) = exp(-1/x) for x > 0.
double chi(double t);
// psi = chi - chi(2 .), supported in 1/2 < |t| < 2.
double psi(double t);
// psi_N(t) = psi(t/N) for N >= 2 and psi_1 = chi. N must be dyadic.
double psi_dyadic(double N, double t);
// Sum of psi_L over dyadic L < M, i.e. chi(2t/M) for M >= 2 and 0 for M = 1.
double psi_below(double M, double t);

bool is_dyadic(double N);

// Angular partition of unity with A sectors. The direction angle is taken
// modulo pi, so each sector is a pair of antipodal arcs centred at
// pi j / A (mod pi):
//   omega_j^A(theta) = chi(d_j(s)) / sum_m chi(s - m),  s = A (theta mod pi) / pi,
// where d_j is the signed distance from s to j modulo A. The zero frequency
// belongs to sector 0 alone.
class AngularSector {
 public:
  AngularSector(int A, int j);

  int A() const { return A_; }
  int j() const { return j_; }
  double weight(Vec2 xi) const;
  double weight_at_angle(double theta) const;

 private:
  int A_;
  int j_;
};

// Nearest sector centre of a direction (the index whose weight peaks there).
int sector_of(int A, Vec2 xi);
int circular_distance(int A, int j1, int j2);

}  // namespace qdnls
