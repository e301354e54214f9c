#include "qdnls/cutoffs.hpp"

#include <cmath>
#include <numbers>

#include "qdnls/error.hpp"

namespace qdnls {
namespace {

double glue(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

// Direction angle reduced to [0, pi), scaled to [0, A).
double sector_coordinate(int A, double theta) {
  double r = std::fmod(theta, std::numbers::pi);
  if (r < 0.0) r += std::numbers::pi;
  double s = A * r / std::numbers::pi;
  return s >= A ? s - A : s;
}

}  // namespace

double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = glue(x), b = glue(1.0 - x);
  return a / (a + b);
}

double chi(double t) {
  const double a = std::abs(t);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  const double up = glue(2.0 - a), down = glue(a - 1.0);
  return up / (up + down);
}

double psi(double t) { return chi(t) - chi(2.0 * t); }

bool is_dyadic(double N) {
  if (!(N >= 1.0) || !std::isfinite(N)) return false;
  int e = 0;
  return std::frexp(N, &e) == 0.5;
}

double psi_dyadic(double N, double t) {
  if (!is_dyadic(N)) throw ValidationError("dyadic scale must be a power of two >= 1");
  return N == 1.0 ? chi(t) : psi(t / N);
}

double psi_below(double M, double t) {
  if (!is_dyadic(M)) throw ValidationError("dyadic scale must be a power of two >= 1");
  return M == 1.0 ? 0.0 : chi(2.0 * t / M);
}

AngularSector::AngularSector(int A, int j) : A_(A), j_(j) {
  if (A < 4 || (A & (A - 1)) != 0) throw ValidationError("sector count A must be a power of two");
  if (j < 0 || j >= A) throw ValidationError("sector index out of range");
}

double AngularSector::weight(Vec2 xi) const {
  if (xi.x == 0.0 && xi.y == 0.0) return j_ == 0 ? 1.0 : 0.0;
  return weight_at_angle(std::atan2(xi.y, xi.x));
}

double AngularSector::weight_at_angle(double theta) const {
  const double s = sector_coordinate(A_, theta);
  double d = s - j_;
  if (d >= 0.5 * A_) d -= A_;
  if (d < -0.5 * A_) d += A_;
  if (std::abs(d) >= 2.0) return 0.0;
  const double base = std::floor(s);
  double total = 0.0;
  for (int m = -2; m <= 3; ++m) total += chi(s - (base + m));
  return chi(d) / total;
}

int sector_of(int A, Vec2 xi) {
  if (xi.x == 0.0 && xi.y == 0.0) return 0;
  const int j = static_cast<int>(std::lround(sector_coordinate(A, std::atan2(xi.y, xi.x))));
  return j % A;
}

int circular_distance(int A, int j1, int j2) {
  const int d = std::abs(j1 - j2) % A;
  return std::min(d, A - d);
}

}  // namespace qdnls
