#pragma once

#include <cstddef>

namespace qdnls {

// Periodic box [-L, L)^2 sampled with n points per direction. The dual lattice
// has spacing pi/L; integer frequencies k run over the symmetric range
// -n/2 < k < n/2, with the Nyquist index n/2 always carrying zero.
class Grid2D {
 public:
  Grid2D(double half_width, int points);

  double half_width() const { return half_width_; }
  int points() const { return points_; }
  double spacing() const { return 2.0 * half_width_ / points_; }
  double frequency_step() const;
  std::size_t size() const { return static_cast<std::size_t>(points_) * points_; }
  // (2L)^2: the box area, which converts coefficient sums into L^2 integrals.
  double area() const { return 4.0 * half_width_ * half_width_; }

  double x(int j) const { return -half_width_ + j * spacing(); }
  // Storage slot i in [0, n) -> signed wavenumber; the Nyquist slot maps to -n/2.
  int wavenumber(int i) const { return i < points_ / 2 ? i : i - points_; }
  int slot(int k) const { return k >= 0 ? k : k + points_; }
  bool is_nyquist(int i) const { return i == points_ / 2; }
  std::size_t index(int k1, int k2) const {
    return static_cast<std::size_t>(slot(k1)) * points_ + slot(k2);
  }
  double xi(int i) const { return wavenumber(i) * frequency_step(); }

  bool operator==(const Grid2D& other) const {
    return half_width_ == other.half_width_ && points_ == other.points_;
  }

 private:
  double half_width_;
  int points_;
};

}  // namespace qdnls
