#pragma once

#include <functional>
#include <vector>

#include "qdnls/fft.hpp"
#include "qdnls/grid.hpp"

namespace qdnls {

// Smooth window on [0, T]: flat on the middle 80%, C-infinity ramps of width
// T/10 at both ends.
double time_window(double t, double T);

// A function on [0, T) x box, sampled at t_m = m T / n_t, stored as its
// space-time Fourier series
//   u(t, x) = sum c(m, k) exp(i tau_m t + i xi_k . x),  tau_m = 2 pi m / T.
// Storage is row-major [time slot][x1 slot][x2 slot]; Nyquist slots in every
// direction hold zero. With this sign convention the free wave
// exp(-i t sigma |xi|^2) sits on tau = -sigma |xi|^2.
class TimeSpaceField {
 public:
  TimeSpaceField(double T, int nt, const Grid2D& grid);

  static TimeSpaceField from_samples(double T, int nt, const Grid2D& grid,
                                     std::vector<Complex> values);
  static TimeSpaceField from_coefficients(double T, int nt, const Grid2D& grid,
                                          std::vector<Complex> c);
  // Samples f, optionally multiplied by time_window, before transforming.
  static TimeSpaceField sample(double T, int nt, const Grid2D& grid,
                               const std::function<Complex(double, double, double)>& f,
                               bool windowed);

  double period() const { return T_; }
  int time_points() const { return nt_; }
  const Grid2D& grid() const { return grid_; }
  double time(int m) const { return T_ * m / nt_; }
  double tau(int slot) const;
  const std::vector<Complex>& coefficients() const { return c_; }
  std::vector<Complex> values() const;

  // Continuum L^2 norm over [0, T) x box, from coefficients or samples.
  double l2_norm() const;
  double sample_l2_norm() const;

  // Multiplies every coefficient by m(tau, xi1, xi2).
  template <class M>
  TimeSpaceField multiplied(M&& m) const {
    TimeSpaceField out(*this);
    const int n = grid_.points();
    std::size_t at = 0;
    for (int it = 0; it < nt_; ++it) {
      const double t = tau(it);
      for (int i1 = 0; i1 < n; ++i1) {
        const double x1 = grid_.xi(i1);
        for (int i2 = 0; i2 < n; ++i2, ++at) out.c_[at] *= m(t, x1, grid_.xi(i2));
      }
    }
    return out;
  }

  TimeSpaceField& operator+=(const TimeSpaceField& other);
  TimeSpaceField& operator-=(const TimeSpaceField& other);

 private:
  void clear_nyquist();

  double T_;
  int nt_;
  Grid2D grid_;
  std::vector<Complex> c_;
};

// Lattice pairing int f g dt dx (bilinear, no conjugation).
Complex pairing(const TimeSpaceField& f, const TimeSpaceField& g);
// Lattice inner product int f conj(g) dt dx.
Complex inner(const TimeSpaceField& f, const TimeSpaceField& g);
TimeSpaceField conjugate(const TimeSpaceField& f);

}  // namespace qdnls
