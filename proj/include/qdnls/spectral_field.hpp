#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "qdnls/fft.hpp"
#include "qdnls/grid.hpp"

namespace qdnls {

struct SobolevIndex {
  explicit SobolevIndex(double value);
  double s;
};

// A complex scalar on the periodic grid, stored as Fourier-series amplitudes:
//   u(x) = sum_k c_k exp(i xi_k . x),   xi_k = k * pi / L.
// Slots follow FFT order (see Grid2D::wavenumber); the Nyquist row and column
// are kept at zero. The physical view is recomputed on demand.
class SpectralField {
 public:
  explicit SpectralField(const Grid2D& grid);

  static SpectralField from_coefficients(const Grid2D& grid, std::vector<Complex> c);
  // Samples are row-major with x1 as the slow index, x_j = -L + j*h.
  static SpectralField from_physical(const Grid2D& grid, std::vector<Complex> values);
  static SpectralField sample(const Grid2D& grid,
                              const std::function<Complex(double, double)>& f);
  static SpectralField mode(const Grid2D& grid, int k1, int k2, Complex amplitude);

  const Grid2D& grid() const { return grid_; }
  const std::vector<Complex>& coefficients() const { return c_; }
  Complex coefficient(int k1, int k2) const { return c_[grid_.index(k1, k2)]; }
  std::vector<Complex> physical() const;

  // Continuum L^2 norm over the box, from coefficients or from samples.
  double l2_norm() const;
  double physical_l2_norm() const;
  double max_abs_coefficient() const;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(Complex scale);

  // Multiplies every coefficient by m(xi1, xi2).
  template <class M>
  SpectralField multiplied(M&& m) const {
    SpectralField out(*this);
    const int n = grid_.points();
    for (int i1 = 0; i1 < n; ++i1) {
      const double x1 = grid_.xi(i1);
      for (int i2 = 0; i2 < n; ++i2) {
        out.c_[static_cast<std::size_t>(i1) * n + i2] *= m(x1, grid_.xi(i2));
      }
    }
    return out;
  }

 private:
  void clear_nyquist();

  Grid2D grid_;
  std::vector<Complex> c_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(Complex scale, SpectralField a);

struct VectorField {
  VectorField(SpectralField first, SpectralField second);
  explicit VectorField(const Grid2D& grid);

  const Grid2D& grid() const { return components[0].grid(); }
  SpectralField& operator[](int i) { return components[i]; }
  const SpectralField& operator[](int i) const { return components[i]; }
  double l2_norm() const;

  std::array<SpectralField, 2> components;
};

SpectralField dft_roundtrip(const SpectralField& field);

double sobolev_norm(const SpectralField& field, SobolevIndex s);
double sobolev_norm(const VectorField& field, SobolevIndex s);
// Zero mode excluded.
double homogeneous_norm(const SpectralField& field, SobolevIndex s);

// e^{it sigma Delta}: multiplier exp(-i t sigma |xi|^2).
SpectralField free_propagator(const SpectralField& field, double sigma, double t);
VectorField free_propagator(const VectorField& field, double sigma, double t);

SpectralField partial(const SpectralField& field, int axis);
VectorField gradient(const SpectralField& field);
SpectralField divergence(const VectorField& field);
SpectralField laplacian(const SpectralField& field);
// Pointwise complex conjugate, computed on coefficients: c'_k = conj(c_{-k}).
SpectralField conjugate(const SpectralField& field);

// Radiality is measured on exact lattice shells |k|^2 = const. The defect is
// max_k |c_k - shell mean| / max_k |c_k| (0 for the zero field).
double radial_defect(const SpectralField& field);
bool is_radial(const SpectralField& field, double tol);
SpectralField radialize(const SpectralField& field);

// Circular two-thirds mask: keeps |k| <= n/3.
bool in_dealias_band(const Grid2D& grid, int k1, int k2);
SpectralField dealias(const SpectralField& field);

double max_difference(const SpectralField& a, const SpectralField& b);

}  // namespace qdnls
