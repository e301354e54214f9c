#pragma once

// Shared spectral kernel of the time integrators and the Duhamel iterator.

#include <vector>

#include "qdnls/coefficients.hpp"
#include "qdnls/fft.hpp"
#include "qdnls/system_state.hpp"

namespace qdnls::detail {

// Coefficient arrays of u1, u2, v1, v2 and then w1, w2 (Cartesian) or W (radial).
using Packed = std::vector<std::vector<Complex>>;

class Kernel {
 public:
  Kernel(const Grid2D& grid, const SystemCoefficients& c, Form form, bool dealias);

  const Grid2D& grid() const { return grid_; }
  Form form() const { return form_; }
  int components() const { return form_ == Form::cartesian ? 6 : 5; }
  double sigma(int component) const;
  // |xi|^2 per slot, and the integer |k|^2 per slot.
  const std::vector<double>& xi2() const { return xi2_; }
  const std::vector<int>& k2() const { return k2_; }
  double max_xi2() const;

  Packed pack(const SystemState& s) const;
  SystemState unpack(const Packed& p, double time) const;
  Packed zeros() const;

  // Quadratic part of the time derivative (linear terms excluded).
  void nonlinear(const Packed& in, Packed& out) const;
  // Coefficients of u . conj v, masked like the nonlinearity.
  std::vector<Complex> product_uv(const Packed& in) const;
  // Exact linear flow over time t.
  void propagate(Packed& p, double t) const;
  // Zeroes everything outside the admissible band.
  void project(Packed& p) const;
  bool in_band(std::size_t slot) const { return band_[slot]; }

 private:
  void to_physical(const std::vector<Complex>& c, std::vector<Complex>& out) const;
  void to_coefficients(std::vector<Complex>& values) const;

  Grid2D grid_;
  Fft fft_;
  SystemCoefficients coeffs_;
  Form form_;
  std::vector<double> xi2_;
  std::vector<int> k2_;
  std::vector<double> xi1_, xi2dir_;
  std::vector<char> band_;
  mutable std::vector<std::vector<Complex>> scratch_;
};

}  // namespace qdnls::detail
