#pragma once

#include <optional>

#include "qdnls/spectral_field.hpp"

namespace qdnls {

enum class Form { cartesian, radial };

// (u, v, w) in Cartesian form, or (u, v, W) with w = grad W in radial form.
struct SystemState {
  static SystemState cartesian(VectorField u, VectorField v, VectorField w, double time = 0.0);
  // Rejects components whose radial defect exceeds radial_tol.
  static SystemState radial(VectorField u, VectorField v, SpectralField W, double time = 0.0,
                            double radial_tol = 1e-8);

  Form form() const { return W ? Form::radial : Form::cartesian; }
  const Grid2D& grid() const { return u.grid(); }
  double radial_defect() const;
  // w = grad W for radial states; identity for Cartesian ones.
  SystemState to_cartesian() const;

  VectorField u;
  VectorField v;
  std::optional<VectorField> w;
  std::optional<SpectralField> W;
  double time = 0.0;
};

// A_lambda(t, x) = lambda^-1 A(lambda^-2 t, lambda^-1 x). The rescaled data
// live on the box of half-width lambda*L, where they have the same integer
// wavenumbers. The target grid must have that half-width; a coarser target
// that cannot hold the occupied band is rejected. W scales as lambda^0.
SystemState scaling_transform(const SystemState& state, double lambda, const Grid2D& target);

struct QuadraticInvariants {
  double m1;  // |u|^2 + |v|^2
  double m2;  // |u|^2 + |w|^2
};

QuadraticInvariants quadratic_invariants(const SystemState& state);

}  // namespace qdnls
