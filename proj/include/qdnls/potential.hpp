#pragma once

#include <optional>
#include <string>

#include "qdnls/spectral_field.hpp"
#include "qdnls/vec2.hpp"

namespace qdnls {

// A vector field admitted by check_irrotational: both the curl condition
// xi1 w2^ - xi2 w1^ = 0 and the radial-direction condition x1 w2 - x2 w1 = 0
// hold within the admission tolerance.
struct IrrotationalField {
  VectorField w;
  double fourier_defect;
  double physical_defect;
  double tolerance;
};

struct IrrotationalCheck {
  std::optional<IrrotationalField> field;  // empty on rejection
  double fourier_defect = 0.0;
  double physical_defect = 0.0;
  std::string failing_condition;  // "fourier" or "physical" on rejection
  double failing_defect = 0.0;

  bool admitted() const { return field.has_value(); }
};

// Defects are normalized: max|xi1 w2^ - xi2 w1^| / max(|xi||w^|) and
// max|x1 w2 - x2 w1| / max(|x||w|).
IrrotationalCheck check_irrotational(const VectorField& w, double tol);
// Same check, throwing ValidationError that names the failing condition.
IrrotationalField admit_irrotational(const VectorField& w, double tol);

// Representative of the class [W] with zero Fourier mean.
struct PotentialRepresentative {
  SpectralField W;
  static constexpr const char* gauge = "zero-mean";
};

// W(x) = int_{a1}^{x1} w1(y1, x2) dy1 + int_{a2}^{x2} w2(a1, y2) dy2, each
// integral taken by exact spectral antiderivative along grid lines. The mean
// of each line integrand is dropped; for admitted fields it vanishes up to
// the admission defect.
PotentialRepresentative reconstruct_line(const IrrotationalField& w, Vec2 anchor);
// W^ = xi . w^ / (i |xi|^2), W^(0) = 0.
PotentialRepresentative reconstruct_spectral(const IrrotationalField& w);

bool check_angular_constancy(const PotentialRepresentative& W, double tol);

// |grad W - w|_{L2} / |w|_{L2} (0 when w = 0).
double gradient_mismatch(const PotentialRepresentative& W, const VectorField& w);

struct MembershipReport {
  bool member;
  double sobolev_norm;  // always finite on a lattice; recorded for the report
  double fourier_defect;
  double physical_defect;
};

MembershipReport membership_As(const VectorField& w, SobolevIndex s, double tol);

}  // namespace qdnls
