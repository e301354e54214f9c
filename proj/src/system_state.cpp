#include "qdnls/system_state.hpp"

#include <algorithm>

#include "qdnls/error.hpp"

namespace qdnls {

SystemState SystemState::cartesian(VectorField u, VectorField v, VectorField w, double time) {
  if (!(u.grid() == v.grid()) || !(u.grid() == w.grid())) {
    throw ValidationError("state fields must share one grid");
  }
  return SystemState{std::move(u), std::move(v), std::move(w), std::nullopt, time};
}

SystemState SystemState::radial(VectorField u, VectorField v, SpectralField W, double time,
                                double radial_tol) {
  if (!(u.grid() == v.grid()) || !(u.grid() == W.grid())) {
    throw ValidationError("state fields must share one grid");
  }
  SystemState s{std::move(u), std::move(v), std::nullopt, std::move(W), time};
  const double defect = s.radial_defect();
  if (defect > radial_tol) {
    throw ValidationError("radial-form state is not radial (defect " + std::to_string(defect) + ")");
  }
  return s;
}

double SystemState::radial_defect() const {
  double d = std::max({qdnls::radial_defect(u[0]), qdnls::radial_defect(u[1]),
                       qdnls::radial_defect(v[0]), qdnls::radial_defect(v[1])});
  if (W) d = std::max(d, qdnls::radial_defect(*W));
  if (w) d = std::max({d, qdnls::radial_defect(w->components[0]), qdnls::radial_defect(w->components[1])});
  return d;
}

SystemState SystemState::to_cartesian() const {
  if (!W) return *this;
  return cartesian(u, v, gradient(*W), time);
}

namespace {

SpectralField rescale(const SpectralField& f, double factor, const Grid2D& target) {
  const Grid2D& g = f.grid();
  const int n = g.points();
  const int half_target = target.points() / 2;
  std::vector<Complex> out(target.size());
  for (int i1 = 0; i1 < n; ++i1) {
    for (int i2 = 0; i2 < n; ++i2) {
      const Complex c = f.coefficients()[static_cast<std::size_t>(i1) * n + i2];
      if (c == Complex{}) continue;
      const int k1 = g.wavenumber(i1), k2 = g.wavenumber(i2);
      if (std::abs(k1) >= half_target || std::abs(k2) >= half_target) {
        throw ValidationError("rescaled data exceed the target grid bandwidth");
      }
      out[target.index(k1, k2)] = factor * c;
    }
  }
  return SpectralField::from_coefficients(target, std::move(out));
}

VectorField rescale(const VectorField& f, double factor, const Grid2D& target) {
  return {rescale(f[0], factor, target), rescale(f[1], factor, target)};
}

}  // namespace

SystemState scaling_transform(const SystemState& state, double lambda, const Grid2D& target) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ValidationError("lambda must be positive");
  const double want = lambda * state.grid().half_width();
  if (std::abs(target.half_width() - want) > 1e-12 * want) {
    throw ValidationError("target grid half-width must equal lambda * L");
  }
  const double inv = 1.0 / lambda;
  SystemState out{rescale(state.u, inv, target), rescale(state.v, inv, target), std::nullopt,
                  std::nullopt, lambda * lambda * state.time};
  if (state.w) out.w = rescale(*state.w, inv, target);
  if (state.W) out.W = rescale(*state.W, 1.0, target);
  return out;
}

QuadraticInvariants quadratic_invariants(const SystemState& state) {
  if (!state.w) throw ValidationError("quadratic invariants need a Cartesian-form state");
  const double u2 = std::pow(state.u.l2_norm(), 2);
  const double v2 = std::pow(state.v.l2_norm(), 2);
  const double w2 = std::pow(state.w->l2_norm(), 2);
  return {u2 + v2, u2 + w2};
}

}  // namespace qdnls
