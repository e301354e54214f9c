#include "qdnls/potential.hpp"

#include <algorithm>

#include "qdnls/error.hpp"

namespace qdnls {
namespace {

double fourier_defect(const VectorField& w) {
  const Grid2D& g = w.grid();
  const int n = g.points();
  double worst = 0.0, scale = 0.0;
  for (int i1 = 0; i1 < n; ++i1) {
    for (int i2 = 0; i2 < n; ++i2) {
      const std::size_t at = static_cast<std::size_t>(i1) * n + i2;
      const Complex a = w[0].coefficients()[at], b = w[1].coefficients()[at];
      const double x1 = g.xi(i1), x2 = g.xi(i2);
      worst = std::max(worst, std::abs(x1 * b - x2 * a));
      scale = std::max(scale, std::hypot(x1, x2) * std::hypot(std::abs(a), std::abs(b)));
    }
  }
  return scale > 0.0 ? worst / scale : 0.0;
}

double physical_defect(const VectorField& w) {
  const Grid2D& g = w.grid();
  const int n = g.points();
  const auto a = w[0].physical();
  const auto b = w[1].physical();
  double worst = 0.0, scale = 0.0;
  for (int j1 = 0; j1 < n; ++j1) {
    for (int j2 = 0; j2 < n; ++j2) {
      const std::size_t at = static_cast<std::size_t>(j1) * n + j2;
      const double x1 = g.x(j1), x2 = g.x(j2);
      worst = std::max(worst, std::abs(x1 * b[at] - x2 * a[at]));
      scale = std::max(scale, std::hypot(x1, x2) * std::hypot(std::abs(a[at]), std::abs(b[at])));
    }
  }
  return scale > 0.0 ? worst / scale : 0.0;
}

// Samples on the grid of int_{anchor}^{x} g(y) dy for the periodic line
// function g(y) = sum_k a_k exp(i xi_k y), mean term dropped.
std::vector<Complex> line_antiderivative(const std::vector<Complex>& a, const Grid2D& g,
                                         double anchor) {
  const int n = g.points();
  std::vector<Complex> b(n);
  Complex at_anchor = 0.0;
  for (int i = 1; i < n; ++i) {
    if (g.is_nyquist(i)) continue;
    const double xi = g.xi(i);
    b[i] = a[i] / Complex(0.0, xi);
    at_anchor += b[i] * std::polar(1.0, xi * anchor);
    if (i & 1) b[i] = -b[i];  // grid starts at -L
  }
  Fft({n}).backward(b.data());
  for (auto& v : b) v -= at_anchor;
  return b;
}

// Line coefficients (FFT order) of samples taken on the grid.
std::vector<Complex> line_coefficients(std::vector<Complex> samples) {
  const int n = static_cast<int>(samples.size());
  Fft({n}).forward(samples.data());
  for (int i = 0; i < n; ++i) samples[i] *= ((i & 1) ? -1.0 : 1.0) / n;
  return samples;
}

}  // namespace

IrrotationalCheck check_irrotational(const VectorField& w, double tol) {
  IrrotationalCheck check;
  check.fourier_defect = fourier_defect(w);
  check.physical_defect = physical_defect(w);
  if (check.fourier_defect > tol) {
    check.failing_condition = "fourier";
    check.failing_defect = check.fourier_defect;
  } else if (check.physical_defect > tol) {
    check.failing_condition = "physical";
    check.failing_defect = check.physical_defect;
  } else {
    check.field = IrrotationalField{w, check.fourier_defect, check.physical_defect, tol};
  }
  return check;
}

IrrotationalField admit_irrotational(const VectorField& w, double tol) {
  auto check = check_irrotational(w, tol);
  if (!check.admitted()) {
    throw ValidationError("field rejected: " + check.failing_condition + " defect " +
                          std::to_string(check.failing_defect) + " exceeds " +
                          std::to_string(tol));
  }
  return std::move(*check.field);
}

PotentialRepresentative reconstruct_line(const IrrotationalField& field, Vec2 anchor) {
  const VectorField& w = field.w;
  const Grid2D& g = w.grid();
  const int n = g.points();

  // First leg: along x1 at every fixed x2.
  const auto w1 = w[0].physical();
  std::vector<Complex> W(g.size());
  std::vector<Complex> line(n);
  for (int j2 = 0; j2 < n; ++j2) {
    for (int j1 = 0; j1 < n; ++j1) line[j1] = w1[static_cast<std::size_t>(j1) * n + j2];
    const auto leg = line_antiderivative(line_coefficients(line), g, anchor.x);
    for (int j1 = 0; j1 < n; ++j1) W[static_cast<std::size_t>(j1) * n + j2] = leg[j1];
  }

  // Second leg: w2 on the anchor line x1 = a1, evaluated from the series.
  std::vector<Complex> h(n);
  for (int i1 = 0; i1 < n; ++i1) {
    const Complex phase = std::polar(1.0, g.xi(i1) * anchor.x);
    for (int i2 = 0; i2 < n; ++i2) {
      h[i2] += phase * w[1].coefficients()[static_cast<std::size_t>(i1) * n + i2];
    }
  }
  const auto leg = line_antiderivative(h, g, anchor.y);
  for (int j1 = 0; j1 < n; ++j1) {
    for (int j2 = 0; j2 < n; ++j2) W[static_cast<std::size_t>(j1) * n + j2] += leg[j2];
  }

  auto out = SpectralField::from_physical(g, std::move(W));
  auto c = out.coefficients();
  c[0] = 0.0;
  return {SpectralField::from_coefficients(g, std::move(c))};
}

PotentialRepresentative reconstruct_spectral(const IrrotationalField& field) {
  const VectorField& w = field.w;
  const Grid2D& g = w.grid();
  const int n = g.points();
  std::vector<Complex> c(g.size());
  for (int i1 = 0; i1 < n; ++i1) {
    for (int i2 = 0; i2 < n; ++i2) {
      const double x1 = g.xi(i1), x2 = g.xi(i2);
      const double r2 = x1 * x1 + x2 * x2;
      if (r2 == 0.0) continue;
      const std::size_t at = static_cast<std::size_t>(i1) * n + i2;
      c[at] = (x1 * w[0].coefficients()[at] + x2 * w[1].coefficients()[at]) / Complex(0.0, r2);
    }
  }
  return {SpectralField::from_coefficients(g, std::move(c))};
}

bool check_angular_constancy(const PotentialRepresentative& W, double tol) {
  return is_radial(W.W, tol);
}

double gradient_mismatch(const PotentialRepresentative& W, const VectorField& w) {
  const double ref = w.l2_norm();
  const auto grad = gradient(W.W);
  const double diff = std::hypot((grad[0] - w[0]).l2_norm(), (grad[1] - w[1]).l2_norm());
  return ref > 0.0 ? diff / ref : diff;
}

MembershipReport membership_As(const VectorField& w, SobolevIndex s, double tol) {
  const auto check = check_irrotational(w, tol);
  const double norm = sobolev_norm(w, s);
  return {check.admitted() && std::isfinite(norm), norm, check.fourier_defect,
          check.physical_defect};
}

}  // namespace qdnls
