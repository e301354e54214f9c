#pragma once

// Brute-force values of block bilinear and trilinear forms: Cartesian Riemann
// sums over xi and tau, with no circle decomposition. The profiles are smooth
// and compactly supported, so the sums converge fast in the step sizes.

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "qdnls/block_engine.hpp"

namespace qdnls::testing {

// Samples of (h1 * h2)(theta) or (h1 * h2 * h3)(theta) on a fine grid, with
// linear interpolation.
struct SampledKernel {
  double lo = 0.0, step = 0.0;
  std::vector<Complex> values;

  Complex operator()(double x) const {
    const double p = (x - lo) / step;
    if (p < 0.0 || p >= static_cast<double>(values.size() - 1)) return 0.0;
    const auto i = static_cast<std::size_t>(p);
    const double f = p - static_cast<double>(i);
    return (1.0 - f) * values[i] + f * values[i + 1];
  }
};

inline SampledKernel sample_h(const BlockProfile& u, double step) {
  SampledKernel k;
  k.lo = -u.theta_hi();
  k.step = step;
  const int n = static_cast<int>(std::ceil(2.0 * u.theta_hi() / step)) + 1;
  for (int i = 0; i < n; ++i) k.values.push_back(u.h(k.lo + i * step));
  return k;
}

inline SampledKernel convolve(const SampledKernel& f, const SampledKernel& g) {
  SampledKernel out;
  out.step = f.step;
  out.lo = f.lo + g.lo;
  out.values.assign(f.values.size() + g.values.size() - 1, 0.0);
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    for (std::size_t j = 0; j < g.values.size(); ++j) out.values[i + j] += f.values[i] * g.values[j] * f.step;
  }
  return out;
}

// Lattice points of step h inside the disc of radius r.
inline std::vector<Vec2> disc_points(double r, double h) {
  std::vector<Vec2> pts;
  const int m = static_cast<int>(std::ceil(r / h));
  for (int i = -m; i <= m; ++i) {
    for (int j = -m; j <= m; ++j) {
      const Vec2 p{i * h, j * h};
      if (norm(p) < r) pts.push_back(p);
    }
  }
  return pts;
}

struct OracleSteps {
  double xi_in = 0.05;   // inner xi1 lattice
  double xi_out = 0.1;   // output xi lattice
  double tau = 0.05;     // output tau grid
  double kernel = 0.002; // fine grid for h convolutions
};

// |P_N3 [Q_L3^{-sigma3}] (u1 u2)|_{L2_{tx}} for the unitary Fourier convention.
inline double brute_bilinear(const BlockProfile& u1, const BlockProfile& u2, double N3,
                             std::optional<OutputModulation> out, const OracleSteps& st = {}) {
  const auto H = convolve(sample_h(u1, st.kernel), sample_h(u2, st.kernel));
  const double h_lo = H.lo, h_hi = H.lo + H.step * static_cast<double>(H.values.size() - 1);
  const auto inner = disc_points(u1.r_hi(), st.xi_in);
  const auto outer = disc_points(std::min(2.0 * N3, u1.r_hi() + u2.r_hi()), st.xi_out);
  const double d2 = st.xi_in * st.xi_in;
  double total = 0.0;
  std::vector<Complex> amp;
  std::vector<double> shift;
  for (const Vec2 xi : outer) {
    const double w3 = psi_dyadic(N3, norm(xi));
    if (w3 == 0.0) continue;
    amp.clear();
    shift.clear();
    for (const Vec2 x1 : inner) {
      const Complex a = u1.a(x1) * u2.a(xi - x1);
      if (a == Complex(0.0)) continue;
      amp.push_back(a * d2);
      shift.push_back(u1.sigma * norm2(x1) + u2.sigma * norm2(xi - x1));
    }
    if (amp.empty()) continue;
    double s_lo = 1e300, s_hi = -1e300;
    for (double s : shift) s_lo = std::min(s_lo, s), s_hi = std::max(s_hi, s);
    // F(tau) is nonzero where tau + s lies in the support of H.
    for (double tau = h_lo - s_hi; tau <= h_hi - s_lo; tau += st.tau) {
      double m = 1.0;
      if (out) m = psi_dyadic(out->L3, tau - out->sigma3 * norm2(xi));
      if (m == 0.0) continue;
      Complex F = 0.0;
      for (std::size_t i = 0; i < amp.size(); ++i) F += amp[i] * H(tau + shift[i]);
      total += std::norm(w3 * m * F) * st.tau;
    }
  }
  total *= st.xi_out * st.xi_out;
  return std::sqrt(total / std::pow(2.0 * std::numbers::pi, 3));
}

// int u1 u2 u3 dx dt = (2 pi)^{-3/2} int a1(x1) a2(x2) a3(-x1-x2) K(s) dx1 dx2
// with K = h1 * h2 * h3 and s = sigma1|x1|^2 + sigma2|x2|^2 + sigma3|x1+x2|^2.
inline Complex brute_trilinear(const BlockProfile& u1, const BlockProfile& u2, const BlockProfile& u3,
                               const OracleSteps& st = {}) {
  const auto K = convolve(convolve(sample_h(u1, st.kernel), sample_h(u2, st.kernel)), sample_h(u3, st.kernel));
  const auto p1 = disc_points(u1.r_hi(), st.xi_in), p2 = disc_points(u2.r_hi(), st.xi_in);
  Complex total = 0.0;
  for (const Vec2 x1 : p1) {
    const Complex a1 = u1.a(x1);
    if (a1 == Complex(0.0)) continue;
    for (const Vec2 x2 : p2) {
      const Vec2 x3 = -(x1 + x2);
      const Complex a = a1 * u2.a(x2) * u3.a(x3);
      if (a == Complex(0.0)) continue;
      total += a * K(u1.sigma * norm2(x1) + u2.sigma * norm2(x2) + u3.sigma * norm2(x3));
    }
  }
  const double d2 = st.xi_in * st.xi_in;
  return total * d2 * d2 / std::pow(2.0 * std::numbers::pi, 1.5);
}

}  // namespace qdnls::testing
