#pragma once

#include <array>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qdnls/cutoffs.hpp"
#include "qdnls/fft.hpp"
#include "qdnls/vec2.hpp"

namespace qdnls {

// Space-time function localized to one dyadic block, given on the Fourier
// side as a separable product along the paraboloid:
//   u~(tau, xi) = a(xi) h(tau + sigma |xi|^2),
//   a(xi) = psi_N(|xi|) (w0 + w1 cos(pi z) + w2 cos(2 pi z)) [omega_j^A(xi)],
//   h(theta) = psi_L(theta) (q0 + q1 theta / L),
// with z the normalized squared radius across the support of psi_N. Such u
// satisfy Q_L^sigma P_N u = u up to the shape of the bumps, and R_j^A u = u
// for sector data.
struct BlockProfile {
  double N = 1.0;
  double L = 1.0;
  double sigma = 1.0;
  std::array<Complex, 3> radial{1.0, 0.0, 0.0};
  std::array<Complex, 2> modulation{1.0, 0.0};
  std::optional<AngularSector> sector;

  double r_lo() const { return N == 1.0 ? 0.0 : 0.5 * N; }
  double r_hi() const { return 2.0 * N; }
  double theta_hi() const { return 2.0 * L; }

  Complex radial_part(double r) const;
  Complex a(Vec2 xi) const;
  Complex h(double theta) const;
  // Whether xi lies in the open support of a.
  bool in_support(Vec2 xi) const;

  double a_norm() const;  // |a|_{L2(R^2)}
  double h_norm() const;  // |h|_{L2(R)}
  double norm() const { return a_norm() * h_norm(); }  // |u|_{L2_{tx}}
};

// Complex Gaussian weights; sector data when `sector` is given.
BlockProfile random_block(double N, double L, double sigma, std::mt19937_64& rng,
                          std::optional<AngularSector> sector = std::nullopt);

struct EngineOptions {
  int phi_nodes = 24;        // Gauss-Legendre nodes per arc between breakpoints
  int radial_nodes = 48;     // output |xi| nodes
  int angular_nodes = 24;    // output direction nodes per angular window
  int resolution = 8;        // modulation grid spacing = min L / resolution
  double delta_ratio = 256;  // plain bilinear: s-range / (L1 + L2) above this uses the narrow-kernel limit
};

// Output modulation cutoff Q_{L3}^{-sigma3}: weight psi_{L3}(tau - sigma3 |xi|^2).
struct OutputModulation {
  double sigma3;
  double L3;
};

struct BilinearValue {
  double lhs = 0.0;    // |P_N3 [Q_L3^{-sigma3}] (u1 u2)|_{L2_{tx}}
  double norms = 0.0;  // |u1| |u2|
  std::string mode;    // "local", "resolved" or "narrow-kernel"
};

BilinearValue bilinear_lhs(const BlockProfile& u1, const BlockProfile& u2, double N3,
                           std::optional<OutputModulation> output, const EngineOptions& options = {});

// int u1 u2 u3 dx dt, with sigma3 taken from u3.
Complex trilinear_integral(const BlockProfile& u1, const BlockProfile& u2, const BlockProfile& u3,
                           const EngineOptions& options = {});

namespace detail {

// I(xi, rho) = int_0^{2 pi} a1(c + rho e^{i phi}) a2(xi - c - rho e^{i phi}) dphi,
// c = sigma2 xi / (sigma1 + sigma2). Exposed for tests.
Complex circle_integral(const BlockProfile& u1, const BlockProfile& u2, Vec2 xi, double rho,
                        int nodes);

// Samples of a kernel on the lattice x_k = k dx, k in [first, first + size).
struct Lattice {
  double dx = 0.0;
  long first = 0;
  std::vector<Complex> values;

  Complex at_index(long k) const {
    const long i = k - first;
    return (i < 0 || i >= static_cast<long>(values.size())) ? Complex(0.0) : values[i];
  }
  // Four-point Lagrange interpolation.
  Complex at(double x) const;
  long last() const { return first + static_cast<long>(values.size()) - 1; }
};

Lattice sample_modulation(const BlockProfile& u, double dx);
Lattice convolve(const Lattice& f, const Lattice& g);

}  // namespace detail

}  // namespace qdnls
