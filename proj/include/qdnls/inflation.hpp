#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qdnls/coefficients.hpp"
#include "qdnls/fft.hpp"
#include "qdnls/report.hpp"
#include "qdnls/vec2.hpp"

namespace qdnls {

// Radial annulus data of the norm-inflation construction, with
// p = gamma / (alpha - gamma):
//   f^ = N^{-s-1/2} 1_{D1},  g^ = N^{-s-1/2} 1_{D2},
//   D1 = {N <= |xi| <= N+1},  D2 = {N/p <= |xi| <= N/p + 1},
//   D  = {r0 <= |xi| <= r0 + 2^-10},  r0 = (1 + 1/p) N + 1.
struct AnnulusDataSpec {
  double N = 0.0;
  double s = 0.0;
  double p = 0.0;
  double d1_lo = 0.0, d1_hi = 0.0;
  double d2_lo = 0.0, d2_hi = 0.0;
  double d_lo = 0.0, d_hi = 0.0;

  double amplitude() const;  // N^{-s-1/2}
  double f_norm() const;     // |f|_{H^s}, exact radial integral
  double g_norm() const;
};

constexpr double kAnnulusWidth = 1.0 / 1024;  // width of D

// Requires theta = 0 and p > 0; checks that both H^s norms lie within a
// factor 4 of 1.
AnnulusDataSpec make_annulus_data(const SystemCoefficients& c, double s, double N);

struct OracleOptions {
  double tolerance = 1e-9;  // relative, for both nested integrals
  unsigned max_depth = 15;  // first attempt; each retry adds 5 levels
  int attempts = 3;
};

// Fc(xi) = int (e^{-it Phi} - 1)/(-i Phi) 1_{D1}(eta) 1_{D2}(xi - eta) d eta at
// xi = (r, 0), by nested adaptive Gauss-Kronrod over the lens-shaped support
// (eta1 inside, with the exact section limits; eta2 outside). The real part is
// int sin(t Phi)/Phi; for |t Phi| < 1e-6 the kernel uses its Taylor series.
// Throws NumericalError with the refinement trace if no attempt converges.
Complex fc_quadrature(const SystemCoefficients& c, double N, double r, double t,
                      const OracleOptions& options = {});

// |F(xi_c)| with xi_c = ((1 + 1/p) N + 1 + c, 0), c in [0, 2^-10], where F is
// the real part of Fc. s does not enter F; it is validated for the data.
double fc_quadrature_oracle(const SystemCoefficients& c, double s, double N, double offset, double t,
                            const OracleOptions& options = {});

// The same integral as a Riemann sum over the frequency lattice (Z / m)^2 of
// a periodic grid with frequency step 1/m, evaluated at one lattice point xi.
// This is the value an FFT product on that grid would produce without
// aliasing; only the lens is visited. `points` is the grid size per
// direction, and the grid must resolve |xi| + 1 (throws ValidationError with
// the required size otherwise).
Complex fc_lattice(const SystemCoefficients& c, double N, Vec2 xi, double t, int refinement,
                   int points);

// Smallest grid size (even) whose band reaches (1 + 1/p) N + 2 at frequency step 1/m.
int required_points(const SystemCoefficients& c, double N, int refinement);

// H^s norm, restricted to D, of the second Picard iterate
//   int_0^t e^{i(t-t') gamma Lap} grad((e^{it' alpha Lap} f) conj(e^{it' beta Lap} g)) dt'.
// Its Fourier transform has modulus (2 pi)^{-1} |xi| N^{-2s-1} |Fc(xi)|; the
// radial integral over D uses Gauss-Legendre in |xi|.
double iterate_norm_on_d(const SystemCoefficients& c, double s, double N, double t,
                         const OracleOptions& options = {});

struct InflationConfig {
  double alpha = 1.0, beta = -1.0, gamma = 0.5;
  std::vector<double> s_values{0.0, 0.25, 0.75};
  std::vector<double> n_values{16, 32, 64, 128};
  double t_for_n_fit = 0.1;
  std::vector<double> t_values{1e-3, 3e-3, 1e-2, 3e-2, 1e-1};
  double n_for_t_fit = 8192;
  OracleOptions oracle;
  // Grid cross-check at xi_c (offset 0) for every N <= grid_max_n.
  double grid_max_n = 64;
  int grid_refinement = 128;
  int jobs = 1;
};

struct InflationPoint {
  double N = 0.0, t = 0.0, s = 0.0;
  double norm = 0.0;     // iterate_norm_on_d
  double oracle = 0.0;   // |F(xi_c)|
  double f_norm = 0.0, g_norm = 0.0;
};

struct GridCheck {
  double N = 0.0, t = 0.0;
  double oracle = 0.0;   // F(xi_c)
  double lattice = 0.0;  // Re of the lattice sum at xi_c
  double relative_error() const;
};

struct InflationReport {
  double p = 0.0;
  std::vector<InflationPoint> n_sweep;  // every s, N at t_for_n_fit
  std::vector<InflationPoint> t_sweep;  // s = s_values.front(), t at n_for_t_fit
  std::vector<std::pair<double, LogLogFit>> n_fits;  // (s, fit of norm against N)
  LogLogFit t_fit;                                    // norm against t
  LogLogFit oracle_t_fit;                             // |F(xi_c)| against t
  std::vector<GridCheck> grid_checks;
};

// Requires theta = 0 and p > 0.
InflationReport norm_inflation_experiment(const InflationConfig& config);

}  // namespace qdnls
