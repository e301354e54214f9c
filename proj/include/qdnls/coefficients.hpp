#pragma once

#include <array>
#include <optional>
#include <string>

#include "qdnls/vec2.hpp"

namespace qdnls {

enum class Regime { theta_positive, theta_zero, theta_negative, kappa_zero };

std::string to_string(Regime r);

// Dispersion coefficients of the system
//   (i d_t + alpha Delta) u = -(div w) v,
//   (i d_t + beta  Delta) v = -(div conj w) u,
//   (i d_t + gamma Delta) w =  grad(u . conj v).
class SystemCoefficients {
 public:
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double gamma() const { return gamma_; }
  // theta = beta*gamma - alpha*gamma - alpha*beta, kappa = (a-b)(a-g)(b+g).
  double theta() const { return theta_; }
  double kappa() const { return kappa_; }
  Regime regime() const { return regime_; }
  bool theta_is_zero() const { return regime_ == Regime::theta_zero; }
  // p = gamma / (alpha - gamma); empty when alpha == gamma.
  std::optional<double> p() const;

 private:
  friend SystemCoefficients make_coefficients(double, double, double);
  double alpha_ = 1.0, beta_ = 1.0, gamma_ = 1.0;
  double theta_ = 0.0, kappa_ = 0.0;
  Regime regime_ = Regime::kappa_zero;
};

SystemCoefficients make_coefficients(double alpha, double beta, double gamma);

// Dispersion triple (sigma1, sigma2, sigma3) of one trilinear interaction.
struct SigmaTriple {
  double s1, s2, s3;
  double theta_tilde() const { return s1 * s2 + s2 * s3 + s3 * s1; }
  double kappa_tilde() const { return (s1 + s2) * (s2 + s3) * (s3 + s1); }
};

// The three interactions (beta, gamma, -alpha), (-gamma, alpha, -beta),
// (alpha, -beta, -gamma); each has theta~ = theta and |kappa~| = |kappa|.
std::array<SigmaTriple, 3> interaction_triples(const SystemCoefficients& c);

// Phi(xi, eta) = alpha|eta|^2 - beta|xi-eta|^2 - gamma|xi|^2.
double resonance_phi(const SystemCoefficients& c, Vec2 xi, Vec2 eta);
// (alpha - gamma)|eta - p(xi - eta)|^2; equals Phi only when theta = 0.
double resonance_phi_factored(const SystemCoefficients& c, Vec2 xi, Vec2 eta);

struct ResonanceValue {
  double phi;
  std::optional<double> p;         // set when theta = 0
  std::optional<double> factored;  // set when theta = 0
};

// Phi with the factored form cross-checked (relative 1e-10) when theta = 0.
ResonanceValue resonance(const SystemCoefficients& c, Vec2 xi, Vec2 eta);

}  // namespace qdnls
