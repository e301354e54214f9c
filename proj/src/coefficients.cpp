#include "qdnls/coefficients.hpp"

#include <cmath>
#include <stdexcept>

#include "qdnls/error.hpp"

namespace qdnls {

std::string to_string(Regime r) {
  switch (r) {
    case Regime::theta_positive: return "theta>0";
    case Regime::theta_zero: return "theta=0";
    case Regime::theta_negative: return "theta<0,kappa!=0";
    case Regime::kappa_zero: return "kappa=0";
  }
  return "unknown";
}

std::optional<double> SystemCoefficients::p() const {
  if (alpha_ == gamma_) return std::nullopt;
  return gamma_ / (alpha_ - gamma_);
}

SystemCoefficients make_coefficients(double alpha, double beta, double gamma) {
  for (double c : {alpha, beta, gamma}) {
    if (!std::isfinite(c)) throw ValidationError("coefficients must be finite");
  }
  if (alpha == 0.0) throw ValidationError("alpha must be nonzero");
  if (beta == 0.0) throw ValidationError("beta must be nonzero");
  if (gamma == 0.0) throw ValidationError("gamma must be nonzero");

  SystemCoefficients c;
  c.alpha_ = alpha;
  c.beta_ = beta;
  c.gamma_ = gamma;
  c.theta_ = beta * gamma - alpha * gamma - alpha * beta;
  c.kappa_ = (alpha - beta) * (alpha - gamma) * (beta + gamma);

  // Exact zeros are what the regimes are about; allow rounding in theta only.
  const double scale = std::abs(beta * gamma) + std::abs(alpha * gamma) + std::abs(alpha * beta);
  const bool theta_zero = std::abs(c.theta_) <= 1e-14 * scale;
  if (theta_zero) c.theta_ = 0.0;
  if (c.kappa_ == 0.0) {
    c.regime_ = Regime::kappa_zero;
  } else if (theta_zero) {
    c.regime_ = Regime::theta_zero;
  } else {
    c.regime_ = c.theta_ > 0.0 ? Regime::theta_positive : Regime::theta_negative;
  }
  if (c.theta_ >= 0.0 && c.kappa_ == 0.0) {
    throw std::logic_error("kappa = 0 with theta >= 0 contradicts the coefficient algebra");
  }
  return c;
}

std::array<SigmaTriple, 3> interaction_triples(const SystemCoefficients& c) {
  const double a = c.alpha(), b = c.beta(), g = c.gamma();
  return {SigmaTriple{b, g, -a}, SigmaTriple{-g, a, -b}, SigmaTriple{a, -b, -g}};
}

double resonance_phi(const SystemCoefficients& c, Vec2 xi, Vec2 eta) {
  return c.alpha() * norm2(eta) - c.beta() * norm2(xi - eta) - c.gamma() * norm2(xi);
}

double resonance_phi_factored(const SystemCoefficients& c, Vec2 xi, Vec2 eta) {
  const auto p = c.p();
  if (!p) throw ValidationError("factored resonance needs alpha != gamma");
  return (c.alpha() - c.gamma()) * norm2(eta - *p * (xi - eta));
}

ResonanceValue resonance(const SystemCoefficients& c, Vec2 xi, Vec2 eta) {
  ResonanceValue r{resonance_phi(c, xi, eta), std::nullopt, std::nullopt};
  if (!c.theta_is_zero()) return r;
  r.p = c.p();
  r.factored = resonance_phi_factored(c, xi, eta);
  const double scale = std::abs(c.alpha()) * norm2(eta) + std::abs(c.beta()) * norm2(xi - eta) +
                       std::abs(c.gamma()) * norm2(xi);
  if (std::abs(*r.factored - r.phi) > 1e-10 * std::abs(r.phi) + 1e-14 * scale + 1e-300) {
    throw std::logic_error("factored resonance disagrees with Phi at theta = 0");
  }
  return r;
}

}  // namespace qdnls
