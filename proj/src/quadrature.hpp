#pragma once

#include <boost/math/quadrature/gauss.hpp>
#include <vector>

#include "qdnls/error.hpp"

namespace qdnls::detail {

// Full Gauss-Legendre rule on [-1, 1], from Boost's tabulated half rules.
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;

  template <class F>
  auto integrate(F&& f, double a, double b) const {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    decltype(f(mid)) sum{};
    for (std::size_t i = 0; i < x.size(); ++i) sum += w[i] * f(mid + half * x[i]);
    return sum * half;
  }
};

template <unsigned N>
GaussRule make_gauss_rule() {
  using G = boost::math::quadrature::gauss<double, N>;
  GaussRule r;
  const auto& a = G::abscissa();
  const auto& w = G::weights();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) {
      r.x.push_back(0.0);
      r.w.push_back(w[i]);
    } else {
      r.x.push_back(-a[i]);
      r.w.push_back(w[i]);
      r.x.push_back(a[i]);
      r.w.push_back(w[i]);
    }
  }
  return r;
}

inline const GaussRule& gauss_rule(int n) {
  switch (n) {
    case 4: { static const GaussRule r = make_gauss_rule<4>(); return r; }
    case 8: { static const GaussRule r = make_gauss_rule<8>(); return r; }
    case 12: { static const GaussRule r = make_gauss_rule<12>(); return r; }
    case 16: { static const GaussRule r = make_gauss_rule<16>(); return r; }
    case 20: { static const GaussRule r = make_gauss_rule<20>(); return r; }
    case 24: { static const GaussRule r = make_gauss_rule<24>(); return r; }
    case 32: { static const GaussRule r = make_gauss_rule<32>(); return r; }
    case 48: { static const GaussRule r = make_gauss_rule<48>(); return r; }
    case 64: { static const GaussRule r = make_gauss_rule<64>(); return r; }
    default: throw ValidationError("Gauss-Legendre rules exist for 4, 8, 12, 16, 20, 24, 32, 48, 64 nodes");
  }
}

// Composite rule: `panels` equal panels of the n-point rule.
template <class F>
auto composite(const GaussRule& rule, int panels, F&& f, double a, double b) {
  const double h = (b - a) / panels;
  decltype(f(a)) sum{};
  for (int p = 0; p < panels; ++p) sum += rule.integrate(f, a + p * h, a + (p + 1) * h);
  return sum;
}

}  // namespace qdnls::detail
