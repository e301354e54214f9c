#pragma once

// Brute-force right-hand side of the system on a finite set of Fourier modes:
// every product is an explicit double sum over mode pairs, projected back onto
// the set. Independent of the FFT kernel; used as a test oracle.

#include <array>
#include <complex>
#include <map>
#include <vector>

namespace qdnls::testing {

struct ModeSystem {
  using C = std::complex<double>;
  double alpha, beta, gamma;
  double step;                          // pi / L
  std::vector<std::array<int, 2>> modes;
  std::map<std::array<int, 2>, int> index;

  ModeSystem(double a, double b, double g, double half_width, int band)
      : alpha(a), beta(b), gamma(g), step(3.141592653589793238 / half_width) {
    for (int k1 = -band; k1 <= band; ++k1) {
      for (int k2 = -band; k2 <= band; ++k2) {
        index[{k1, k2}] = static_cast<int>(modes.size());
        modes.push_back({k1, k2});
      }
    }
  }

  std::size_t size() const { return modes.size(); }
  // State layout: [u1, u2, v1, v2, w1, w2] blocks of size() coefficients.
  C& at(std::vector<C>& s, int comp, int m) const { return s[comp * size() + m]; }
  C at(const std::vector<C>& s, int comp, int m) const { return s[comp * size() + m]; }
  int find(int k1, int k2) const {
    const auto it = index.find({k1, k2});
    return it == index.end() ? -1 : it->second;
  }

  void rhs(const std::vector<C>& s, std::vector<C>& out) const {
    const C I(0.0, 1.0);
    const std::size_t n = size();
    out.assign(6 * n, 0.0);
    auto xi = [&](int m, int j) { return step * modes[m][j]; };
    for (std::size_t m = 0; m < n; ++m) {
      const double r2 = xi(m, 0) * xi(m, 0) + xi(m, 1) * xi(m, 1);
      for (int j = 0; j < 2; ++j) {
        at(out, j, m) = -I * alpha * r2 * at(s, j, m);
        at(out, 2 + j, m) = -I * beta * r2 * at(s, 2 + j, m);
        at(out, 4 + j, m) = -I * gamma * r2 * at(s, 4 + j, m);
      }
    }
    for (std::size_t a = 0; a < n; ++a) {
      // (div w)^(a) and (div conj w)^(a), with conj w^(k) = conj(w^(-k)).
      const int neg = find(-modes[a][0], -modes[a][1]);
      const C div_w = I * (xi(a, 0) * at(s, 4, a) + xi(a, 1) * at(s, 5, a));
      const C div_wc = I * (xi(a, 0) * std::conj(at(s, 4, neg)) + xi(a, 1) * std::conj(at(s, 5, neg)));
      for (std::size_t b = 0; b < n; ++b) {
        const int m = find(modes[a][0] + modes[b][0], modes[a][1] + modes[b][1]);
        if (m < 0) continue;
        for (int j = 0; j < 2; ++j) {
          at(out, j, m) += I * div_w * at(s, 2 + j, b);
          at(out, 2 + j, m) += I * div_wc * at(s, j, b);
        }
        // (u . conj v)^(m) += u(a) . conj(v(-b))
        const int nb = find(-modes[b][0], -modes[b][1]);
        const C q = at(s, 0, a) * std::conj(at(s, 2, nb)) + at(s, 1, a) * std::conj(at(s, 3, nb));
        for (int j = 0; j < 2; ++j) at(out, 4 + j, m) += -I * (I * xi(m, j)) * q;
      }
    }
  }

  // |f|^2 over the box of area (2L)^2 is area * sum |c|^2.
  double mass(const std::vector<C>& s, int first_comp, int second_comp, double area) const {
    double sum = 0.0;
    for (int comp : {first_comp, first_comp + 1, second_comp, second_comp + 1}) {
      for (std::size_t m = 0; m < size(); ++m) sum += std::norm(at(s, comp, m));
    }
    return area * sum;
  }
};

}  // namespace qdnls::testing
