#include "qdnls/block_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qdnls/error.hpp"
#include "quadrature.hpp"

namespace qdnls {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

using detail::gauss_rule;
using detail::Lattice;

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  return a < 0.0 ? a + kTwoPi : a;
}

Vec2 unit(double a) { return {std::cos(a), std::sin(a)}; }

double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

// Boundary lines of the sector support |s - j| < 2 (one per edge; each line
// carries both antipodal arcs).
std::vector<double> sector_edges(const AngularSector& s) {
  return {(s.j() - 2.0) * kPi / s.A(), (s.j() + 2.0) * kPi / s.A()};
}

// Angles phi where the circle p0 + orient * rho e^{i phi} crosses the support
// boundary of u.
void add_breakpoints(const BlockProfile& u, Vec2 p0, double orient, double rho,
                     std::vector<double>& out) {
  const double r0 = norm(p0);
  if (r0 > 0.0) {
    const double base = std::atan2(p0.y, p0.x);
    for (double b : {u.r_lo(), u.r_hi()}) {
      if (b <= 0.0) continue;
      // |p0|^2 + rho^2 + 2 orient rho |p0| cos(phi - base) = b^2
      const double v = orient * (b * b - r0 * r0 - rho * rho) / (2.0 * rho * r0);
      if (std::abs(v) <= 1.0) {
        const double a = std::acos(v);
        out.push_back(base + a);
        out.push_back(base - a);
      }
    }
  }
  if (u.sector) {
    for (double edge : sector_edges(*u.sector)) {
      // cross(e, p0) + orient rho sin(phi - edge) = 0
      const double v = -orient * cross(unit(edge), p0) / rho;
      if (std::abs(v) <= 1.0) {
        const double a = std::asin(v);
        out.push_back(edge + a);
        out.push_back(edge + kPi - a);
      }
    }
  }
}

struct PairGeometry {
  double S;
  Vec2 c;  // centre of the level circles of sigma1|xi1|^2 + sigma2|xi - xi1|^2
  Vec2 d;  // xi - c
  double s0;
  double rho_lo;
  double rho_hi;
  bool empty() const { return !(rho_hi > rho_lo); }
};

PairGeometry geometry(const BlockProfile& u1, const BlockProfile& u2, Vec2 xi) {
  PairGeometry g{};
  g.S = u1.sigma + u2.sigma;
  g.c = (u2.sigma / g.S) * xi;
  g.d = xi - g.c;
  g.s0 = u1.sigma * u2.sigma * norm2(xi) / g.S;
  const double c = norm(g.c), d = norm(g.d);
  g.rho_lo = std::max({0.0, u1.r_lo() - c, c - u1.r_hi(), u2.r_lo() - d, d - u2.r_hi()});
  g.rho_hi = std::min(c + u1.r_hi(), d + u2.r_hi());
  return g;
}

// Output frequencies: either the radial line (all profiles radial) or a set
// of polar windows covering the sum of the two supports.
struct OutputGrid {
  bool radial = true;
  std::vector<std::pair<double, double>> arcs;  // direction windows
  double R_lo = 0.0;
  double R_hi = 0.0;
};

std::vector<Vec2> support_samples(const BlockProfile& u) {
  std::vector<Vec2> pts;
  const int nr = 12;
  std::vector<double> angles;
  if (u.sector) {
    const auto e = sector_edges(*u.sector);
    for (int k = 0; k < 12; ++k) {
      const double a = e[0] + (e[1] - e[0]) * (k + 0.5) / 12.0;
      angles.push_back(a);
      angles.push_back(a + kPi);
    }
  } else {
    for (int k = 0; k < 48; ++k) angles.push_back(kTwoPi * k / 48.0);
  }
  for (int i = 0; i < nr; ++i) {
    const double r = u.r_lo() + (u.r_hi() - u.r_lo()) * (i + 0.5) / nr;
    for (double a : angles) pts.push_back(r * unit(a));
  }
  return pts;
}

double angular_step(const BlockProfile& u) {
  return u.sector ? 4.0 * kPi / u.sector->A() / 12.0 : kTwoPi / 48.0;
}

OutputGrid output_grid(const BlockProfile& u1, const BlockProfile& u2, double N3) {
  OutputGrid g;
  const double lo3 = N3 == 1.0 ? 0.0 : 0.5 * N3, hi3 = 2.0 * N3;
  g.R_lo = std::max({lo3, u1.r_lo() - u2.r_hi(), u2.r_lo() - u1.r_hi()});
  g.R_hi = std::min(hi3, u1.r_hi() + u2.r_hi());
  g.radial = !u1.sector && !u2.sector;
  if (g.radial || g.R_hi <= g.R_lo) return g;

  const auto p1 = support_samples(u1), p2 = support_samples(u2);
  const double margin = std::max(u1.r_hi() - u1.r_lo(), u2.r_hi() - u2.r_lo()) / 12.0;
  std::vector<double> angles;
  for (const auto& a : p1) {
    for (const auto& b : p2) {
      const Vec2 s = a + b;
      const double r = norm(s);
      if (r > g.R_lo - margin && r < g.R_hi + margin && r > 0.0) {
        angles.push_back(wrap_angle(std::atan2(s.y, s.x)));
      }
    }
  }
  if (angles.empty()) {
    g.R_hi = g.R_lo;
    return g;
  }
  std::sort(angles.begin(), angles.end());
  const double step = std::min(angular_step(u1), angular_step(u2));
  // Sampled sums of two wedges are spaced by at most a few steps (more at
  // small radii), so larger gaps separate genuinely disjoint windows.
  const double gap = std::max(16.0 * step, 0.02);
  const double pad = 4.0 * step;
  std::vector<std::pair<double, double>> clusters;
  double start = angles.front(), prev = angles.front();
  for (std::size_t i = 1; i < angles.size(); ++i) {
    if (angles[i] - prev > gap) {
      clusters.push_back({start, prev});
      start = angles[i];
    }
    prev = angles[i];
  }
  clusters.push_back({start, prev});
  // Join across the 0 / 2 pi seam.
  if (clusters.size() > 1 && clusters.front().first + kTwoPi - clusters.back().second <= gap) {
    clusters.front().first = clusters.back().first - kTwoPi;
    clusters.pop_back();
  }
  double covered = 0.0;
  for (auto& [a, b] : clusters) {
    a -= pad;
    b += pad;
    covered += b - a;
  }
  if (covered > 0.6 * kTwoPi) {
    g.arcs = {{0.0, kTwoPi}};
  } else {
    g.arcs = clusters;
  }
  return g;
}

// Integrates f(xi) dxi over the output grid; radial mode evaluates on the
// positive x1 axis and multiplies by 2 pi.
template <class F>
auto integrate_output(const OutputGrid& g, const EngineOptions& opt, F&& f) {
  decltype(f(Vec2{})) total{};
  if (g.R_hi <= g.R_lo) return total;
  const auto& rule = gauss_rule(16);
  const int panels = std::max(1, opt.radial_nodes / 16);
  if (g.radial) {
    total = detail::composite(rule, panels, [&](double R) { return R * f(Vec2{R, 0.0}); }, g.R_lo,
                              g.R_hi);
    return total * kTwoPi;
  }
  const auto& arule = gauss_rule(opt.angular_nodes);
  for (const auto& [a, b] : g.arcs) {
    const int apanels = b - a > kPi ? 4 : 1;
    total += detail::composite(rule, panels, [&](double R) {
      return R * detail::composite(arule, apanels, [&](double t) { return f(R * unit(t)); }, a, b);
    }, g.R_lo, g.R_hi);
  }
  return total;
}

double grid_spacing(std::initializer_list<double> Ls, const EngineOptions& opt) {
  return std::min(Ls) / opt.resolution;
}

// A(s') = I(xi, rho) / (2|S|) on s' = sign(S) k dx, rho = sqrt(k dx / |S|).
struct ModulationSamples {
  long k_first = 0;
  std::vector<Complex> A;  // trapezoid weight folded in at k = 0
};

ModulationSamples modulation_samples(const BlockProfile& u1, const BlockProfile& u2, Vec2 xi,
                                     const PairGeometry& g, double dx, double s_lo, double s_hi,
                                     int phi_nodes) {
  // s_lo, s_hi bound |s'| = k dx.
  ModulationSamples out;
  const double aS = std::abs(g.S);
  const double lo = std::max(aS * g.rho_lo * g.rho_lo, s_lo);
  const double hi = std::min(aS * g.rho_hi * g.rho_hi, s_hi);
  if (!(hi >= lo)) return out;
  out.k_first = static_cast<long>(std::ceil(lo / dx));
  const long k_last = static_cast<long>(std::floor(hi / dx));
  for (long k = out.k_first; k <= k_last; ++k) {
    const double rho = std::sqrt(k * dx / aS);
    Complex A = detail::circle_integral(u1, u2, xi, rho, phi_nodes) / (2.0 * aS);
    if (k == 0) A *= 0.5;
    out.A.push_back(A);
  }
  return out;
}

}  // namespace

Complex BlockProfile::radial_part(double r) const {
  const double w = psi_dyadic(N, r);
  if (w == 0.0) return 0.0;
  const double lo = r_lo(), hi = r_hi();
  const double z = (r * r - lo * lo) / (hi * hi - lo * lo);
  return w * (radial[0] + radial[1] * std::cos(kPi * z) + radial[2] * std::cos(kTwoPi * z));
}

Complex BlockProfile::a(Vec2 xi) const {
  const Complex r = radial_part(qdnls::norm(xi));
  if (r == 0.0 || !sector) return r;
  return r * sector->weight(xi);
}

Complex BlockProfile::h(double theta) const {
  const double w = psi_dyadic(L, theta);
  return w == 0.0 ? Complex(0.0) : w * (modulation[0] + modulation[1] * (theta / L));
}

bool BlockProfile::in_support(Vec2 xi) const {
  const double r = qdnls::norm(xi);
  if (!(r < r_hi()) || (r_lo() > 0.0 && !(r > r_lo()))) return false;
  return !sector || sector->weight(xi) > 0.0;
}

double BlockProfile::a_norm() const {
  const auto& rule = gauss_rule(20);
  const double radial_sq = detail::composite(
      rule, 16, [&](double r) { return r * std::norm(radial_part(r)); }, r_lo(), r_hi());
  double angular_sq = kTwoPi;
  if (sector) {
    const auto e = sector_edges(*sector);
    angular_sq = 2.0 * detail::composite(
                           rule, 8, [&](double t) { return std::pow(sector->weight_at_angle(t), 2); },
                           e[0], e[1]);
  }
  return std::sqrt(radial_sq * angular_sq);
}

double BlockProfile::h_norm() const {
  const auto& rule = gauss_rule(20);
  return std::sqrt(detail::composite(
      rule, 32, [&](double t) { return std::norm(h(t)); }, -theta_hi(), theta_hi()));
}

BlockProfile random_block(double N, double L, double sigma, std::mt19937_64& rng,
                          std::optional<AngularSector> sector) {
  if (!is_dyadic(N) || !is_dyadic(L)) throw ValidationError("block scales must be dyadic");
  if (sigma == 0.0 || !std::isfinite(sigma)) throw ValidationError("block sigma must be nonzero");
  std::normal_distribution<double> g(0.0, 1.0);
  BlockProfile b;
  b.N = N;
  b.L = L;
  b.sigma = sigma;
  for (auto& w : b.radial) w = Complex(g(rng), g(rng));
  for (auto& w : b.modulation) w = Complex(g(rng), g(rng));
  b.sector = sector;
  return b;
}

namespace detail {

Complex circle_integral(const BlockProfile& u1, const BlockProfile& u2, Vec2 xi, double rho,
                        int nodes) {
  const double S = u1.sigma + u2.sigma;
  const Vec2 c = (u2.sigma / S) * xi;
  const Vec2 d = xi - c;
  if (rho == 0.0) return kTwoPi * u1.a(c) * u2.a(d);
  std::vector<double> cuts{0.0, kTwoPi};
  std::vector<double> raw;
  add_breakpoints(u1, c, 1.0, rho, raw);
  add_breakpoints(u2, d, -1.0, rho, raw);
  for (double a : raw) cuts.push_back(wrap_angle(a));
  std::sort(cuts.begin(), cuts.end());
  const auto& rule = gauss_rule(nodes);
  auto f = [&](double phi) {
    const Vec2 e = rho * unit(phi);
    return u1.a(c + e) * u2.a(d - e);
  };
  Complex sum = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    if (!(b - a > 1e-14)) continue;
    const Vec2 e = rho * unit(0.5 * (a + b));
    if (!u1.in_support(c + e) || !u2.in_support(d - e)) continue;
    const int panels = static_cast<int>(std::ceil((b - a) / (kPi / 8.0)));
    sum += composite(rule, panels, f, a, b);
  }
  return sum;
}

Complex Lattice::at(double x) const {
  const double u = x / dx;
  const long k = static_cast<long>(std::floor(u));
  const double t = u - k;
  // Nodes k-1, k, k+1, k+2.
  const double w0 = -t * (t - 1.0) * (t - 2.0) / 6.0;
  const double w1 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
  const double w2 = -(t + 1.0) * t * (t - 2.0) / 2.0;
  const double w3 = (t + 1.0) * t * (t - 1.0) / 6.0;
  return w0 * at_index(k - 1) + w1 * at_index(k) + w2 * at_index(k + 1) + w3 * at_index(k + 2);
}

Lattice sample_modulation(const BlockProfile& u, double dx) {
  Lattice l;
  l.dx = dx;
  const long m = static_cast<long>(std::ceil(u.theta_hi() / dx));
  l.first = -m;
  for (long k = -m; k <= m; ++k) l.values.push_back(u.h(k * dx));
  return l;
}

Lattice convolve(const Lattice& f, const Lattice& g) {
  Lattice out;
  out.dx = f.dx;
  out.first = f.first + g.first;
  out.values.assign(f.values.size() + g.values.size() - 1, 0.0);
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    for (std::size_t j = 0; j < g.values.size(); ++j) out.values[i + j] += f.values[i] * g.values[j];
  }
  for (auto& v : out.values) v *= f.dx;
  return out;
}

}  // namespace detail

BilinearValue bilinear_lhs(const BlockProfile& u1, const BlockProfile& u2, double N3,
                           std::optional<OutputModulation> output, const EngineOptions& opt) {
  if (!is_dyadic(N3)) throw ValidationError("N3 must be dyadic");
  const double S = u1.sigma + u2.sigma;
  if (S == 0.0) throw ValidationError("bilinear estimate needs sigma1 + sigma2 != 0");
  if (output && (!is_dyadic(output->L3) || output->sigma3 == 0.0)) {
    throw ValidationError("output modulation needs dyadic L3 and nonzero sigma3");
  }
  BilinearValue out;
  out.norms = u1.norm() * u2.norm();
  const double dx = output ? grid_spacing({u1.L, u2.L, output->L3}, opt) : grid_spacing({u1.L, u2.L}, opt);
  const Lattice H = detail::convolve(detail::sample_modulation(u1, dx), detail::sample_modulation(u2, dx));
  Complex H_mass = 0.0;
  for (const auto& v : H.values) H_mass += v * dx;
  const double hspan = u1.theta_hi() + u2.theta_hi();
  const long sgn = S > 0.0 ? 1 : -1;
  const double aS = std::abs(S);
  const OutputGrid grid = output_grid(u1, u2, N3);

  if (output) {
    out.mode = "local";
    const double L3 = output->L3;
    auto density = [&](Vec2 xi) -> double {
      const double w3 = psi_dyadic(N3, norm(xi));
      if (w3 == 0.0) return 0.0;
      const auto g = geometry(u1, u2, xi);
      if (g.empty()) return 0.0;
      // theta = tau - sigma3|xi|^2; H is evaluated at theta + kappa + s'.
      const double kappa = output->sigma3 * norm2(xi) + g.s0;
      // Need |theta + kappa + s'| < hspan with |theta| < 2 L3, s' = sgn |s'|.
      const double reach = hspan + 2.0 * L3;
      const double c0 = -kappa * sgn;  // |s'| near c0
      const auto A = modulation_samples(u1, u2, xi, g, dx, std::max(0.0, c0 - reach), c0 + reach,
                                        opt.phi_nodes);
      if (A.A.empty()) return 0.0;
      // theta_m = -kappa + m dx so that theta_m + kappa + s'_k = (m + sgn k) dx.
      const long m_lo = static_cast<long>(std::ceil((kappa - 2.0 * L3) / dx));
      const long m_hi = static_cast<long>(std::floor((kappa + 2.0 * L3) / dx));
      double sum = 0.0;
      for (long m = m_lo; m <= m_hi; ++m) {
        const double theta = -kappa + m * dx;
        const double w = psi_dyadic(L3, theta);
        if (w == 0.0) continue;
        Complex G = 0.0;
        for (std::size_t i = 0; i < A.A.size(); ++i) {
          G += A.A[i] * H.at_index(m + sgn * (A.k_first + static_cast<long>(i)));
        }
        sum += w * w * std::norm(G * dx);
      }
      return w3 * w3 * sum * dx;
    };
    out.lhs = std::sqrt(std::max(0.0, integrate_output(grid, opt, density)) / std::pow(kTwoPi, 3));
    return out;
  }

  // Without output modulation: all s' in the geometric range contribute.
  double max_range = 0.0;
  {
    const Vec2 probe{0.5 * (grid.R_lo + grid.R_hi), 0.0};
    const auto g = geometry(u1, u2, probe);
    if (!g.empty()) max_range = aS * (g.rho_hi * g.rho_hi - g.rho_lo * g.rho_lo);
  }
  const bool narrow = max_range > opt.delta_ratio * (u1.L + u2.L);
  out.mode = narrow ? "narrow-kernel" : "resolved";
  const auto& rule = gauss_rule(16);
  auto density = [&](Vec2 xi) -> double {
    const double w3 = psi_dyadic(N3, norm(xi));
    if (w3 == 0.0) return 0.0;
    const auto g = geometry(u1, u2, xi);
    if (g.empty()) return 0.0;
    if (narrow) {
      // int |G|^2 dtau -> |int H|^2 int |A|^2 ds', ds' = 2|S| rho drho.
      const double I2 = detail::composite(rule, 16, [&](double rho) {
        return rho * std::norm(detail::circle_integral(u1, u2, xi, rho, opt.phi_nodes));
      }, g.rho_lo, g.rho_hi);
      return w3 * w3 * std::norm(H_mass) * I2 / (2.0 * aS);
    }
    const auto A = modulation_samples(u1, u2, xi, g, dx, 0.0, 1e300, opt.phi_nodes);
    if (A.A.empty()) return 0.0;
    // tau_m = -s0 + m dx; G_m = dx sum_k A_k H[m + sgn k].
    const long k0 = A.k_first, k1 = A.k_first + static_cast<long>(A.A.size()) - 1;
    const long m_lo = sgn > 0 ? H.first - k1 : H.first + k0;
    const long m_hi = sgn > 0 ? H.last() - k0 : H.last() + k1;
    double sum = 0.0;
    for (long m = m_lo; m <= m_hi; ++m) {
      Complex G = 0.0;
      for (std::size_t i = 0; i < A.A.size(); ++i) {
        G += A.A[i] * H.at_index(m + sgn * (k0 + static_cast<long>(i)));
      }
      sum += std::norm(G * dx);
    }
    return w3 * w3 * sum * dx;
  };
  out.lhs = std::sqrt(std::max(0.0, integrate_output(grid, opt, density)) / std::pow(kTwoPi, 3));
  return out;
}

Complex trilinear_integral(const BlockProfile& u1, const BlockProfile& u2, const BlockProfile& u3,
                           const EngineOptions& opt) {
  const double S = u1.sigma + u2.sigma;
  if (S == 0.0) throw ValidationError("trilinear evaluation pairs u1, u2 with sigma1 + sigma2 != 0");
  const double dx = grid_spacing({u1.L, u2.L, u3.L}, opt);
  const Lattice J = detail::convolve(
      detail::convolve(detail::sample_modulation(u1, dx), detail::sample_modulation(u2, dx)),
      detail::sample_modulation(u3, dx));
  const double jspan = u1.theta_hi() + u2.theta_hi() + u3.theta_hi();
  const long sgn = S > 0.0 ? 1 : -1;
  // u3 sits at xi3 = -xi; its radial band bounds the output grid.
  OutputGrid grid = output_grid(u1, u2, u3.N);
  if (u3.sector && grid.radial) {
    grid.radial = false;
    grid.arcs = {{0.0, kTwoPi}};
  }
  auto density = [&](Vec2 xi) -> Complex {
    const Complex a3 = u3.a(-xi);
    if (a3 == 0.0) return 0.0;
    const auto g = geometry(u1, u2, xi);
    if (g.empty()) return 0.0;
    // J is evaluated at sigma1|xi1|^2 + sigma2|xi2|^2 + sigma3|xi|^2 = kappa + s'.
    const double kappa = g.s0 + u3.sigma * norm2(xi);
    const double c0 = -kappa * sgn;
    const auto A = modulation_samples(u1, u2, xi, g, dx, std::max(0.0, c0 - jspan), c0 + jspan,
                                      opt.phi_nodes);
    Complex T = 0.0;
    for (std::size_t i = 0; i < A.A.size(); ++i) {
      const double sp = static_cast<double>(sgn * (A.k_first + static_cast<long>(i))) * dx;
      T += A.A[i] * J.at(kappa + sp);
    }
    return a3 * T * dx;
  };
  return integrate_output(grid, opt, density) / std::pow(kTwoPi, 1.5);
}

}  // namespace qdnls
