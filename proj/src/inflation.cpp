#include "qdnls/inflation.hpp"

#include <algorithm>
#include <array>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qdnls/error.hpp"
#include "quadrature.hpp"

namespace qdnls {

namespace {

constexpr double kPi = std::numbers::pi;

double validated_p(const SystemCoefficients& c) {
  if (!c.theta_is_zero()) throw ValidationError("norm inflation needs theta = 0");
  const auto p = c.p();
  if (!p || !(*p > 0.0)) throw ValidationError("norm inflation construction needs p = gamma/(alpha-gamma) > 0");
  return *p;
}

// (e^{-i t Phi} - 1) / (-i Phi) = (sin(t Phi) + i (cos(t Phi) - 1)) / Phi.
Complex kernel(double phi, double t) {
  const double x = t * phi;
  if (std::abs(x) < 1e-6) return {t * (1.0 - x * x / 6.0), -0.5 * t * x};
  const double h = std::sin(0.5 * x);
  return {std::sin(x) / phi, -2.0 * h * h / phi};
}

// Phi(xi, eta) = (alpha - gamma) |eta - p (xi - eta)|^2, valid for theta = 0.
double phi_factored(double alpha_minus_gamma, double p, Vec2 xi, Vec2 eta) {
  const double a = (1.0 + p) * eta.x - p * xi.x, b = (1.0 + p) * eta.y - p * xi.y;
  return alpha_minus_gamma * (a * a + b * b);
}

struct Lens {
  double N, r;
  double d1_lo, d1_hi, d2_lo, d2_hi;

  // eta1-section of {|eta| in D1, |xi - eta| in D2} at height y, xi = (r, 0).
  // Only the branch facing xi matters since r lies beyond D1 and D2.
  bool section(double y, double& lo, double& hi) const {
    if (y > d1_hi || y > d2_hi) return false;
    lo = std::max(std::sqrt(std::max(d1_lo * d1_lo - y * y, 0.0)), r - std::sqrt(d2_hi * d2_hi - y * y));
    hi = std::min(std::sqrt(d1_hi * d1_hi - y * y), r - std::sqrt(std::max(d2_lo * d2_lo - y * y, 0.0)));
    return hi > lo;
  }

  // Largest y with a nonempty section: coarse scan, then bisection.
  double height() const {
    const double top = std::min(d1_hi, d2_hi);
    constexpr int kScan = 4096;
    double lo, hi, last = -1.0;
    for (int i = 0; i <= kScan; ++i) {
      const double y = top * i / kScan;
      if (section(y, lo, hi)) last = y;
    }
    if (last < 0.0) return 0.0;
    double a = last, b = std::min(top, last + top / kScan);
    for (int it = 0; it < 200 && b - a > 1e-15 * top; ++it) {
      const double m = 0.5 * (a + b);
      (section(m, lo, hi) ? a : b) = m;
    }
    return a;
  }

  // Heights where the section limits switch between circles.
  std::vector<double> breakpoints(double y_max) const {
    std::vector<double> out{0.0, y_max};
    auto crossing = [&](double a, double b) {
      const double x = (r * r + a * a - b * b) / (2.0 * r);
      const double y2 = a * a - x * x;
      if (y2 > 0.0) out.push_back(std::sqrt(y2));
    };
    for (double a : {d1_lo, d1_hi}) {
      for (double b : {d2_lo, d2_hi}) crossing(a, b);
    }
    out.push_back(d1_lo);
    out.push_back(d2_lo);
    std::erase_if(out, [&](double y) { return y < 0.0 || y > y_max; });
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(), [](double a, double b) { return b - a < 1e-12; }),
              out.end());
    return out;
  }
};

Lens make_lens(double p, double N, double r) {
  return {N, r, N, N + 1.0, N / p, N / p + 1.0};
}

}  // namespace

double AnnulusDataSpec::amplitude() const { return std::pow(N, -s - 0.5); }

namespace {

double annulus_hs_norm(double amplitude, double s, double lo, double hi) {
  const auto& rule = detail::gauss_rule(16);
  const double I = detail::composite(rule, 4, [s](double r) {
    return 2.0 * kPi * r * std::pow(1.0 + r * r, s);
  }, lo, hi);
  return amplitude * std::sqrt(I);
}

}  // namespace

double AnnulusDataSpec::f_norm() const { return annulus_hs_norm(amplitude(), s, d1_lo, d1_hi); }
double AnnulusDataSpec::g_norm() const { return annulus_hs_norm(amplitude(), s, d2_lo, d2_hi); }

AnnulusDataSpec make_annulus_data(const SystemCoefficients& c, double s, double N) {
  const double p = validated_p(c);
  if (!(N >= 1.0)) throw ValidationError("N must be at least 1");
  AnnulusDataSpec d;
  d.N = N;
  d.s = s;
  d.p = p;
  d.d1_lo = N;
  d.d1_hi = N + 1.0;
  d.d2_lo = N / p;
  d.d2_hi = N / p + 1.0;
  d.d_lo = (1.0 + 1.0 / p) * N + 1.0;
  d.d_hi = d.d_lo + kAnnulusWidth;
  for (double v : {d.f_norm(), d.g_norm()}) {
    if (v < 0.25 || v > 4.0) {
      throw ValidationError("annulus data norm " + std::to_string(v) + " is not within a factor 4 of 1");
    }
  }
  return d;
}

Complex fc_quadrature(const SystemCoefficients& c, double N, double r, double t, const OracleOptions& opt) {
  const double p = validated_p(c);
  if (t == 0.0) return 0.0;
  const double amg = c.alpha() - c.gamma();
  const Lens lens = make_lens(p, N, r);
  const double y_max = lens.height();
  if (y_max == 0.0) return 0.0;
  const auto pieces = lens.breakpoints(y_max);
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;

  // The phase t Phi reaches ~1e3 near the lens tip, so the kernel carries
  // relative noise near 1e-9 there; tighter inner tolerances only recurse.
  const double inner_tol = std::max(opt.tolerance, 1e-7);
  std::ostringstream trace;
  unsigned depth = opt.max_depth;
  for (int attempt = 0; attempt < std::max(1, opt.attempts); ++attempt, depth += 5) {
    bool inner_ok = true;
    auto section_integral = [&](double y, int part) {
      double lo, hi;
      if (!lens.section(y, lo, hi)) return 0.0;
      double err = 0.0, l1 = 0.0;
      const double v = GK::integrate([&](double e1) {
        const Complex k = kernel(phi_factored(amg, p, {r, 0.0}, {e1, y}), t);
        return part == 0 ? k.real() : k.imag();
      }, lo, hi, depth, inner_tol, &err, &l1);
      // |kernel| <= min(t, 2/|Phi|) bounds the noise floor near cancellations.
      const double phi_mid = phi_factored(amg, p, {r, 0.0}, {0.5 * (lo + hi), y});
      const double scale = (hi - lo) * std::min(t, 2.0 / std::max(phi_mid, 1e-300));
      if (err > 100.0 * inner_tol * std::max(l1, scale)) inner_ok = false;
      return v;
    };
    double parts[2] = {0.0, 0.0};
    double worst = 0.0;
    for (int part = 0; part < 2; ++part) {
      double total = 0.0, total_l1 = 0.0, total_err = 0.0;
      for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
        double err = 0.0, l1 = 0.0;
        total += GK::integrate([&](double y) { return section_integral(y, part); }, pieces[i], pieces[i + 1],
                               depth, opt.tolerance, &err, &l1);
        total_l1 += l1;
        total_err += err;
      }
      parts[part] = 2.0 * total;  // eta2 -> -eta2 symmetry
      worst = std::max(worst, total_l1 > 0.0 ? total_err / total_l1 : 0.0);
    }
    trace << "attempt " << attempt + 1 << ": depth " << depth << ", relative error " << worst
          << (inner_ok ? "" : ", inner integral unconverged") << "; ";
    if (inner_ok && worst <= 100.0 * opt.tolerance) return {parts[0], parts[1]};
  }
  throw NumericalError("Fc quadrature did not converge (N=" + std::to_string(N) + ", t=" +
                       std::to_string(t) + "): " + trace.str());
}

double fc_quadrature_oracle(const SystemCoefficients& c, double s, double N, double offset, double t,
                            const OracleOptions& opt) {
  const auto d = make_annulus_data(c, s, N);
  if (!(offset >= 0.0 && offset <= kAnnulusWidth)) throw ValidationError("offset c must lie in [0, 2^-10]");
  return std::abs(fc_quadrature(c, N, d.d_lo + offset, t, opt).real());
}

int required_points(const SystemCoefficients& c, double N, int refinement) {
  const double p = validated_p(c);
  if (refinement < 1) throw ValidationError("refinement must be positive");
  const double band = (1.0 + 1.0 / p) * N + 2.0;
  return 2 * static_cast<int>(std::ceil(band * refinement)) + 2;
}

Complex fc_lattice(const SystemCoefficients& c, double N, Vec2 xi, double t, int refinement, int points) {
  const double p = validated_p(c);
  const int needed = required_points(c, N, refinement);
  if (points < needed) {
    throw ValidationError("grid with frequency step 1/" + std::to_string(refinement) + " needs at least " +
                          std::to_string(needed) + " points per direction to resolve (1 + 1/p) N + 2");
  }
  const double r = norm(xi);
  if (r == 0.0) return 0.0;
  const double m = refinement;
  const Lens lens = make_lens(p, N, r);
  const double y_max = lens.height();
  if (y_max == 0.0) return 0.0;
  // Lens in the frame of xi: u along xi, |v| <= y_max.
  const double u_lo = std::sqrt(std::max(lens.d1_lo * lens.d1_lo - y_max * y_max, 0.0)) - 1.0 / m;
  const double u_hi = lens.d1_hi + 1.0 / m;
  const Vec2 e{xi.x / r, xi.y / r};
  double x_lo = 1e300, x_hi = -1e300, y_lo = 1e300, y_hi = -1e300;
  for (double u : {u_lo, u_hi}) {
    for (double v : {-y_max - 1.0 / m, y_max + 1.0 / m}) {
      const double x = u * e.x - v * e.y, y = u * e.y + v * e.x;
      x_lo = std::min(x_lo, x);
      x_hi = std::max(x_hi, x);
      y_lo = std::min(y_lo, y);
      y_hi = std::max(y_hi, y);
    }
  }
  const double amg = c.alpha() - c.gamma();
  const double a1 = lens.d1_lo * lens.d1_lo, b1 = lens.d1_hi * lens.d1_hi;
  const double a2 = lens.d2_lo * lens.d2_lo, b2 = lens.d2_hi * lens.d2_hi;
  Complex sum = 0.0;
  for (long i = static_cast<long>(std::floor(x_lo * m)); i <= static_cast<long>(std::ceil(x_hi * m)); ++i) {
    const double e1 = i / m;
    for (long j = static_cast<long>(std::floor(y_lo * m)); j <= static_cast<long>(std::ceil(y_hi * m)); ++j) {
      const Vec2 eta{e1, j / m};
      const double n1 = norm2(eta);
      if (n1 < a1 || n1 > b1) continue;
      const double n2 = norm2(Vec2{xi.x - eta.x, xi.y - eta.y});
      if (n2 < a2 || n2 > b2) continue;
      sum += kernel(phi_factored(amg, p, xi, eta), t);
    }
  }
  return sum / (m * m);
}

namespace {

constexpr int kRadialNodes = 4;

// Fc at the Gauss-Legendre nodes across D.
std::array<Complex, kRadialNodes> fc_on_d(const SystemCoefficients& c, const AnnulusDataSpec& d, double t,
                                          const OracleOptions& opt) {
  const auto& rule = detail::gauss_rule(4);
  std::array<Complex, kRadialNodes> out{};
  const double mid = 0.5 * (d.d_lo + d.d_hi), half = 0.5 * (d.d_hi - d.d_lo);
  for (int i = 0; i < kRadialNodes; ++i) out[i] = fc_quadrature(c, d.N, mid + half * rule.x[i], t, opt);
  return out;
}

double norm_from_nodes(const AnnulusDataSpec& d, double s, const std::array<Complex, kRadialNodes>& fc) {
  const auto& rule = detail::gauss_rule(4);
  const double mid = 0.5 * (d.d_lo + d.d_hi), half = 0.5 * (d.d_hi - d.d_lo);
  const double scale = std::pow(d.N, -2.0 * s - 1.0) / (2.0 * kPi);
  double sum = 0.0;
  for (int i = 0; i < kRadialNodes; ++i) {
    const double r = mid + half * rule.x[i];
    const double hat = scale * r * std::abs(fc[i]);
    sum += rule.w[i] * 2.0 * kPi * r * std::pow(1.0 + r * r, s) * hat * hat;
  }
  return std::sqrt(sum * half);
}

}  // namespace

double iterate_norm_on_d(const SystemCoefficients& c, double s, double N, double t, const OracleOptions& opt) {
  const auto d = make_annulus_data(c, s, N);
  return norm_from_nodes(d, s, fc_on_d(c, d, t, opt));
}

double GridCheck::relative_error() const {
  return oracle != 0.0 ? std::abs(lattice - oracle) / std::abs(oracle) : std::abs(lattice);
}

InflationReport norm_inflation_experiment(const InflationConfig& cfg) {
  const auto c = make_coefficients(cfg.alpha, cfg.beta, cfg.gamma);
  const double p = validated_p(c);
  if (cfg.s_values.empty() || cfg.n_values.empty() || cfg.t_values.empty()) {
    throw ValidationError("s_values, n_values and t_values must be nonempty");
  }
  for (double t : cfg.t_values) {
    if (!(t > 0.0)) throw ValidationError("times must be positive");
  }
  if (!(cfg.t_for_n_fit > 0.0)) throw ValidationError("t_for_n_fit must be positive");

  // One quadrature job per (N, t); s only rescales.
  struct Job {
    double N, t;
  };
  std::vector<Job> jobs;
  for (double N : cfg.n_values) jobs.push_back({N, cfg.t_for_n_fit});
  for (double t : cfg.t_values) jobs.push_back({cfg.n_for_t_fit, t});
  struct Values {
    std::array<Complex, kRadialNodes> nodes;
    double oracle;
  };
  const auto values = parallel_map<Values>(jobs.size(), cfg.jobs, [&](std::size_t i) {
    const auto d = make_annulus_data(c, cfg.s_values.front(), jobs[i].N);
    return Values{fc_on_d(c, d, jobs[i].t, cfg.oracle),
                  std::abs(fc_quadrature(c, d.N, d.d_lo, jobs[i].t, cfg.oracle).real())};
  });

  InflationReport out;
  out.p = p;
  auto point = [&](std::size_t i, double s) {
    const auto d = make_annulus_data(c, s, jobs[i].N);
    return InflationPoint{d.N, jobs[i].t, s, norm_from_nodes(d, s, values[i].nodes), values[i].oracle,
                          d.f_norm(), d.g_norm()};
  };
  const std::size_t n_count = cfg.n_values.size();
  for (double s : cfg.s_values) {
    std::vector<double> x, y;
    for (std::size_t i = 0; i < n_count; ++i) {
      out.n_sweep.push_back(point(i, s));
      x.push_back(out.n_sweep.back().N);
      y.push_back(out.n_sweep.back().norm);
    }
    if (x.size() >= 3) out.n_fits.emplace_back(s, fit_loglog(x, y));
  }
  std::vector<double> tx, ty, to;
  for (std::size_t i = n_count; i < jobs.size(); ++i) {
    out.t_sweep.push_back(point(i, cfg.s_values.front()));
    tx.push_back(out.t_sweep.back().t);
    ty.push_back(out.t_sweep.back().norm);
    to.push_back(out.t_sweep.back().oracle);
  }
  if (tx.size() >= 3) {
    out.t_fit = fit_loglog(tx, ty);
    out.oracle_t_fit = fit_loglog(tx, to);
  }

  // Lattice cross-check at xi_c, snapped to the lattice (offset <= 1/m).
  std::vector<Job> grid_jobs;
  for (double N : cfg.n_values) {
    if (N > cfg.grid_max_n) continue;
    grid_jobs.push_back({N, cfg.t_for_n_fit});
    if (cfg.t_values.front() != cfg.t_for_n_fit) grid_jobs.push_back({N, cfg.t_values.front()});
  }
  const int m = cfg.grid_refinement;
  out.grid_checks = parallel_map<GridCheck>(grid_jobs.size(), cfg.jobs, [&](std::size_t i) {
    const auto [N, t] = grid_jobs[i];
    const auto d = make_annulus_data(c, cfg.s_values.front(), N);
    const double r = std::ceil(d.d_lo * m) / m;
    if (r - d.d_lo > kAnnulusWidth) {
      throw ValidationError("frequency step 1/" + std::to_string(m) + " has no lattice point in D");
    }
    const double oracle = fc_quadrature(c, N, r, t, cfg.oracle).real();
    const double lattice = fc_lattice(c, N, {r, 0.0}, t, m, required_points(c, N, m)).real();
    return GridCheck{N, t, oracle, lattice};
  });
  return out;
}

}  // namespace qdnls
