#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "block_oracle.hpp"
#include "generators.hpp"
#include "qdnls/bilinear.hpp"
#include "qdnls/error.hpp"
#include "qdnls/geometry.hpp"
#include "qdnls/inflation.hpp"
#include "qdnls/report.hpp"
#include "qdnls/strichartz.hpp"

using namespace qdnls;
using namespace qdnls::testing;
using boost::math::quadrature::gauss_kronrod;

TEST_CASE("log-log fit of exact and noisy power laws") {
  std::vector<double> x{1, 2, 4, 8, 16}, y;
  for (double v : x) y.push_back(3.0 * std::pow(v, 1.7));
  const auto fit = fit_loglog(x, y);
  CHECK(fit.exponent == doctest::Approx(1.7).epsilon(1e-12));
  CHECK(std::exp(fit.intercept) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(fit.stderr_exponent < 1e-12);
  CHECK(fit.points == 5);
  CHECK(fit.within(1.6, 0.11));
  y[2] *= 1.3;
  CHECK(fit_loglog(x, y).stderr_exponent > 0.01);
}

TEST_CASE("parallel map keeps order and forwards failures") {
  const auto sq = parallel_map<int>(50, 3, [](std::size_t i) { return static_cast<int>(i * i); });
  for (std::size_t i = 0; i < sq.size(); ++i) CHECK(sq[i] == static_cast<int>(i * i));
  CHECK_THROWS_AS(parallel_map<int>(10, 2,
                                    [](std::size_t i) -> int {
                                      if (i == 7) throw std::runtime_error("boom");
                                      return 0;
                                    }),
                  std::runtime_error);
  CHECK(default_jobs() >= 1);
  CHECK(mix_seed(1, 2, 3) == mix_seed(1, 2, 3));
  CHECK(mix_seed(1, 2, 3) != mix_seed(1, 3, 2));
  CHECK(mix_seed(1, 2, 3) != mix_seed(2, 2, 3));
}

TEST_CASE("Strichartz admissibility") {
  CHECK_NOTHROW(check_admissible(4, 4));
  CHECK_NOTHROW(check_admissible(6, 3));
  CHECK_THROWS_AS(check_admissible(2, INFINITY), ValidationError);
  CHECK_THROWS_AS(check_admissible(3, 3), ValidationError);
}

TEST_CASE("inverse transform of psi against adaptive quadrature") {
  for (double s : {0.0, 0.4, 1.3, 5.0}) {
    const double want = gauss_kronrod<double, 31>::integrate(
                            [&](double t) { return psi(t) * std::cos(s * t); }, -2.0, 2.0, 15, 1e-13) /
                        (2.0 * std::numbers::pi);
    CHECK(psi_inverse_transform(s) == doctest::Approx(want).epsilon(1e-9).scale(1e-12));
  }
}

TEST_CASE("free Strichartz norm of a plane wave") {
  // |e^{it sigma Lap} e^{ikx}| = 1, so the norm is T^{1/p} area^{1/q}.
  const Grid2D g(2.0, 32);
  const auto m = SpectralField::mode(g, 3, 1, 1.0);
  const double T = 0.5;
  for (auto [p, q] : {std::pair{4.0, 4.0}, std::pair{6.0, 3.0}}) {
    const double want = std::pow(T, 1 / p) * std::pow(g.area(), 1 / q);
    CHECK(free_strichartz_norm(m, 1.0, p, q, T, 32) == doctest::Approx(want).epsilon(1e-10));
  }
}

TEST_CASE("Strichartz sweep on a small configuration") {
  StrichartzConfig cfg;
  cfg.frequencies = {1, 2, 4};
  cfg.modulations = {16, 32};
  cfg.points = 64;
  cfg.trials = 1;
  const auto r = strichartz_ratio(cfg);
  CHECK(r.free_wave.points.size() == 3);
  for (const auto& pt : r.free_wave.points) CHECK(std::isfinite(pt.best_ratio));
  CHECK(r.rescaling_mismatch < 1e-6);
  cfg.q = 3.0;
  CHECK_THROWS_AS(strichartz_ratio(cfg), ValidationError);
}

TEST_CASE("block engine against brute-force Riemann sums") {
  std::mt19937_64 rng(5);
  const auto u1 = random_block(1, 1, 1.0, rng), u2 = random_block(1, 1, -0.5, rng), u3 = random_block(1, 1, 0.7, rng);
  OracleSteps coarse;
  coarse.xi_in = 0.1;
  coarse.xi_out = 0.2;
  coarse.tau = 0.1;
  EngineOptions fine;
  fine.phi_nodes = 64;
  fine.radial_nodes = 64;
  fine.angular_nodes = 64;
  fine.resolution = 32;
  for (double N3 : {1.0, 2.0}) {
    for (const auto& out : {std::optional<OutputModulation>{}, std::optional<OutputModulation>{{0.8, 2.0}}}) {
      const double want = brute_bilinear(u1, u2, N3, out, coarse);
      CHECK(bilinear_lhs(u1, u2, N3, out).lhs == doctest::Approx(want).epsilon(2e-3));
      CHECK(bilinear_lhs(u1, u2, N3, out, fine).lhs == doctest::Approx(want).epsilon(2e-4));
    }
  }
  const Complex want = brute_trilinear(u1, u2, u3, coarse);
  CHECK(std::abs(trilinear_integral(u1, u2, u3) - want) <= 2e-3 * std::abs(want));
  CHECK(std::abs(trilinear_integral(u1, u2, u3, fine) - want) <= 2e-4 * std::abs(want));

  auto zero = u2;
  zero.radial = {0.0, 0.0, 0.0};
  CHECK(bilinear_lhs(u1, zero, 2.0, std::nullopt).lhs == 0.0);
  CHECK(trilinear_integral(u1, zero, u3) == Complex(0.0));
}

TEST_CASE("circle integral against adaptive quadrature") {
  std::mt19937_64 rng(9);
  const auto u1 = random_block(2, 1, 1.0, rng), u2 = random_block(2, 1, 2.0, rng);
  const Vec2 xi{2.5, 1.0};
  const Vec2 c = (u2.sigma / (u1.sigma + u2.sigma)) * xi;
  for (double rho : {0.3, 1.1, 2.0}) {
    auto part = [&](bool imag) {
      return gauss_kronrod<double, 61>::integrate(
          [&](double phi) {
            const Vec2 e{rho * std::cos(phi), rho * std::sin(phi)};
            const Complex v = u1.a(c + e) * u2.a(xi - c - e);
            return imag ? v.imag() : v.real();
          },
          0.0, 2.0 * std::numbers::pi, 20, 1e-12);
    };
    const Complex want(part(false), part(true));
    CHECK(std::abs(detail::circle_integral(u1, u2, xi, rho, 24) - want) <= 1e-8 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("bilinear sweep rejects sigma1 + sigma2 = 0 and records a baseline") {
  BilinearSweepConfig cfg;
  cfg.sigma2 = -1.0;
  CHECK_THROWS_AS(bilinear_strichartz_sweep(cfg), ValidationError);
  cfg.sigma2 = 1.0;
  cfg.n_max = {2};
  cfg.modulations = {1};
  cfg.trials = 1;
  const auto r = bilinear_strichartz_sweep(cfg);
  CHECK(r.baseline_ratio > 0.0);
  CHECK(std::isfinite(r.baseline_ratio));
  // Four frequency configurations per N_max.
  CHECK(r.sharp.points.size() == 4);
}

TEST_CASE("resonance geometry") {
  const auto c = make_coefficients(2, 1, 1);
  for (const auto& t : interaction_triples(c)) {
    for (double R : {4.0, 64.0}) {
      // xi3 = 0, so the resonance is (s1 + s2) R^2 and a third of it is the minimum.
      CHECK(min_modulation(t, {R, 0}, {-R, 0}) == doctest::Approx(std::abs(t.s1 + t.s2) * R * R / 3).epsilon(1e-14));
    }
  }
  ResonanceScanConfig cfg;
  cfg.radius = 12;
  cfg.coefficients = {{1.0, -1.0, 0.5}};
  auto r = resonance_geometry_scan(cfg);
  CHECK(r.passed());
  CHECK(r.entries.front().low_modulation > 0);
  cfg.epsilon = 0.0;
  CHECK(resonance_geometry_scan(cfg).passed());
  cfg.coefficients = {{1.0, 1.0, 1.0}};
  CHECK_THROWS_AS(resonance_geometry_scan(cfg), ValidationError);
}

TEST_CASE("angular separation scan and circular distance") {
  const auto c = make_coefficients(1, -1, 0.5);
  const auto perm = interaction_triples(c)[0];
  CHECK(perm.s1 == -1.0);
  CHECK(perm.s2 == 0.5);
  CHECK(perm.s3 == -1.0);
  CHECK(perm.theta_tilde() == 0.0);
  AngularScanConfig cfg;
  cfg.sectors = {64};
  cfg.samples = 4000;
  const auto r = angular_separation_scan(cfg);
  REQUIRE(r.entries.size() == 1);
  CHECK(r.entries.front().accepted > 0);
  CHECK(r.passed());
  cfg.sigma2 = 1.0;
  CHECK_THROWS_AS(angular_separation_scan(cfg), ValidationError);
  CHECK(circular_distance(64, 0, 63) == 1);
  CHECK(circular_distance(64, 1, 62) == 3);
  CHECK(circular_distance(64, 10, 12) == 2);
}

TEST_CASE("radial sector gain and the single-sector control") {
  SectorGainConfig cfg;
  cfg.sectors = {64, 256};
  cfg.fields = 4;
  const auto r = radial_sector_gain(cfg);
  CHECK(r.passed());
  for (int A : {64, 256, 1024}) {
    CHECK(std::sqrt(A) * sector_mass_fraction(A, std::nullopt) <= 2.0);
    // Single-sector data keep a fixed fraction, so the scaled mass grows like A^{1/2}.
    CHECK(sector_mass_fraction(A, 3) > 0.25);
    CHECK(std::sqrt(A) * sector_mass_fraction(A, 3) > 2.0);
  }
}

TEST_CASE("trilinear check gates its parameters") {
  TrilinearConfig cfg;
  cfg.alpha = 2.0;
  cfg.beta = 1.0;
  cfg.gamma = 1.0;
  CHECK_THROWS_AS(trilinear_target_check(cfg), ValidationError);
  cfg = TrilinearConfig{};
  cfg.c = 0.46;
  CHECK_THROWS_AS(trilinear_target_check(cfg), ValidationError);
}

namespace {

// |D1 cap (xi - D2)| for xi = (r, 0): for each radius rho in D1 the circle
// meets the second annulus along an arc whose half-angle follows from the law
// of cosines.
double lens_area(double N, double p, double r) {
  const double a = N / p, b = N / p + 1.0;
  auto arc = [&](double rho) {
    auto half = [&](double d) {  // angles with |xi - eta| <= d
      const double c = (r * r + rho * rho - d * d) / (2 * r * rho);
      return c >= 1.0 ? 0.0 : c <= -1.0 ? std::numbers::pi : std::acos(c);
    };
    return 2.0 * rho * (half(b) - half(a));
  };
  return gauss_kronrod<double, 61>::integrate(arc, N, N + 1.0, 20, 1e-13);
}

}  // namespace

TEST_CASE("annulus data norms") {
  const auto c = make_coefficients(1, -1, 0.5);
  for (double s : {0.0, 0.25, 0.75}) {
    for (double N : {16.0, 64.0, 8192.0}) {
      const auto d = make_annulus_data(c, s, N);
      CHECK(d.p == 1.0);
      // |f|^2 = N^{-2s-1} 2 pi int_N^{N+1} (1 + r^2)^s r dr.
      const double f2 = std::pow(N, -2 * s - 1) * std::numbers::pi *
                        (std::pow(1 + (N + 1) * (N + 1), s + 1) - std::pow(1 + N * N, s + 1)) / (s + 1);
      CHECK(d.f_norm() == doctest::Approx(std::sqrt(f2)).epsilon(1e-10));
      CHECK(d.f_norm() > 0.25);
      CHECK(d.f_norm() < 4.0);
      CHECK(d.g_norm() > 0.25);
      CHECK(d.g_norm() < 4.0);
      CHECK(d.d_lo == 2 * N + 1);
      CHECK(d.d_hi - d.d_lo == kAnnulusWidth);
    }
  }
  // theta = 0 but p = gamma / (alpha - gamma) = -2.
  CHECK_THROWS_AS(make_annulus_data(make_coefficients(1, 2, 2), 0.0, 16), ValidationError);
  CHECK_THROWS_AS(make_annulus_data(make_coefficients(2, 1, 1), 0.0, 16), ValidationError);
}

TEST_CASE("Fc quadrature against frozen polar-quadrature values") {
  const auto c = make_coefficients(1, -1, 0.5);
  struct Case {
    double N, r, t;
    Complex want;
  };
  const Case cases[] = {
      {16, 33, 0.1, {0.4737425807068289, -0.15184754781861787}},
      {16, 33, 0.01, {0.05464271872846199, -0.0018669817755066255}},
      {64, 129, 0.1, {0.5366910823989278, -0.3376319371880419}},
      {32, 65.0005, 0.03, {0.2171985101035545, -0.04218688510982693}},
  };
  for (const auto& k : cases) {
    const Complex got = fc_quadrature(c, k.N, k.r, k.t);
    CHECK(std::abs(got - k.want) <= 1e-7 * std::abs(k.want));
  }
  CHECK(fc_quadrature_oracle(c, 0.0, 16, 0.0, 0.1) == doctest::Approx(0.4737425807068289).epsilon(1e-7));
}

TEST_CASE("Fc small-time limit is t times the lens area") {
  const auto c = make_coefficients(1, -1, 0.5);
  for (auto [N, r] : {std::pair{16.0, 33.0}, std::pair{64.0, 129.0005}}) {
    const double t = 1e-8;
    const Complex got = fc_quadrature(c, N, r, t);
    CHECK(got.real() / t == doctest::Approx(lens_area(N, 1.0, r)).epsilon(1e-6));
    CHECK(std::abs(got.imag()) < 1e-6 * got.real());
  }
  CHECK(iterate_norm_on_d(c, 0.0, 16, 0.0) == 0.0);
}

TEST_CASE("second iterate is radial: rotated lattice points agree") {
  // 17842177 = 1^2 + 4224^2 = 1369^2 + 3996^2 = 2591^2 + 3336^2, and
  // sqrt(17842177) / 128 lies inside D for N = 16.
  const auto c = make_coefficients(1, -1, 0.5);
  const int m = 128;
  const int points = required_points(c, 16, m);
  const double r = std::sqrt(17842177.0) / m;
  const double want = fc_quadrature(c, 16, r, 0.1).real();
  for (auto [a, b] : {std::pair{1, 4224}, std::pair{1369, 3996}, std::pair{2591, 3336}, std::pair{-3336, 2591}}) {
    const double got = fc_lattice(c, 16, {double(a) / m, double(b) / m}, 0.1, m, points).real();
    CHECK(got == doctest::Approx(want).epsilon(5e-3));
  }
  CHECK_THROWS_AS(fc_lattice(c, 16, {33.0, 0.0}, 0.1, m, points - 2), ValidationError);
}
