#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "generators.hpp"
#include "qdnls/error.hpp"
#include "qdnls/field_io.hpp"
#include "qdnls/spectral_field.hpp"
#include "qdnls/time_space_field.hpp"

using namespace qdnls;
using namespace qdnls::testing;

namespace {

double relative(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("grid rejects sizes that are not powers of two") {
  CHECK_THROWS_AS(Grid2D(1.0, 12), ValidationError);
  CHECK_THROWS_AS(Grid2D(1.0, 4), ValidationError);
  CHECK_THROWS_AS(Grid2D(0.0, 16), ValidationError);
  const Grid2D g(3.0, 16);
  CHECK(g.frequency_step() * g.half_width() == doctest::Approx(std::numbers::pi).epsilon(1e-15));
  for (int i = 0; i < 16; ++i) CHECK(g.slot(g.wavenumber(i)) == i);
}

TEST_CASE("constant field and single modes") {
  const Grid2D g(2.0, 16);
  auto one = SpectralField::sample(g, [](double, double) { return Complex(1.0); });
  CHECK(std::abs(one.coefficient(0, 0) - 1.0) < 1e-14);
  CHECK(one.max_abs_coefficient() == doctest::Approx(1.0));
  auto m = SpectralField::sample(g, [&](double x, double y) {
    return std::polar(1.0, g.frequency_step() * (3 * x - 2 * y));
  });
  CHECK(std::abs(m.coefficient(3, -2) - 1.0) < 1e-13);
  double others = 0.0;
  for (const auto& c : m.coefficients()) others += std::abs(c);
  CHECK(others - 1.0 < 1e-12);
}

TEST_CASE("property: DFT round trip and Parseval on random fields") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Grid2D g(uniform(rng, 0.5, 20.0), 32);
    const auto f = random_band_limited(g, 15, rng);
    const auto back = dft_roundtrip(f);
    CHECK(max_difference(back, f) <= 1e-12 * f.max_abs_coefficient());
    CHECK(relative(f.physical_l2_norm(), f.l2_norm()) < 1e-12);
    const auto rebuilt = SpectralField::from_physical(g, f.physical());
    CHECK(max_difference(rebuilt, f) <= 1e-12 * f.max_abs_coefficient());
  }
}

TEST_CASE("Nyquist row and column stay zero") {
  const Grid2D g(1.0, 8);
  std::vector<Complex> c(g.size(), 1.0);
  const auto f = SpectralField::from_coefficients(g, c);
  for (int i = 0; i < 8; ++i) {
    CHECK(f.coefficients()[g.index(-4, g.wavenumber(i))] == Complex(0.0));
    CHECK(f.coefficients()[g.index(g.wavenumber(i), -4)] == Complex(0.0));
  }
}

TEST_CASE("Sobolev norms of a single mode") {
  const Grid2D g(4.0, 32);
  const double a = 0.7;
  const auto m = SpectralField::mode(g, 3, 4, a);
  const double xi2 = 25.0 * g.frequency_step() * g.frequency_step();
  const double l2 = a * std::sqrt(g.area());
  CHECK(sobolev_norm(m, SobolevIndex(0.0)) == doctest::Approx(l2).epsilon(1e-12));
  CHECK(sobolev_norm(m, SobolevIndex(1.5)) == doctest::Approx(l2 * std::pow(1.0 + xi2, 0.75)).epsilon(1e-12));
  CHECK(homogeneous_norm(m, SobolevIndex(2.0)) == doctest::Approx(l2 * xi2).epsilon(1e-12));
  const auto zero = SpectralField(g);
  CHECK(sobolev_norm(zero, SobolevIndex(3.0)) == 0.0);
  const auto one = SpectralField::mode(g, 0, 0, 1.0);
  CHECK(homogeneous_norm(one, SobolevIndex(1.0)) == 0.0);
}

TEST_CASE("property: Sobolev norm is monotone in s") {
  Rng rng(5);
  const Grid2D g(3.0, 32);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = random_band_limited(g, 10, rng);
    double prev = 0.0;
    for (double s = -1.0; s <= 2.0; s += 0.25) {
      const double v = sobolev_norm(f, SobolevIndex(s));
      CHECK(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("gradient norm matches the homogeneous composite") {
  // |grad W|_{H^s}^2 = sum <xi>^{2s} |xi|^2 |W^|^2. For 0 <= s <= 1,
  // (1 + r^2)^s lies between (1 + r^2s) / 2 and 1 + r^2s.
  Rng rng(8);
  const Grid2D g(2.0, 32);
  for (double s : {0.0, 0.5, 1.0}) {
    const auto W = random_band_limited(g, 10, rng);
    const double lhs = sobolev_norm(gradient(W), SobolevIndex(s));
    const double rhs = std::hypot(homogeneous_norm(W, SobolevIndex(1.0)), homogeneous_norm(W, SobolevIndex(s + 1.0)));
    CHECK(lhs <= rhs * (1.0 + 1e-12));
    CHECK(lhs >= rhs * std::sqrt(0.5) * (1.0 - 1e-12));
  }
}

TEST_CASE("property: free propagator is a unitary semigroup") {
  Rng rng(3);
  const Grid2D g(5.0, 32);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = random_band_limited(g, 12, rng);
    const double sigma = uniform(rng, -2.0, 2.0), t1 = uniform(rng, -1.0, 1.0), t2 = uniform(rng, -1.0, 1.0);
    const auto a = free_propagator(free_propagator(f, sigma, t1), sigma, t2);
    const auto b = free_propagator(f, sigma, t1 + t2);
    CHECK(max_difference(a, b) <= 1e-12 * f.max_abs_coefficient());
    CHECK(relative(b.l2_norm(), f.l2_norm()) < 1e-14);
    CHECK(max_difference(free_propagator(f, sigma, 0.0), f) == 0.0);
  }
  const auto m = SpectralField::mode(g, 2, 1, 1.0);
  const double t = 0.3, sigma = 1.5, xi2 = 5.0 * std::pow(g.frequency_step(), 2);
  CHECK(std::abs(free_propagator(m, sigma, t).coefficient(2, 1) - std::polar(1.0, -t * sigma * xi2)) < 1e-14);
}

TEST_CASE("radiality on exact lattice shells") {
  const Grid2D g(10.0, 64);
  const auto gauss = SpectralField::sample(g, [](double x, double y) {
    return Complex(std::exp(-0.5 * (x * x + y * y)));
  });
  CHECK(is_radial(gauss, 1e-10));
  const auto odd = SpectralField::sample(g, [](double x, double y) {
    return Complex(x * std::exp(-0.5 * (x * x + y * y)));
  });
  CHECK_FALSE(is_radial(odd, 1e-3));
}

TEST_CASE("property: radialize is idempotent and commutes with the propagator") {
  Rng rng(21);
  const Grid2D g(3.0, 32);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = random_band_limited(g, 14, rng);
    const auto r = radialize(f);
    CHECK(max_difference(radialize(r), r) <= 1e-12 * r.max_abs_coefficient());
    CHECK(radial_defect(r) < 1e-12);
    const double sigma = uniform(rng, -1, 1), t = uniform(rng, 0, 2);
    CHECK(max_difference(radialize(free_propagator(f, sigma, t)), free_propagator(r, sigma, t)) <=
          1e-12 * r.max_abs_coefficient());
  }
}

TEST_CASE("derivatives of a mode") {
  const Grid2D g(2.0, 16);
  const auto m = SpectralField::mode(g, 1, -3, 1.0);
  const double h = g.frequency_step();
  CHECK(std::abs(partial(m, 0).coefficient(1, -3) - Complex(0.0, h)) < 1e-14);
  CHECK(std::abs(partial(m, 1).coefficient(1, -3) - Complex(0.0, -3.0 * h)) < 1e-14);
  CHECK(std::abs(laplacian(m).coefficient(1, -3) + 10.0 * h * h) < 1e-13);
  CHECK(max_difference(divergence(gradient(m)), laplacian(m)) < 1e-13);
  // conj(e^{i k x}) = e^{-i k x}
  CHECK(std::abs(conjugate(m).coefficient(-1, 3) - 1.0) < 1e-15);
}

TEST_CASE("circular dealiasing band") {
  const Grid2D g(1.0, 32);
  CHECK(in_dealias_band(g, 10, 0));
  CHECK_FALSE(in_dealias_band(g, 11, 0));
  CHECK_FALSE(in_dealias_band(g, 8, 8));
  Rng rng(2);
  const auto f = random_radial(g, 15, rng);
  CHECK(radial_defect(dealias(f)) < 1e-14);
}

TEST_CASE("binary container round trip and rejection of foreign files") {
  Rng rng(9);
  const Grid2D g(1.5, 16);
  std::vector<SpectralField> fields{random_band_limited(g, 7, rng), random_band_limited(g, 5, rng)};
  const auto path = std::filesystem::temp_directory_path() / "qdnls_fields_test.qfld";
  write_fields(path, fields);
  const auto back = read_fields(path);
  REQUIRE(back.size() == 2);
  CHECK(back[0].grid() == g);
  for (int i = 0; i < 2; ++i) CHECK(max_difference(back[i], fields[i]) < 1e-13);
  {
    std::ofstream bad(path, std::ios::binary);
    bad << "NOTAFIELD";
  }
  CHECK_THROWS_AS(read_fields(path), ValidationError);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_fields(path), ValidationError);
}

TEST_CASE("time-space field puts a free wave on its paraboloid") {
  const Grid2D g(std::numbers::pi, 8);
  const double sigma = 1.0;
  const int k1 = 1, k2 = 1;
  // tau_m = 2 pi m / T must hit -sigma |xi|^2 = -2, so T = pi.
  const double T = std::numbers::pi;
  const auto u = TimeSpaceField::sample(T, 16, g, [&](double t, double x, double y) {
    return std::polar(1.0, -t * sigma * 2.0 + k1 * x + k2 * y);
  }, false);
  double peak = 0.0, total = 0.0;
  const int n = g.points();
  for (int it = 0; it < u.time_points(); ++it) {
    for (int i = 0; i < n * n; ++i) {
      const double v = std::norm(u.coefficients()[static_cast<std::size_t>(it) * n * n + i]);
      total += v;
      if (std::abs(u.tau(it) + 2.0) < 1e-12) peak += v;
    }
  }
  CHECK(peak / total == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(relative(u.l2_norm(), u.sample_l2_norm()) < 1e-12);
}
