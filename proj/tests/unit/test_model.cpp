#include <doctest.h>

#include <boost/numeric/odeint.hpp>
#include <cmath>

#include "generators.hpp"
#include "oracle_rhs.hpp"
#include "qdnls/coefficients.hpp"
#include "qdnls/error.hpp"
#include "qdnls/system_state.hpp"

using namespace qdnls;
using namespace qdnls::testing;

TEST_CASE("theta and kappa of the reference coefficient sets") {
  const auto a = make_coefficients(2, 1, 1);
  CHECK(a.theta() == -3.0);
  CHECK(a.kappa() == 2.0);
  CHECK(a.regime() == Regime::theta_negative);
  const auto b = make_coefficients(1, -1, 0.5);
  CHECK(b.theta() == 0.0);
  CHECK(b.kappa() == -0.5);
  CHECK(b.theta_is_zero());
  REQUIRE(b.p().has_value());
  CHECK(*b.p() == doctest::Approx(1.0));
  const auto c = make_coefficients(1, 1, 1);
  CHECK(c.theta() == -1.0);
  CHECK(c.kappa() == 0.0);
  CHECK(c.regime() == Regime::kappa_zero);
  CHECK_FALSE(c.p().has_value());
}

TEST_CASE("zero coefficients are rejected") {
  CHECK_THROWS_AS(make_coefficients(0, 1, 1), ValidationError);
  CHECK_THROWS_AS(make_coefficients(1, 0, 1), ValidationError);
  CHECK_THROWS_AS(make_coefficients(1, 1, 0), ValidationError);
  CHECK_THROWS_AS(make_coefficients(std::nan(""), 1, 1), ValidationError);
}

TEST_CASE("resonance function on the theta = 0 example") {
  const auto c = make_coefficients(1, -1, 0.5);
  CHECK(resonance_phi(c, {2, 0}, {1, 0}) == doctest::Approx(0.0));
  CHECK(resonance_phi(c, {0, 0}, {1, 0}) == doctest::Approx(2.0));
  CHECK(resonance_phi_factored(c, {0, 0}, {1, 0}) == doctest::Approx(2.0));
  const auto r = resonance(c, {0.3, -1.2}, {2.0, 0.7});
  REQUIRE(r.factored.has_value());
  CHECK(*r.factored == doctest::Approx(r.phi).epsilon(1e-12));
  CHECK_FALSE(resonance(make_coefficients(2, 1, 1), {1, 0}, {0, 1}).factored.has_value());
}

TEST_CASE("property: factored form equals Phi whenever theta = 0") {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    double alpha = uniform(rng, -3, 3), gamma = uniform(rng, -3, 3);
    if (std::abs(alpha) < 0.1 || std::abs(gamma) < 0.1 || std::abs(gamma - alpha) < 0.2) continue;
    const double beta = alpha * gamma / (gamma - alpha);
    if (std::abs(beta) < 0.1) continue;
    const auto c = make_coefficients(alpha, beta, gamma);
    CHECK(std::abs(c.theta()) < 1e-12);
    const Vec2 xi{uniform(rng, -50, 50), uniform(rng, -50, 50)};
    const Vec2 eta{uniform(rng, -50, 50), uniform(rng, -50, 50)};
    const double direct = resonance_phi(c, xi, eta), factored = resonance_phi_factored(c, xi, eta);
    const double scale = std::abs(alpha * dot(eta, eta)) + std::abs(beta * dot(xi - eta, xi - eta)) +
                         std::abs(gamma * dot(xi, xi));
    CHECK(std::abs(direct - factored) <= 1e-12 * scale);
  }
}

TEST_CASE("property: each interaction triple shares theta and |kappa|") {
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const double a = uniform(rng, 0.2, 3) * (trial % 2 ? 1 : -1);
    const double b = uniform(rng, -3, 3), g = uniform(rng, -3, 3);
    if (std::abs(b) < 0.1 || std::abs(g) < 0.1) continue;
    const auto c = make_coefficients(a, b, g);
    for (const auto& t : interaction_triples(c)) {
      CHECK(t.theta_tilde() == doctest::Approx(c.theta()).epsilon(1e-12).scale(1.0));
      CHECK(std::abs(t.kappa_tilde()) == doctest::Approx(std::abs(c.kappa())).epsilon(1e-12).scale(1.0));
    }
  }
}

namespace {

SystemState random_cartesian(const Grid2D& g, int band, Rng& rng) {
  return SystemState::cartesian({random_band_limited(g, band, rng), random_band_limited(g, band, rng)},
                                {random_band_limited(g, band, rng), random_band_limited(g, band, rng)},
                                {random_band_limited(g, band, rng), random_band_limited(g, band, rng)});
}

double state_distance(const SystemState& a, const SystemState& b) {
  double d = 0.0;
  for (int i = 0; i < 2; ++i) {
    d = std::max(d, max_difference(a.u[i], b.u[i]));
    d = std::max(d, max_difference(a.v[i], b.v[i]));
    d = std::max(d, max_difference((*a.w)[i], (*b.w)[i]));
  }
  return d;
}

}  // namespace

TEST_CASE("property: scaling preserves the H^0 norm and composes") {
  Rng rng(12);
  for (int trial = 0; trial < 5; ++trial) {
    const double L = uniform(rng, 1.0, 4.0);
    const Grid2D g(L, 32);
    const auto s = random_cartesian(g, 8, rng);
    CHECK(state_distance(scaling_transform(s, 1.0, g), s) < 1e-14);
    const Grid2D g2(2 * L, 32), g4(4 * L, 32);
    const auto s2 = scaling_transform(s, 2.0, g2);
    CHECK(s2.u.l2_norm() == doctest::Approx(s.u.l2_norm()).epsilon(1e-12));
    CHECK(s2.w->l2_norm() == doctest::Approx(s.w->l2_norm()).epsilon(1e-12));
    CHECK(state_distance(scaling_transform(s2, 2.0, g4), scaling_transform(s, 4.0, g4)) < 1e-13);
  }
  const Grid2D g(1.0, 16);
  const auto s = random_cartesian(g, 3, rng);
  CHECK_THROWS_AS(scaling_transform(s, 2.0, Grid2D(1.0, 16)), ValidationError);
}

TEST_CASE("scaling a single mode divides its amplitude by lambda") {
  const Grid2D g(1.0, 16), g3(3.0, 16);
  const auto m = SpectralField::mode(g, 2, -1, 1.0);
  const auto z = SpectralField(g);
  const auto s = SystemState::cartesian({m, z}, {z, z}, {z, z});
  const auto r = scaling_transform(s, 3.0, g3);
  CHECK(std::abs(r.u[0].coefficient(2, -1) - 1.0 / 3.0) < 1e-14);
}

TEST_CASE("quadratic invariants of degenerate states") {
  const Grid2D g(2.0, 16);
  const SpectralField z(g);
  const auto zero = SystemState::cartesian({z, z}, {z, z}, {z, z});
  CHECK(quadratic_invariants(zero).m1 == 0.0);
  CHECK(quadratic_invariants(zero).m2 == 0.0);
  Rng rng(1);
  const VectorField u(random_band_limited(g, 5, rng), random_band_limited(g, 5, rng));
  const auto only_u = SystemState::cartesian(u, {z, z}, {z, z});
  const double n2 = u.l2_norm() * u.l2_norm();
  CHECK(quadratic_invariants(only_u).m1 == doctest::Approx(n2).epsilon(1e-14));
  CHECK(quadratic_invariants(only_u).m2 == doctest::Approx(n2).epsilon(1e-14));
}

TEST_CASE("radial form converts to w = grad W") {
  Rng rng(6);
  const Grid2D g(3.0, 32);
  const auto W = random_radial(g, 6, rng);
  const VectorField u(random_radial(g, 6, rng), random_radial(g, 6, rng));
  const VectorField v(random_radial(g, 6, rng), random_radial(g, 6, rng));
  const auto rad = SystemState::radial(u, v, W);
  const auto cart = rad.to_cartesian();
  CHECK(max_difference((*cart.w)[0], partial(W, 0)) == 0.0);
  CHECK_THROWS_AS(quadratic_invariants(rad), ValidationError);
  const double gw = gradient(W).l2_norm();
  CHECK(quadratic_invariants(cart).m2 == doctest::Approx(u.l2_norm() * u.l2_norm() + gw * gw).epsilon(1e-14));
  const auto odd = SpectralField::mode(g, 1, 0, 1.0);
  CHECK_THROWS_AS(SystemState::radial(u, v, odd), ValidationError);
}

TEST_CASE("invariants hold along a high-accuracy reference integration") {
  // Galerkin system on |k|_inf <= 2 integrated with an embedded 7(8)
  // Runge-Kutta-Fehlberg pair at tolerance 1e-13.
  using State = std::vector<std::complex<double>>;
  namespace ode = boost::numeric::odeint;
  Rng rng(77);
  for (auto [a, b, g] : {std::array{2.0, 1.0, 1.0}, std::array{1.0, -1.0, 0.5}}) {
    const double L = 2.0, area = 16.0;
    const ModeSystem sys(a, b, g, L, 2);
    State s(6 * sys.size());
    for (auto& c : s) c = 0.3 * complex_normal(rng);
    const double m1 = sys.mass(s, 0, 2, area), m2 = sys.mass(s, 0, 4, area);
    auto stepper = ode::make_controlled(1e-13, 1e-13, ode::runge_kutta_fehlberg78<State>());
    const auto f = [&](const State& x, State& dx, double) { sys.rhs(x, dx); };
    ode::integrate_adaptive(stepper, f, s, 0.0, 1.0, 1e-3);
    CHECK(std::abs(sys.mass(s, 0, 2, area) - m1) <= 1e-10 * m1);
    CHECK(std::abs(sys.mass(s, 0, 4, area) - m2) <= 1e-10 * m2);
  }
}
