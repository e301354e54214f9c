#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "commands.hpp"
#include "qdnls/coefficients.hpp"
#include "qdnls/error.hpp"
#include "qdnls/field_io.hpp"
#include "qdnls/potential.hpp"
#include "qdnls/projections.hpp"
#include "qdnls/solver.hpp"
#include "qdnls/time_space_field.hpp"

namespace qdnls::cli {

using nlohmann::json;

std::filesystem::path resolve_input(const Context& ctx, const std::string& path) {
  const std::filesystem::path p(path);
  return p.is_absolute() ? p : ctx.config_dir / p;
}

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Grid2D read_grid(ConfigReader& r) {
  auto g = r.object("grid");
  const double L = g.number("half_width", 20.0);
  const int n = g.integer("points", 256);
  g.finish();
  if (!(L > 0.0)) throw ConfigError(g.path() + "/half_width", "must be positive");
  if (n < 8 || (n & (n - 1)) != 0) throw ConfigError(g.path() + "/points", "must be a power of two >= 8");
  return Grid2D(L, n);
}

SystemCoefficients read_coefficients(ConfigReader& r, bool required,
                                     std::array<double, 3> fallback = {1.0, -1.0, 0.5}) {
  auto c = required ? r.required_object("coefficients") : r.object("coefficients");
  const double a = required ? c.required_number("alpha") : c.number("alpha", fallback[0]);
  const double b = required ? c.required_number("beta") : c.number("beta", fallback[1]);
  const double g = required ? c.required_number("gamma") : c.number("gamma", fallback[2]);
  c.finish();
  return make_coefficients(a, b, g);
}

struct DataSpec {
  std::string preset;
  double amplitude, width, radius;
  int k1, k2;
};

DataSpec read_data(ConfigReader& r) {
  auto d = r.required_object("data");
  DataSpec s;
  s.preset = d.string("preset", "gaussian", {"gaussian", "annulus", "plane-wave"});
  s.amplitude = d.number("amplitude", 0.1);
  s.width = d.number("width", 1.0);
  s.radius = d.number("radius", 4.0);
  const auto k = d.integers("wavenumber", {1, 0});
  d.finish();
  if (k.size() != 2) throw ConfigError(d.path() + "/wavenumber", "expected two integers");
  if (!(s.width > 0.0)) throw ConfigError(d.path() + "/width", "must be positive");
  s.k1 = k[0];
  s.k2 = k[1];
  return s;
}

// Scalar profiles of the presets; u, v and W are built from them.
//   gaussian:   amplitude exp(-|x|^2 / width^2)
//   annulus:    Fourier bump exp(-((|xi| - radius) / width)^2), L2 norm = amplitude
//   plane-wave: amplitude exp(i xi_k . x) (not radial)
SpectralField profile(const Grid2D& g, const DataSpec& d) {
  const auto ones = SpectralField::from_coefficients(g, std::vector<Complex>(g.size(), 1.0));
  if (d.preset == "gaussian") {
    // Series coefficients of the periodized Gaussian; exactly shell-radial.
    const double w2 = d.width * d.width;
    const double scale = d.amplitude * std::numbers::pi * w2 / g.area();
    return ones.multiplied([&](double a, double b) { return scale * std::exp(-0.25 * w2 * (a * a + b * b)); });
  }
  if (d.preset == "annulus") {
    auto f = ones.multiplied([&](double a, double b) {
                   const double z = (std::hypot(a, b) - d.radius) / d.width;
                   return std::exp(-z * z);
                 });
    const double n = f.l2_norm();
    if (n == 0.0) throw ValidationError("annulus preset has no lattice frequencies on this grid");
    f *= d.amplitude / n;
    return f;
  }
  if (std::abs(d.k1) >= g.points() / 2 || std::abs(d.k2) >= g.points() / 2) {
    throw ValidationError("plane-wave wavenumber is not resolved by the grid");
  }
  return SpectralField::mode(g, d.k1, d.k2, d.amplitude);
}

SystemState initial_state(const Grid2D& g, const DataSpec& d, bool radial, double radial_tol) {
  const auto p = profile(g, d);
  const SpectralField zero(g);
  if (d.preset == "plane-wave") {
    VectorField u(p, zero), v(p, zero);
    if (radial) return SystemState::radial(u, v, zero, 0.0, radial_tol);
    return SystemState::cartesian(u, v, VectorField(g));
  }
  // Every component is a multiple of the radial profile.
  VectorField u(p, Complex(0.0, 1.0) * p), v(p, Complex(-0.5) * p);
  if (radial) return SystemState::radial(u, v, p, 0.0, radial_tol);
  return SystemState::cartesian(u, v, gradient(p));
}

std::vector<SpectralField> components(const SystemState& s) {
  std::vector<SpectralField> out{s.u[0], s.u[1], s.v[0], s.v[1]};
  if (s.W) {
    out.push_back(*s.W);
  } else {
    out.push_back((*s.w)[0]);
    out.push_back((*s.w)[1]);
  }
  return out;
}

IntegratorConfig read_integrator(ConfigReader& r, bool radial) {
  auto i = r.object("integrator");
  IntegratorConfig c;
  c.scheme = parse_scheme(i.string("scheme", to_string(c.scheme), {"split-step-strang", "exponential-rk4"}));
  c.dt = i.number("dt", c.dt);
  c.t_end = i.number("t_end", c.t_end);
  c.dealias = i.boolean("dealias", c.dealias);
  c.nonlinear = i.boolean("nonlinear", c.nonlinear);
  c.snapshot_every = i.integer("snapshot_every", c.snapshot_every);
  c.diagnostic_s = i.number("diagnostic_s", c.diagnostic_s);
  c.blowup_factor = i.number("blowup_factor", c.blowup_factor);
  c.radial_tolerance = i.number("radial_tolerance", c.radial_tolerance);
  if (radial) {
    c.radial_reproject = i.boolean("radial_reproject", c.radial_reproject);
    c.radial_defect_floor = i.number("radial_defect_floor", c.radial_defect_floor);
  }
  i.finish();
  c.validate();
  return c;
}

double relative_drift(const std::vector<StepDiagnostics>& d, double StepDiagnostics::*m) {
  const double m0 = d.front().*m;
  double worst = 0.0;
  for (const auto& s : d) worst = std::max(worst, std::abs(s.*m - m0));
  return m0 > 0.0 ? worst / m0 : worst;
}

Outcome simulate(ConfigReader& r, const Context&, Artifacts& art, bool radial) {
  const Grid2D grid = read_grid(r);
  const auto coeffs = read_coefficients(r, true);
  const auto data = read_data(r);
  const auto icfg = read_integrator(r, radial);
  auto o = r.object("output");
  const bool snapshots = o.boolean("snapshots", false);
  o.finish();
  r.finish();

  const auto state = initial_state(grid, data, radial, icfg.radial_tolerance);
  const Trajectory traj = radial ? evolve_radial(state, coeffs, icfg) : evolve(state, coeffs, icfg);

  std::ostringstream csv;
  csv << "time,m1,m2,hs_u,hs_v,hs_w,radial_defect\n";
  for (const auto& d : traj.diagnostics) {
    csv << g17(d.time) << ',' << g17(d.m1) << ',' << g17(d.m2) << ',' << g17(d.hs_u) << ',' << g17(d.hs_v)
        << ',' << g17(d.hs_w) << ',' << g17(d.radial_defect) << '\n';
  }
  art.text("diagnostics.csv", csv.str());

  json snaps = json::array();
  if (snapshots) {
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "snapshot_%04zu.qfld", i);
      write_fields(art.path(name), components(traj.snapshots[i]));
      art.add(name);
      snaps.push_back({{"file", name}, {"time", traj.snapshots[i].time}});
    }
  }

  const auto& first = traj.diagnostics.front();
  const auto& last = traj.diagnostics.back();
  Outcome out;
  out.result = {
      {"form", radial ? "radial" : "cartesian"},
      {"regime", to_string(coeffs.regime())},
      {"status", to_string(traj.status)},
      {"message", traj.message},
      {"steps", traj.diagnostics.size() - 1},
      {"final_time", last.time},
      {"dt_used", traj.dt_used},
      {"stability_number", traj.stability_number},
      {"removed_by_dealias", traj.removed_by_dealias},
      {"m1", {{"initial", first.m1}, {"final", last.m1}, {"max_relative_drift", relative_drift(traj.diagnostics, &StepDiagnostics::m1)}}},
      {"m2", {{"initial", first.m2}, {"final", last.m2}, {"max_relative_drift", relative_drift(traj.diagnostics, &StepDiagnostics::m2)}}},
      {"final_hs", {{"u", last.hs_u}, {"v", last.hs_v}, {"w", last.hs_w}}},
      {"snapshots", snaps},
  };
  if (traj.duhamel_residual) out.result["duhamel_residual"] = *traj.duhamel_residual;
  if (traj.status != RunStatus::completed) {
    write_fields(art.path("last_snapshot.qfld"), components(traj.last()));
    art.add("last_snapshot.qfld");
    out.exit_code = 3;
    out.error = {{"kind", "numerical"},
                 {"message", to_string(traj.status) + ": " + traj.message},
                 {"last_snapshot", "last_snapshot.qfld"},
                 {"last_time", traj.last().time}};
  }
  return out;
}

}  // namespace

Outcome simulate_command(ConfigReader& r, const Context& ctx, Artifacts& art) {
  return simulate(r, ctx, art, false);
}

Outcome simulate_radial_command(ConfigReader& r, const Context& ctx, Artifacts& art) {
  return simulate(r, ctx, art, true);
}

Outcome potential_command(ConfigReader& r, const Context& ctx, Artifacts& art) {
  const std::string field = r.required_string("field");
  const double tol = r.number("tolerance", 1e-8);
  const std::string method = r.string("method", "spectral", {"spectral", "line"});
  const auto anchor = r.numbers("anchor", {0.0, 0.0});
  r.finish();
  if (anchor.size() != 2) throw ConfigError("/anchor", "expected two numbers");

  const auto fields = read_fields(resolve_input(ctx, field));
  if (fields.size() != 2) {
    throw ValidationError("potential needs a two-component field file, got " + std::to_string(fields.size()));
  }
  const VectorField w(fields[0], fields[1]);
  const auto check = check_irrotational(w, tol);
  if (!check.admitted()) {
    throw ValidationError("rotational input rejected: " + check.failing_condition + " defect " +
                          std::to_string(check.failing_defect) + " exceeds tolerance");
  }
  const auto spectral = reconstruct_spectral(*check.field);
  const auto line = reconstruct_line(*check.field, {anchor[0], anchor[1]});
  const auto& chosen = method == "spectral" ? spectral : line;
  write_fields(art.path("potential.qfld"), {chosen.W});
  art.add("potential.qfld");

  const double scale = std::max(spectral.W.max_abs_coefficient(), 1e-300);
  Outcome out;
  out.result = {
      {"method", method},
      {"gauge", PotentialRepresentative::gauge},
      {"defects", {{"fourier", check.fourier_defect}, {"physical", check.physical_defect}}},
      {"round_trip_error", gradient_mismatch(chosen, w)},
      {"reconstructor_agreement", max_difference(line.W, spectral.W) / scale},
      {"radial", check_angular_constancy(chosen, tol)},
      {"potential_file", "potential.qfld"},
  };
  return out;
}

Outcome decompose_command(ConfigReader& r, const Context& ctx, Artifacts& art) {
  const std::string field = r.required_string("field");
  const int component = r.integer("component", 0);
  const double sigma = r.number("sigma", 1.0);
  const double evolution_sigma = r.number("evolution_sigma", sigma);
  const double T = r.number("T", 1.0);
  const int nt = r.integer("time_samples", 64);
  const bool windowed = r.boolean("windowed", true);
  r.finish();
  if (!(T > 0.0)) throw ConfigError("/T", "must be positive");
  if (nt < 4 || nt % 2 != 0) throw ConfigError("/time_samples", "must be an even integer >= 4");

  const auto fields = read_fields(resolve_input(ctx, field));
  if (component < 0 || component >= static_cast<int>(fields.size())) {
    throw ConfigError("/component", "field file has " + std::to_string(fields.size()) + " components");
  }
  const auto& f = fields[component];
  const Grid2D& g = f.grid();
  // Free evolution under evolution_sigma, windowed on [0, T].
  std::vector<Complex> values;
  values.reserve(static_cast<std::size_t>(nt) * g.size());
  for (int m = 0; m < nt; ++m) {
    const double t = T * m / nt;
    const double w = windowed ? time_window(t, T) : 1.0;
    for (const auto& v : free_propagator(f, evolution_sigma, t).physical()) values.push_back(w * v);
  }
  const auto u = TimeSpaceField::from_samples(T, nt, g, std::move(values));
  const auto blocks = block_norms(u, sigma);

  std::ostringstream csv;
  csv << "N,L,value\n";
  double sum = 0.0;
  for (const auto& b : blocks) {
    csv << g17(b.N) << ',' << g17(b.L) << ',' << g17(b.value) << '\n';
    sum += b.value * b.value;
  }
  art.text("blocks.csv", csv.str());
  Outcome out;
  out.result = {{"blocks", blocks.size()},
                {"l2_norm", u.l2_norm()},
                {"block_l2_sum", std::sqrt(sum)},
                {"blocks_file", "blocks.csv"}};
  return out;
}

}  // namespace qdnls::cli
