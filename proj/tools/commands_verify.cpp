#include <cstdio>
#include <sstream>

#include "commands.hpp"
#include "qdnls/bilinear.hpp"
#include "qdnls/geometry.hpp"
#include "qdnls/inflation.hpp"
#include "qdnls/strichartz.hpp"
#include "svg.hpp"

namespace qdnls::cli {

using nlohmann::json;

namespace {

constexpr const char* kLowerBoundNote =
    "ratios are maxima over random samples and bound the best constants from below";

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

EngineOptions read_engine(ConfigReader& r) {
  auto e = r.object("engine");
  EngineOptions o;
  o.phi_nodes = e.integer("phi_nodes", o.phi_nodes);
  o.radial_nodes = e.integer("radial_nodes", o.radial_nodes);
  o.angular_nodes = e.integer("angular_nodes", o.angular_nodes);
  o.resolution = e.integer("resolution", o.resolution);
  o.delta_ratio = e.number("delta_ratio", o.delta_ratio);
  e.finish();
  return o;
}

std::array<double, 3> read_coefficients(ConfigReader& r, std::array<double, 3> fallback) {
  auto c = r.object("coefficients");
  std::array<double, 3> out{c.number("alpha", fallback[0]), c.number("beta", fallback[1]),
                            c.number("gamma", fallback[2])};
  c.finish();
  return out;
}

void write_sweeps(Artifacts& art, const std::string& title, const std::string& x_label,
                  const std::vector<const SweepReport*>& sweeps) {
  std::vector<SweepReport> copies;
  std::vector<PlotSeries> series;
  for (const auto* s : sweeps) {
    copies.push_back(*s);
    if (!s->points.empty()) series.push_back(sweep_series(*s));
  }
  art.text("rows.csv", to_csv(copies));
  art.text("plot.svg", loglog_svg(title, x_label, "best ratio", series));
}

}  // namespace

Outcome verify_strichartz(ConfigReader& r, const Context& ctx, Artifacts& art) {
  StrichartzConfig c;
  c.sigma = r.number("sigma", c.sigma);
  c.p = r.number("p", c.p);
  c.q = r.number("q", c.q);
  c.trials = r.integer("trials", c.trials);
  c.frequencies = r.numbers("frequencies", c.frequencies);
  c.modulations = r.numbers("modulations", c.modulations);
  c.half_width = r.number("half_width", c.half_width);
  c.points = r.integer("points", c.points);
  c.window = r.number("window", c.window);
  c.time_samples = r.integer("time_samples", c.time_samples);
  r.finish();
  c.seed = ctx.seed;

  const auto rep = strichartz_ratio(c);
  write_sweeps(art, "Strichartz ratios", "carrier frequency / L", {&rep.free_wave, &rep.modulation});
  Outcome out;
  out.result = {{"free_wave", to_json(rep.free_wave)},
                {"modulation", to_json(rep.modulation)},
                {"rescaling_mismatch", rep.rescaling_mismatch},
                {"note", kLowerBoundNote}};
  return out;
}

Outcome verify_bilinear(ConfigReader& r, const Context& ctx, Artifacts& art) {
  BilinearSweepConfig c;
  c.sigma1 = r.number("sigma1", c.sigma1);
  c.sigma2 = r.number("sigma2", c.sigma2);
  c.n_max = r.numbers("n_max", c.n_max);
  c.modulations = r.numbers("modulations", c.modulations);
  c.trials = r.integer("trials", c.trials);
  c.b_prime = r.number("b_prime", c.b_prime);
  c.engine = read_engine(r);
  r.finish();
  c.seed = ctx.seed;
  c.jobs = ctx.jobs;

  const auto rep = bilinear_strichartz_sweep(c);
  write_sweeps(art, "Bilinear ratios", "N_max", {&rep.sharp, &rep.interpolated});
  Outcome out;
  out.result = {{"sharp", to_json(rep.sharp)},
                {"interpolated", to_json(rep.interpolated)},
                {"baseline_ratio", rep.baseline_ratio},
                {"note", kLowerBoundNote}};
  return out;
}

Outcome verify_angular(ConfigReader& r, const Context& ctx, Artifacts& art) {
  AngularSweepConfig c;
  const auto k = read_coefficients(r, {c.alpha, c.beta, c.gamma});
  c.alpha = k[0], c.beta = k[1], c.gamma = k[2];
  c.N = r.number("N", c.N);
  c.modulations = r.numbers("modulations", c.modulations);
  c.sectors = r.integers("sectors", c.sectors);
  c.trials = r.integer("trials", c.trials);
  c.much_less = r.number("much_less", c.much_less);
  c.engine = read_engine(r);
  r.finish();
  c.seed = ctx.seed;
  c.jobs = ctx.jobs;

  const auto rep = angular_bilinear_sweep(c);
  write_sweeps(art, "Angular bilinear ratios", "A", {&rep.near, &rep.separated});
  Outcome out;
  out.result = {{"near", to_json(rep.near)}, {"separated", to_json(rep.separated)}, {"note", kLowerBoundNote}};
  return out;
}

Outcome verify_trilinear(ConfigReader& r, const Context& ctx, Artifacts& art) {
  TrilinearConfig c;
  const auto k = read_coefficients(r, {c.alpha, c.beta, c.gamma});
  c.alpha = k[0], c.beta = k[1], c.gamma = k[2];
  c.s = r.number("s", c.s);
  c.b_prime = r.number("b_prime", c.b_prime);
  c.c = r.number("c", c.c);
  c.frequencies = r.numbers("frequencies", c.frequencies);
  c.modulations = r.numbers("modulations", c.modulations);
  c.trials = r.integer("trials", c.trials);
  c.much_less = r.number("much_less", c.much_less);
  c.engine = read_engine(r);
  r.finish();
  c.seed = ctx.seed;
  c.jobs = ctx.jobs;

  const auto rep = trilinear_target_check(c);
  write_sweeps(art, "Trilinear target", "N",
               {&rep.target, &rep.radial_sector_mass, &rep.sector_control_mass});
  Outcome out;
  out.result = {{"target", to_json(rep.target)},
                {"radial_sector_mass", to_json(rep.radial_sector_mass)},
                {"sector_control_mass", to_json(rep.sector_control_mass)},
                {"note", kLowerBoundNote}};
  return out;
}

Outcome verify_geometry(ConfigReader& r, const Context& ctx, Artifacts& art) {
  ResonanceScanConfig rc;
  {
    auto g = r.object("resonance");
    std::vector<std::vector<double>> rows;
    for (const auto& c : rc.coefficients) rows.push_back({c[0], c[1], c[2]});
    rows = g.number_rows("coefficients", rows, 3);
    rc.coefficients.clear();
    for (const auto& row : rows) rc.coefficients.push_back({row[0], row[1], row[2]});
    rc.radius = g.integer("radius", rc.radius);
    rc.epsilon = g.number("epsilon", rc.epsilon);
    rc.separation = g.number("separation", rc.separation);
    g.finish();
  }
  AngularScanConfig ac;
  {
    auto g = r.object("angular");
    const auto s = g.numbers("sigma", {ac.sigma1, ac.sigma2, ac.sigma3});
    if (s.size() != 3) throw ConfigError(g.path() + "/sigma", "expected three numbers");
    ac.sigma1 = s[0], ac.sigma2 = s[1], ac.sigma3 = s[2];
    ac.N = g.number("N", ac.N);
    ac.sectors = g.integers("sectors", ac.sectors);
    ac.samples = g.integer("samples", ac.samples);
    ac.bound = g.number("bound", ac.bound);
    g.finish();
  }
  SectorGainConfig sc;
  {
    auto g = r.object("sector_gain");
    sc.sectors = g.integers("sectors", sc.sectors);
    sc.fields = g.integer("fields", sc.fields);
    sc.k_lo = g.number("k_lo", sc.k_lo);
    sc.k_hi = g.number("k_hi", sc.k_hi);
    sc.basis = g.integer("basis", sc.basis);
    sc.bound = g.number("bound", sc.bound);
    g.finish();
  }
  r.finish();
  rc.jobs = ctx.jobs;
  ac.seed = ctx.seed;
  sc.seed = ctx.seed;

  const auto res = resonance_geometry_scan(rc);
  const auto ang = angular_separation_scan(ac);
  const auto gain = radial_sector_gain(sc);

  json res_json = json::array();
  std::ostringstream rcsv;
  rcsv << "alpha,beta,gamma,sigma1,sigma2,sigma3,triples,low_modulation,min_size_ratio,separated_constant,"
          "violations\n";
  for (const auto& e : res.entries) {
    res_json.push_back({{"coefficients", e.coefficients},
                        {"sigma", {e.sigma.s1, e.sigma.s2, e.sigma.s3}},
                        {"triples", e.triples},
                        {"low_modulation", e.low_modulation},
                        {"min_size_ratio", e.min_size_ratio},
                        {"separated_constant", e.separated_constant},
                        {"violations", e.violations}});
    rcsv << g17(e.coefficients[0]) << ',' << g17(e.coefficients[1]) << ',' << g17(e.coefficients[2]) << ','
         << g17(e.sigma.s1) << ',' << g17(e.sigma.s2) << ',' << g17(e.sigma.s3) << ',' << e.triples << ','
         << e.low_modulation << ',' << g17(e.min_size_ratio) << ',' << g17(e.separated_constant) << ','
         << e.violations << '\n';
  }
  art.text("resonance.csv", rcsv.str());

  json ang_json = json::array();
  std::ostringstream acsv;
  acsv << "A,accepted,max_distance\n";
  for (const auto& e : ang.entries) {
    ang_json.push_back({{"A", e.A}, {"accepted", e.accepted}, {"max_distance", e.max_distance}});
    acsv << e.A << ',' << e.accepted << ',' << e.max_distance << '\n';
  }
  art.text("angular.csv", acsv.str());

  json gain_json = json::array();
  std::ostringstream gcsv;
  gcsv << "A,max_scaled\n";
  PlotSeries gain_series{"A^1/2 max_j |R_j u| / |u|", {}, {}, std::nullopt};
  for (const auto& e : gain.entries) {
    gain_json.push_back({{"A", e.A}, {"max_scaled", e.max_scaled}});
    gcsv << e.A << ',' << g17(e.max_scaled) << '\n';
    gain_series.x.push_back(e.A);
    gain_series.y.push_back(e.max_scaled);
  }
  art.text("sector_gain.csv", gcsv.str());
  art.text("plot.svg", loglog_svg("Radial sector gain", "A", "scaled sector mass", {gain_series}));

  Outcome out;
  out.result = {
      {"resonance", {{"entries", res_json}, {"passed", res.passed()}}},
      {"angular", {{"entries", ang_json}, {"max_distance", ang.max_distance()}, {"bound", ang.bound},
                   {"passed", ang.passed()}}},
      {"sector_gain", {{"entries", gain_json}, {"bound", gain.bound}, {"passed", gain.passed()}}},
  };
  return out;
}

Outcome verify_inflation(ConfigReader& r, const Context& ctx, Artifacts& art) {
  InflationConfig c;
  const auto k = read_coefficients(r, {c.alpha, c.beta, c.gamma});
  c.alpha = k[0], c.beta = k[1], c.gamma = k[2];
  c.s_values = r.numbers("s_values", c.s_values);
  c.n_values = r.numbers("n_values", c.n_values);
  c.t_for_n_fit = r.number("t_for_n_fit", c.t_for_n_fit);
  c.t_values = r.numbers("t_values", c.t_values);
  c.n_for_t_fit = r.number("n_for_t_fit", c.n_for_t_fit);
  {
    auto o = r.object("oracle");
    c.oracle.tolerance = o.number("tolerance", c.oracle.tolerance);
    c.oracle.max_depth = static_cast<unsigned>(o.integer("max_depth", static_cast<int>(c.oracle.max_depth)));
    c.oracle.attempts = o.integer("attempts", c.oracle.attempts);
    o.finish();
  }
  {
    auto g = r.object("grid");
    c.grid_max_n = g.number("max_n", c.grid_max_n);
    c.grid_refinement = g.integer("refinement", c.grid_refinement);
    g.finish();
  }
  r.finish();
  c.jobs = ctx.jobs;

  const auto rep = norm_inflation_experiment(c);

  auto point_json = [](const InflationPoint& p) {
    return json{{"N", p.N}, {"t", p.t}, {"s", p.s}, {"norm", p.norm}, {"oracle", p.oracle},
                {"f_norm", p.f_norm}, {"g_norm", p.g_norm}};
  };
  json n_sweep = json::array(), t_sweep = json::array(), fits = json::array(), grid = json::array();
  std::ostringstream csv;
  csv << "series,N,t,s,norm,oracle\n";
  for (const auto& p : rep.n_sweep) {
    n_sweep.push_back(point_json(p));
    csv << "n_sweep," << g17(p.N) << ',' << g17(p.t) << ',' << g17(p.s) << ',' << g17(p.norm) << ','
        << g17(p.oracle) << '\n';
  }
  for (const auto& p : rep.t_sweep) {
    t_sweep.push_back(point_json(p));
    csv << "t_sweep," << g17(p.N) << ',' << g17(p.t) << ',' << g17(p.s) << ',' << g17(p.norm) << ','
        << g17(p.oracle) << '\n';
  }
  art.text("rows.csv", csv.str());

  std::vector<PlotSeries> series;
  for (const auto& [s, fit] : rep.n_fits) {
    fits.push_back({{"s", s}, {"expected_exponent", 0.5 - s}, {"fit", to_json(fit)}});
    char label[32];
    std::snprintf(label, sizeof label, "s = %g", s);
    PlotSeries ps{label, {}, {}, fit};
    for (const auto& p : rep.n_sweep) {
      if (p.s == s) {
        ps.x.push_back(p.N);
        ps.y.push_back(p.norm);
      }
    }
    series.push_back(ps);
  }
  art.text("plot.svg", loglog_svg("Second iterate on D", "N", "H^s norm on D", series));

  std::ostringstream gcsv;
  gcsv << "N,t,oracle,lattice,relative_error\n";
  for (const auto& g : rep.grid_checks) {
    grid.push_back({{"N", g.N}, {"t", g.t}, {"oracle", g.oracle}, {"lattice", g.lattice},
                    {"relative_error", g.relative_error()}});
    gcsv << g17(g.N) << ',' << g17(g.t) << ',' << g17(g.oracle) << ',' << g17(g.lattice) << ','
         << g17(g.relative_error()) << '\n';
  }
  art.text("grid_checks.csv", gcsv.str());

  Outcome out;
  out.result = {{"p", rep.p},
                {"n_fits", fits},
                {"t_fit", to_json(rep.t_fit)},
                {"oracle_t_fit", to_json(rep.oracle_t_fit)},
                {"expected_t_exponent", 0.5},
                {"n_sweep", n_sweep},
                {"t_sweep", t_sweep},
                {"grid_checks", grid}};
  return out;
}

}  // namespace qdnls::cli
