#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "kernel.hpp"
#include "qdnls/error.hpp"
#include "qdnls/solver.hpp"

namespace qdnls {

using detail::Kernel;
using detail::Packed;

Scheme parse_scheme(const std::string& name) {
  if (name == "split-step-strang") return Scheme::split_step_strang;
  if (name == "exponential-rk4") return Scheme::exponential_rk4;
  throw ValidationError("unknown scheme '" + name + "'");
}

std::string to_string(Scheme s) {
  return s == Scheme::split_step_strang ? "split-step-strang" : "exponential-rk4";
}

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::completed: return "completed";
    case RunStatus::blowup: return "blowup";
    case RunStatus::non_finite: return "non_finite";
    case RunStatus::radial_defect: return "radial_defect";
  }
  return "unknown";
}

void IntegratorConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt must be positive");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ValidationError("t_end must be positive");
  if (snapshot_every < 0) throw ValidationError("snapshot_every must be >= 0");
  if (!(blowup_factor > 1.0)) throw ValidationError("blowup_factor must exceed 1");
}

namespace {

void axpy(std::vector<Complex>& y, Complex a, const std::vector<Complex>& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

// Exponential time differencing RK4 (Cox-Matthews), with the phi-function
// coefficients evaluated by contour averaging (Kassam-Trefethen) so that
// small |h L| does not cancel.
class Etdrk4 {
 public:
  Etdrk4(const Kernel& k, double h) : kernel_(k) {
    const std::size_t size = k.grid().size();
    const double dxi2 = std::pow(k.grid().frequency_step(), 2);
    int max_k2 = 0;
    for (int v : k.k2()) max_k2 = std::max(max_k2, v);
    constexpr int kContour = 32;
    for (int c = 0; c < k.components(); ++c) {
      const double sigma = k.sigma(c);
      auto& t = table(sigma);
      if (!t.e.empty()) continue;
      t.e.resize(max_k2 + 1);
      t.e2.resize(max_k2 + 1);
      t.q.resize(max_k2 + 1);
      t.f1.resize(max_k2 + 1);
      t.f2.resize(max_k2 + 1);
      t.f3.resize(max_k2 + 1);
      for (int m = 0; m <= max_k2; ++m) {
        const Complex z(0.0, -h * sigma * m * dxi2);
        Complex q = 0.0, f1 = 0.0, f2 = 0.0, f3 = 0.0;
        for (int j = 0; j < kContour; ++j) {
          const Complex r = z + std::polar(1.0, 2.0 * std::numbers::pi * (j + 0.5) / kContour);
          const Complex er = std::exp(r);
          const Complex r3 = r * r * r;
          q += (std::exp(0.5 * r) - 1.0) / r;
          f1 += (-4.0 - r + er * (4.0 - 3.0 * r + r * r)) / r3;
          f2 += (2.0 + r + er * (r - 2.0)) / r3;
          f3 += (-4.0 - 3.0 * r - r * r + er * (4.0 - r)) / r3;
        }
        t.e[m] = std::exp(z);
        t.e2[m] = std::exp(0.5 * z);
        t.q[m] = h * q / double(kContour);
        t.f1[m] = h * f1 / double(kContour);
        t.f2[m] = h * f2 / double(kContour);
        t.f3[m] = h * f3 / double(kContour);
      }
    }
    na_ = nb_ = nc_ = nv_ = a_ = b_ = c_ = k.zeros();
    (void)size;
  }

  void step(Packed& v) {
    const auto& k2 = kernel_.k2();
    const int comps = kernel_.components();
    kernel_.nonlinear(v, nv_);
    for (int c = 0; c < comps; ++c) {
      const auto& t = table(kernel_.sigma(c));
      for (std::size_t i = 0; i < v[c].size(); ++i) {
        a_[c][i] = t.e2[k2[i]] * v[c][i] + t.q[k2[i]] * nv_[c][i];
      }
    }
    kernel_.nonlinear(a_, na_);
    for (int c = 0; c < comps; ++c) {
      const auto& t = table(kernel_.sigma(c));
      for (std::size_t i = 0; i < v[c].size(); ++i) {
        b_[c][i] = t.e2[k2[i]] * v[c][i] + t.q[k2[i]] * na_[c][i];
      }
    }
    kernel_.nonlinear(b_, nb_);
    for (int c = 0; c < comps; ++c) {
      const auto& t = table(kernel_.sigma(c));
      for (std::size_t i = 0; i < v[c].size(); ++i) {
        c_[c][i] = t.e2[k2[i]] * a_[c][i] + t.q[k2[i]] * (2.0 * nb_[c][i] - nv_[c][i]);
      }
    }
    kernel_.nonlinear(c_, nc_);
    for (int c = 0; c < comps; ++c) {
      const auto& t = table(kernel_.sigma(c));
      for (std::size_t i = 0; i < v[c].size(); ++i) {
        const int m = k2[i];
        v[c][i] = t.e[m] * v[c][i] + t.f1[m] * nv_[c][i] +
                  2.0 * t.f2[m] * (na_[c][i] + nb_[c][i]) + t.f3[m] * nc_[c][i];
      }
    }
  }

 private:
  struct Table {
    double sigma = 0.0;
    std::vector<Complex> e, e2, q, f1, f2, f3;
  };

  Table& table(double sigma) {
    for (auto& t : tables_) {
      if (t.sigma == sigma && !t.e.empty()) return t;
    }
    for (auto& t : tables_) {
      if (t.e.empty()) {
        t.sigma = sigma;
        return t;
      }
    }
    throw std::logic_error("more than three dispersion classes");
  }

  const Kernel& kernel_;
  Table tables_[3];
  Packed nv_, na_, nb_, nc_, a_, b_, c_;
};

// Strang splitting: exact half-step of the linear flow around a classical
// RK4 step of the quadratic flow.
class Strang {
 public:
  Strang(const Kernel& k, double h) : kernel_(k), h_(h) {
    k1_ = k2_ = k3_ = k4_ = tmp_ = k.zeros();
  }

  void step(Packed& v) {
    kernel_.propagate(v, 0.5 * h_);
    const int comps = kernel_.components();
    kernel_.nonlinear(v, k1_);
    stage(v, k1_, 0.5 * h_);
    kernel_.nonlinear(tmp_, k2_);
    stage(v, k2_, 0.5 * h_);
    kernel_.nonlinear(tmp_, k3_);
    stage(v, k3_, h_);
    kernel_.nonlinear(tmp_, k4_);
    for (int c = 0; c < comps; ++c) {
      for (std::size_t i = 0; i < v[c].size(); ++i) {
        v[c][i] += h_ / 6.0 * (k1_[c][i] + 2.0 * k2_[c][i] + 2.0 * k3_[c][i] + k4_[c][i]);
      }
    }
    kernel_.propagate(v, 0.5 * h_);
  }

 private:
  void stage(const Packed& v, const Packed& k, double a) {
    for (std::size_t c = 0; c < v.size(); ++c) {
      tmp_[c] = v[c];
      axpy(tmp_[c], a, k[c]);
    }
  }

  const Kernel& kernel_;
  double h_;
  Packed k1_, k2_, k3_, k4_, tmp_;
};

struct NormSummary {
  StepDiagnostics d;
  double hs_total;
  bool finite;
};

NormSummary summarize(const Kernel& k, const Packed& p, double time, double s, bool radial_check) {
  const double area = k.grid().area();
  std::vector<double> l2(p.size(), 0.0), hs(p.size(), 0.0);
  const auto& xi2 = k.xi2();
  const bool radial_form = k.form() == Form::radial;
  for (std::size_t c = 0; c < p.size(); ++c) {
    for (std::size_t i = 0; i < p[c].size(); ++i) {
      double a2 = std::norm(p[c][i]);
      if (a2 == 0.0) continue;
      if (radial_form && c == 4) a2 *= xi2[i];  // grad W
      l2[c] += a2;
      hs[c] += std::pow(1.0 + xi2[i], s) * a2;
    }
  }
  const double u2 = area * (l2[0] + l2[1]);
  const double v2 = area * (l2[2] + l2[3]);
  const double w2 = area * (radial_form ? l2[4] : l2[4] + l2[5]);
  NormSummary out{};
  out.d.time = time;
  out.d.m1 = u2 + v2;
  out.d.m2 = u2 + w2;
  out.d.hs_u = std::sqrt(area * (hs[0] + hs[1]));
  out.d.hs_v = std::sqrt(area * (hs[2] + hs[3]));
  out.d.hs_w = std::sqrt(area * (radial_form ? hs[4] : hs[4] + hs[5]));
  out.hs_total = std::sqrt(out.d.hs_u * out.d.hs_u + out.d.hs_v * out.d.hs_v + out.d.hs_w * out.d.hs_w);
  out.finite = std::isfinite(out.hs_total) && std::isfinite(out.d.m1) && std::isfinite(out.d.m2);
  out.d.radial_defect = 0.0;
  if (radial_check && out.finite) {
    for (const auto& comp : p) {
      out.d.radial_defect = std::max(
          out.d.radial_defect, radial_defect(SpectralField::from_coefficients(k.grid(), comp)));
    }
  }
  return out;
}

// Running integral of exp(i t gamma |xi|^2) (u . conj v)^(t) over the steps
// of a radial run, composite Simpson with a three-point closing panel.
class DuhamelWitness {
 public:
  DuhamelWitness(const Kernel& k, double h, double gamma) : kernel_(k), h_(h), gamma_(gamma) {}

  void sample(const Packed& p, double t) {
    auto r = kernel_.product_uv(p);
    const auto& xi2 = kernel_.xi2();
    for (std::size_t i = 0; i < r.size(); ++i) r[i] *= std::polar(1.0, t * gamma_ * xi2[i]);
    f_.push_back(std::move(r));
    if (f_.size() > 3) f_.erase(f_.begin());
    ++count_;
    if (count_ >= 3 && (count_ - 1) % 2 == 0) {
      if (pairs_.empty()) pairs_.assign(f_.back().size(), 0.0);
      for (std::size_t i = 0; i < pairs_.size(); ++i) {
        pairs_[i] += h_ / 3.0 * (f_[0][i] + 4.0 * f_[1][i] + f_[2][i]);
      }
    }
  }

  // Integral from 0 to the latest sample.
  std::vector<Complex> integral() const {
    const std::size_t size = f_.back().size();
    std::vector<Complex> out = pairs_.empty() ? std::vector<Complex>(size) : pairs_;
    if (count_ % 2 == 0) {  // odd number of intervals: close the last one
      if (count_ == 2) {
        for (std::size_t i = 0; i < size; ++i) out[i] += 0.5 * h_ * (f_[0][i] + f_[1][i]);
      } else {
        for (std::size_t i = 0; i < size; ++i) {
          out[i] += h_ / 12.0 * (5.0 * f_[2][i] + 8.0 * f_[1][i] - f_[0][i]);
        }
      }
    }
    return out;
  }

 private:
  const Kernel& kernel_;
  double h_, gamma_;
  std::vector<std::vector<Complex>> f_;
  std::vector<Complex> pairs_;
  int count_ = 0;
};

std::string g6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

Trajectory run(const SystemState& initial, const SystemCoefficients& coeffs,
               const IntegratorConfig& config, Form form) {
  config.validate();
  const Kernel kernel(initial.grid(), coeffs, form, config.dealias);
  Packed v = kernel.pack(initial);

  Trajectory traj;
  {
    Packed projected = v;
    kernel.project(projected);
    double removed = 0.0;
    for (std::size_t c = 0; c < v.size(); ++c) {
      for (std::size_t i = 0; i < v[c].size(); ++i) removed += std::norm(v[c][i] - projected[c][i]);
    }
    traj.removed_by_dealias = std::sqrt(initial.grid().area() * removed);
    v = std::move(projected);
  }
  if (form == Form::radial && config.radial_reproject) {
    for (auto& comp : v) comp = radialize(SpectralField::from_coefficients(initial.grid(), comp)).coefficients();
  }

  const int steps = std::max(1, static_cast<int>(std::ceil(config.t_end / config.dt - 1e-9)));
  const double h = config.t_end / steps;
  const double max_sigma = std::max({std::abs(coeffs.alpha()), std::abs(coeffs.beta()),
                                     std::abs(coeffs.gamma())});
  traj.dt_used = h;
  traj.stability_number = h * max_sigma * kernel.max_xi2();

  const bool track_radial = form == Form::radial;
  const auto first = summarize(kernel, v, initial.time, config.diagnostic_s, true);
  traj.diagnostics.push_back(first.d);
  traj.snapshots.push_back(kernel.unpack(v, initial.time));
  const double defect_limit = std::max(10.0 * first.d.radial_defect, config.radial_defect_floor);

  std::optional<Etdrk4> etd;
  std::optional<Strang> strang;
  if (config.nonlinear) {
    if (config.scheme == Scheme::exponential_rk4) {
      etd.emplace(kernel, h);
    } else {
      strang.emplace(kernel, h);
    }
  }
  std::optional<DuhamelWitness> witness;
  if (form == Form::radial) {
    witness.emplace(kernel, h, coeffs.gamma());
    witness->sample(v, 0.0);
  }
  const Packed v0 = v;
  double v_time = initial.time;

  for (int step = 1; step <= steps; ++step) {
    const double t = initial.time + step * h;
    Packed next = v;
    if (!config.nonlinear) {
      kernel.propagate(next, h);
    } else if (etd) {
      etd->step(next);
    } else {
      strang->step(next);
    }
    if (form == Form::radial && config.radial_reproject) {
      for (auto& comp : next) {
        comp = radialize(SpectralField::from_coefficients(initial.grid(), comp)).coefficients();
      }
    }
    const auto summary = summarize(kernel, next, t, config.diagnostic_s, track_radial);
    if (!summary.finite) {
      traj.status = RunStatus::non_finite;
      traj.message = "non-finite values at t = " + g6(t);
      break;
    }
    traj.diagnostics.push_back(summary.d);
    if (first.hs_total > 0.0 && summary.hs_total > config.blowup_factor * first.hs_total) {
      traj.status = RunStatus::blowup;
      traj.message = "H^s norm exceeded blow-up threshold at t = " + g6(t);
      break;
    }
    if (track_radial && summary.d.radial_defect > defect_limit) {
      traj.status = RunStatus::radial_defect;
      traj.message = "radial defect " + g6(summary.d.radial_defect) + " exceeds limit " +
                     g6(defect_limit) + " at t = " + g6(t);
      break;
    }
    v = std::move(next);
    v_time = t;
    if (witness) witness->sample(v, t - initial.time);
    const bool snap = step == steps || (config.snapshot_every > 0 && step % config.snapshot_every == 0);
    if (snap) traj.snapshots.push_back(kernel.unpack(v, t));
  }
  // A failed run ends on its last accepted state.
  if (traj.status != RunStatus::completed && v_time > traj.snapshots.back().time) {
    traj.snapshots.push_back(kernel.unpack(v, v_time));
  }

  if (witness && traj.status == RunStatus::completed && config.nonlinear) {
    // grad W(T) against e^{iT gamma Lap} grad W0 - i int e^{i(T-t) gamma Lap} grad(u.conj v).
    const auto integral = witness->integral();
    const auto& xi2 = kernel.xi2();
    const double T = config.t_end;
    double diff = 0.0, ref = 0.0;
    for (std::size_t i = 0; i < xi2.size(); ++i) {
      if (xi2[i] == 0.0 || !kernel.in_band(i)) continue;
      const Complex phase = std::polar(1.0, -T * coeffs.gamma() * xi2[i]);
      const Complex predicted = phase * (v0[4][i] - Complex(0.0, 1.0) * integral[i]);
      diff += xi2[i] * std::norm(v[4][i] - predicted);
      ref += xi2[i] * std::norm(v[4][i]);
    }
    traj.duhamel_residual = ref > 0.0 ? std::sqrt(diff / ref) : std::sqrt(diff);
  }
  return traj;
}

}  // namespace

SystemState rhs_cartesian(const SystemState& state, const SystemCoefficients& c, bool dealias) {
  const Kernel kernel(state.grid(), c, Form::cartesian, dealias);
  Packed in = kernel.pack(state);
  Packed out;
  kernel.nonlinear(in, out);
  const auto& xi2 = kernel.xi2();
  for (int comp = 0; comp < kernel.components(); ++comp) {
    const double sigma = kernel.sigma(comp);
    for (std::size_t i = 0; i < xi2.size(); ++i) {
      out[comp][i] += Complex(0.0, -sigma * xi2[i]) * in[comp][i];
    }
  }
  return kernel.unpack(out, state.time);
}

Trajectory evolve(const SystemState& initial, const SystemCoefficients& c,
                  const IntegratorConfig& config) {
  if (initial.form() == Form::radial) return evolve_radial(initial, c, config);
  return run(initial, c, config, Form::cartesian);
}

Trajectory evolve_radial(const SystemState& initial, const SystemCoefficients& c,
                         const IntegratorConfig& config) {
  if (initial.form() != Form::radial) throw ValidationError("evolve_radial needs a radial-form state");
  const double defect = initial.radial_defect();
  if (defect > config.radial_tolerance) {
    throw ValidationError("initial data are not radial (defect " + std::to_string(defect) + ")");
  }
  return run(initial, c, config, Form::radial);
}

}  // namespace qdnls
