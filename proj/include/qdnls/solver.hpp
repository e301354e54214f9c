#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qdnls/coefficients.hpp"
#include "qdnls/system_state.hpp"

namespace qdnls {

enum class Scheme { split_step_strang, exponential_rk4 };

Scheme parse_scheme(const std::string& name);
std::string to_string(Scheme s);

struct IntegratorConfig {
  double dt = 1e-3;
  Scheme scheme = Scheme::exponential_rk4;
  bool dealias = true;           // circular 2/3 rule on data and products
  bool radial_reproject = false; // radialize after every step (radial form)
  double t_end = 1.0;
  int snapshot_every = 0;        // 0: initial and final snapshots only
  bool nonlinear = true;         // false: pure free evolution
  double diagnostic_s = 1.0;     // Sobolev index for norms and blow-up detection
  double blowup_factor = 1e6;
  double radial_tolerance = 1e-8;     // admission of radial-form data
  double radial_defect_floor = 1e-10; // growth limit is max(10 x initial, floor)

  void validate() const;
};

enum class RunStatus { completed, blowup, non_finite, radial_defect };
std::string to_string(RunStatus s);

struct StepDiagnostics {
  double time;
  double m1;
  double m2;
  double hs_u;
  double hs_v;
  double hs_w;  // of w, or of grad W in radial form
  double radial_defect;
};

struct Trajectory {
  std::vector<SystemState> snapshots;       // strictly increasing times
  std::vector<StepDiagnostics> diagnostics; // initial state plus every step
  RunStatus status = RunStatus::completed;
  std::string message;
  double dt_used = 0.0;
  double stability_number = 0.0;  // dt * max|sigma| * max|xi|^2, informational
  double removed_by_dealias = 0.0;  // L2 norm cut from the initial data
  // Radial runs: relative mismatch of grad W(T) against its Duhamel formula.
  std::optional<double> duhamel_residual;

  const SystemState& last() const { return snapshots.back(); }
};

// Time derivative of a Cartesian state:
//   u' = i alpha Lap u + i (div w) v,  v' = i beta Lap v + i (div conj w) u,
//   w' = i gamma Lap w - i grad(u . conj v).
SystemState rhs_cartesian(const SystemState& state, const SystemCoefficients& c,
                          bool dealias = true);

Trajectory evolve(const SystemState& initial, const SystemCoefficients& c,
                  const IntegratorConfig& config);
// Radial form: W' = i gamma Lap W - i (u . conj v) with the zero mode of W frozen.
Trajectory evolve_radial(const SystemState& initial, const SystemCoefficients& c,
                         const IntegratorConfig& config);

struct DuhamelConfig {
  double T = 0.05;
  int iterations = 8;
  int time_samples = 32;  // even; uniform samples on [0, T]
  double s = 0.5;         // norm used for iterate differences
  bool dealias = true;
};

struct DuhamelReport {
  std::vector<double> differences;  // sup_t |Phi^k - Phi^{k-1}|_{H^s}, k = 1..
  std::vector<double> factors;      // differences[k] / differences[k-1]
  bool contracting = false;         // every factor < 1
  double max_factor = 0.0;
  SystemState final_state;          // last iterate at t = T
};

// Picard iteration of the Duhamel map on [0, T], starting from the zero
// function, so the first iterate is the free evolution of the data.
DuhamelReport duhamel_iterate(const SystemState& data, const SystemCoefficients& c,
                              const DuhamelConfig& config);

}  // namespace qdnls
