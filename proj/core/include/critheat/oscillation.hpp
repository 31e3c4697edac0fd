#pragma once

#include <ostream>
#include <vector>

#include "critheat/datum.hpp"
#include "critheat/pde_sim.hpp"

// Short-horizon check of the modulation law on the nonlinear flow: a ground
// state bubble sitting in the free heat tail of an alternating datum drifts in
// scale with the sign of the tail's value at the origin.
namespace critheat::oscillation {

struct OscillationConfig {
  int window = 1;
  // √t_start / λ_start and t_end / t_start.
  double L = 4.0;
  double time_ratio = 4.0;
  double kappa = 0.25;
  double settle_fraction = 0.25;
  int bisection_steps = 50;
  double h0 = 0.05;
  double growth = 1.03;
  double rtol = 1e-7;
  // Thresholds on u(0) λ_start^2 that classify a shooting run.
  double blow_threshold = 3.0;
  double disperse_threshold = 0.3;
};

struct TrendSample {
  double t = 0.0;          // rescaled time
  double dloglambda = 0.0;  // Δ log λ_est / Δt over the accepted step
  double b = 0.0;           // rescaled θ(0, t)
  bool agrees = false;
};

struct OscillationReport {
  int window = 0;
  int expected_sign = 0;  // sign of θ(0, t) through the run
  double lambda_scale = 0.0;  // λ_start in physical units
  double t_start = 0.0;       // physical
  double t_end = 0.0;
  double alpha = 0.0;         // shooting amplitude on the unstable mode
  int shooting_iterations = 0;
  pde::RunStatus final_status = pde::RunStatus::completed;
  double t_reached = 0.0;  // rescaled time the accepted run reached
  std::vector<TrendSample> trend;
  double agreement = 0.0;  // fraction of counted steps whose trend sign matches b
  double loglambda_change = 0.0;
  double predicted_loglambda_change = 0.0;  // (5/4)∫ b dt over the counted span
  // Control: same outer data without the core and with the nonlinearity off.
  double control_rel_error = 0.0;  // max |u(0) / θ(0) - 1| at three times
  pde::RunResult run;
};

OscillationReport oscillation_demo(const PiecewiseRadialDatum& datum, const OscillationConfig& cfg);

void write_trend_csv(std::ostream& os, const OscillationReport& rep);

}  // namespace critheat::oscillation
