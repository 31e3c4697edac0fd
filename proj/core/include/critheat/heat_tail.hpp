#pragma once

#include <ostream>
#include <span>
#include <vector>

#include "critheat/datum.hpp"
#include "critheat/quadrature.hpp"

// Free heat evolution of radial data on R^6 by adaptive quadrature.
namespace critheat::heat_tail {

struct HeatSample {
  double t = 0.0;
  double x = 0.0;
  double value = 0.0;
  double quad_error = 0.0;
  double value_times_t = 0.0;  // t·value, formed without underflow for tiny values
};

PiecewiseRadialDatum build_theta0(double beta, double gamma = 2.0);
PiecewiseRadialDatum build_Theta0(double beta, std::vector<double> schedule, double gamma = 2.0);

// θ(0, t) = (1/64) ∫_0^60 e^{-z^2/4} d(z√t) z^5 dz.
HeatSample theta_origin(const RadialDatum& datum, double t, const QuadOptions& opts = {});
// Value and radial derivative at |x| = x via the closed-form radial kernel.
HeatSample theta_at(const RadialDatum& datum, double x, double t, const QuadOptions& opts = {});
HeatSample grad_theta(const RadialDatum& datum, double x, double t, const QuadOptions& opts = {});
// ∂_t θ(0, t) by a centered five-point difference in log t.
double theta_dt_origin(const RadialDatum& datum, double t, double log_step = 0.05);

// (4π)^{-3} ∫_{R^6} e^{-|z|^2/4} |z|^{-2} dz = 1/8, by radial quadrature.
double A1_constant();
// 5 A1 / (4 (1 - β)).
double q1(double beta);

struct WindowRow {
  int j = 0;
  double logsqrt_t = 0.0;
  int sign = 0;
  // t (log t)^β |θ(0,t)| / A1.
  double ratio_to_A1 = 0.0;
  // (t (log √t)^β |θ(0,t)| / A1 - 1) log t.
  double deviation_times_logt = 0.0;
};

struct WindowReport {
  int j = 0;
  int expected_sign = 0;
  double logsqrt_lo = 0.0;
  double logsqrt_hi = 0.0;
  std::vector<WindowRow> rows;
  bool sign_ok = false;
  double max_abs_deviation_times_logt = 0.0;
};

// Samples θ(0,t) for √t log-uniform in the open window
// (2R_j log 2R_j, R_{j+1} / log R_{j+1}); expected sign (-1)^j.
WindowReport window_check(const PiecewiseRadialDatum& datum, int j, int samples = 16);

void write_samples_csv(std::ostream& os, std::span<const HeatSample> samples);
void write_window_csv(std::ostream& os, std::span<const WindowReport> reports);

}  // namespace critheat::heat_tail
