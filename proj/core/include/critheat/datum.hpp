#pragma once

#include <functional>
#include <string>
#include <vector>

#include "critheat/radial_profile.hpp"

namespace critheat {

// Radial initial datum on R^6 with tail f_0(r) = r^{-γ}(log r)^{-β} beyond r = e
// and plateau e^{-γ} inside. An empty schedule gives the single-sign datum;
// otherwise the sign flips through each blend (R_j, 2R_j) and is (-1)^j on
// (2R_j, R_{j+1}).
struct PiecewiseRadialDatum {
  double beta = 0.75;
  double gamma = 2.0;
  std::vector<double> schedule;
  double plateau_radius = 2.718281828459045;

  double operator()(double r) const;
  // Sign of the pure region containing r (blends report the sign they leave).
  int sign_at(double r) const;
  // d(z e^s) e^{2s}: the datum seen at self-similar radius z at time t = e^{2s}.
  double scaled(double z, double s) const;
  std::vector<double> breakpoints() const;
};

// Type-erased radial datum used by the heat-flow evaluators. `scaled(z, s)`
// returns t·d(z√t) with s = log √t, so data with power tails stay in floating
// range for large t.
struct RadialDatum {
  std::function<double(double z, double s)> scaled;
  std::vector<double> breaks;  // physical radii where d is not smooth
  double sup_abs = 0.0;
  std::string label;

  double operator()(double r) const { return scaled(r, 0.0); }
};

RadialDatum as_datum(const PiecewiseRadialDatum& d);
// a |x|^{-γ}; self-similar when γ = 2.
RadialDatum pure_power(double gamma, double amplitude = 1.0);
// Profile values on its range, zero beyond. The profile must start at r = 0.
RadialDatum tabulated(const RadialProfile& profile);
RadialDatum linear_combination(double a, const RadialDatum& f, double b, const RadialDatum& g);

// Separation condition on blend radii: e < R_j < R_{j+1} and
// (2R_j) log(2R_j) < R_{j+1} / log R_{j+1}. Throws ConfigError naming the pair.
void validate_schedule(const std::vector<double>& radii);

}  // namespace critheat
