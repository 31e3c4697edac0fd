#include "critheat/datum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "critheat/errors.hpp"
#include "critheat/profiles.hpp"

namespace critheat {

namespace {

constexpr double kE = std::numbers::e;

// Weight of the sign on the left of blend j at radius r: χ(r/R_j).
double blend(double r, double Rj) { return profiles::eval_cutoff(r / Rj); }

// Signed multiplier in [-1, 1] for radius r beyond the plateau.
double sign_factor(const std::vector<double>& schedule, double r) {
  double left = 1.0;
  for (double Rj : schedule) {
    if (r <= Rj) return left;
    if (r < 2.0 * Rj) {
      const double c = blend(r, Rj);
      return left * c - left * (1.0 - c);
    }
    left = -left;
  }
  return left;
}

}  // namespace

double PiecewiseRadialDatum::operator()(double r) const { return scaled(r, 0.0); }

int PiecewiseRadialDatum::sign_at(double r) const {
  int s = 1;
  for (double Rj : schedule) {
    if (r < 2.0 * Rj) return s;
    s = -s;
  }
  return s;
}

double PiecewiseRadialDatum::scaled(double z, double s) const {
  if (!(z >= 0.0)) throw DomainError("datum: radius must be nonnegative");
  // log r = log z + s
  const double log_r = z > 0.0 ? std::log(z) + s : -std::numeric_limits<double>::infinity();
  if (log_r <= 1.0) return std::exp(2.0 * s - gamma);
  const double magnitude = std::exp(2.0 * s - gamma * log_r - beta * std::log(log_r));
  if (schedule.empty()) return magnitude;
  return magnitude * sign_factor(schedule, std::exp(log_r));
}

std::vector<double> PiecewiseRadialDatum::breakpoints() const {
  std::vector<double> out{plateau_radius};
  for (double Rj : schedule) {
    out.push_back(Rj);
    out.push_back(1.5 * Rj);
    out.push_back(2.0 * Rj);
  }
  return out;
}

void validate_schedule(const std::vector<double>& radii) {
  for (std::size_t j = 0; j < radii.size(); ++j) {
    if (!(radii[j] > kE)) {
      std::ostringstream msg;
      msg << "schedule: R_" << (j + 1) << " = " << radii[j] << " must exceed e";
      throw ConfigError(msg.str());
    }
    if (j + 1 < radii.size()) {
      const double a = radii[j], b = radii[j + 1];
      const double lhs = 2.0 * a * std::log(2.0 * a);
      const double rhs = b / std::log(b);
      if (!(b > a) || !(lhs < rhs)) {
        std::ostringstream msg;
        msg << "schedule: pair (R_" << (j + 1) << ", R_" << (j + 2) << ") = (" << a << ", " << b
            << ") violates 2R log 2R < R' / log R' (" << lhs << " >= " << rhs << ")";
        throw ConfigError(msg.str());
      }
    }
  }
}

RadialDatum as_datum(const PiecewiseRadialDatum& d) {
  if (!(d.beta > 0.5 && d.beta < 1.0)) throw ConfigError("datum: β must lie in (1/2, 1)");
  if (!(d.gamma > 0.0 && d.gamma < 6.0)) throw ConfigError("datum: γ must lie in (0, 6)");
  validate_schedule(d.schedule);
  RadialDatum out;
  out.scaled = [d](double z, double s) { return d.scaled(z, s); };
  out.breaks = d.breakpoints();
  out.sup_abs = std::exp(-d.gamma);
  out.label = d.schedule.empty() ? "monotone" : "alternating";
  return out;
}

RadialDatum pure_power(double gamma, double amplitude) {
  if (!(gamma > 0.0 && gamma < 6.0)) throw ConfigError("pure_power: γ must lie in (0, 6)");
  RadialDatum out;
  out.scaled = [gamma, amplitude](double z, double s) {
    if (z <= 0.0) return std::numeric_limits<double>::infinity();
    return amplitude * std::exp((2.0 - gamma) * s) * std::pow(z, -gamma);
  };
  out.sup_abs = std::numeric_limits<double>::infinity();
  out.label = "pure_power";
  return out;
}

RadialDatum tabulated(const RadialProfile& profile) {
  if (profile.empty() || profile.front_radius() != 0.0)
    throw ConfigError("tabulated: profile must start at r = 0");
  RadialDatum out;
  const double r_end = profile.back_radius();
  out.scaled = [profile, r_end](double z, double s) {
    const double r = z * std::exp(s);
    if (r >= r_end) return 0.0;
    return std::exp(2.0 * s) * profile(r);
  };
  out.breaks = {r_end};
  double sup = 0.0;
  for (double v : profile.values()) sup = std::max(sup, std::abs(v));
  out.sup_abs = sup;
  out.label = "tabulated";
  return out;
}

RadialDatum linear_combination(double a, const RadialDatum& f, double b, const RadialDatum& g) {
  RadialDatum out;
  out.scaled = [a, b, f = f.scaled, g = g.scaled](double z, double s) { return a * f(z, s) + b * g(z, s); };
  out.breaks = f.breaks;
  out.breaks.insert(out.breaks.end(), g.breaks.begin(), g.breaks.end());
  std::sort(out.breaks.begin(), out.breaks.end());
  out.sup_abs = std::abs(a) * f.sup_abs + std::abs(b) * g.sup_abs;
  out.label = "combination";
  return out;
}

}  // namespace critheat
