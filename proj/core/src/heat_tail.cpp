#include "critheat/heat_tail.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "critheat/csv.hpp"
#include "critheat/errors.hpp"
#include "critheat/heat_kernel.hpp"

namespace critheat::heat_tail {

namespace {

constexpr double kZMax = 60.0;

void check_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("heat_tail: t must be positive and finite");
}

// Breakpoints in z for a datum at time t, on [lo, hi], plus fixed panels.
std::vector<double> z_breaks(const RadialDatum& datum, double sqrt_t, double lo, double hi,
                             std::initializer_list<double> extra) {
  std::vector<double> pts(extra);
  for (double b : datum.breaks) pts.push_back(b / sqrt_t);
  return clip_breaks(std::move(pts), lo, hi);
}

HeatSample finish(double t, double x, const QuadResult& r, const QuadOptions& opts, const char* what) {
  HeatSample out;
  out.t = t;
  out.x = x;
  out.value_times_t = r.value;
  out.value = r.value / t;
  out.quad_error = r.error / t;
  const double allowed = std::max(1e-3 * std::abs(r.value), 1e-300);
  if (r.error > allowed && r.error > 100.0 * opts.abs_tol) {
    std::ostringstream msg;
    msg << what << ": quadrature error " << r.error << " exceeds 1e-3 of |value| " << std::abs(r.value)
        << " (t=" << t << ", x=" << x << ")";
    throw NumericError(msg.str());
  }
  return out;
}

}  // namespace

PiecewiseRadialDatum build_theta0(double beta, double gamma) {
  PiecewiseRadialDatum d;
  d.beta = beta;
  d.gamma = gamma;
  (void)as_datum(d);
  return d;
}

PiecewiseRadialDatum build_Theta0(double beta, std::vector<double> schedule, double gamma) {
  PiecewiseRadialDatum d;
  d.beta = beta;
  d.gamma = gamma;
  d.schedule = std::move(schedule);
  (void)as_datum(d);
  return d;
}

HeatSample theta_origin(const RadialDatum& datum, double t, const QuadOptions& opts) {
  check_time(t);
  const double s = 0.5 * std::log(t);
  const double sqrt_t = std::sqrt(t);
  auto f = [&](double z) {
    if (z <= 0.0) return 0.0;
    return std::exp(-0.25 * z * z) * datum.scaled(z, s) * std::pow(z, 5) / 64.0;
  };
  const auto breaks = z_breaks(datum, sqrt_t, 0.0, kZMax, {1.0, 2.0, 4.0, 8.0, 16.0, 32.0});
  const QuadResult r = gk_integrate_panels(f, breaks, opts);
  return finish(t, 0.0, r, opts, "theta_origin");
}

HeatSample theta_at(const RadialDatum& datum, double x, double t, const QuadOptions& opts) {
  check_time(t);
  if (!(x >= 0.0)) throw DomainError("theta_at: x must be nonnegative");
  if (x == 0.0) return theta_origin(datum, t, opts);
  const double s = 0.5 * std::log(t);
  const double sqrt_t = std::sqrt(t);
  const double y = x / sqrt_t;
  auto f = [&](double z) {
    if (z <= 0.0) return 0.0;
    return heat_kernel::kernel_z(y, z) * datum.scaled(z, s);
  };
  const double lo = std::max(0.0, y - kZMax), hi = y + kZMax;
  const auto breaks = z_breaks(datum, sqrt_t, lo, hi,
                               {y - 16.0, y - 8.0, y - 4.0, y - 2.0, y, y + 2.0, y + 4.0, y + 8.0, y + 16.0, 1.0, 4.0});
  return finish(t, x, gk_integrate_panels(f, breaks, opts), opts, "theta_at");
}

HeatSample grad_theta(const RadialDatum& datum, double x, double t, const QuadOptions& opts) {
  check_time(t);
  if (!(x >= 0.0)) throw DomainError("grad_theta: x must be nonnegative");
  HeatSample out;
  out.t = t;
  out.x = x;
  if (x == 0.0) return out;
  const double s = 0.5 * std::log(t);
  const double sqrt_t = std::sqrt(t);
  const double y = x / sqrt_t;
  auto f = [&](double z) {
    if (z <= 0.0) return 0.0;
    return heat_kernel::kernel_z_dy(y, z) * datum.scaled(z, s);
  };
  const double lo = std::max(0.0, y - kZMax), hi = y + kZMax;
  const auto breaks = z_breaks(datum, sqrt_t, lo, hi,
                               {y - 16.0, y - 8.0, y - 4.0, y - 2.0, y, y + 2.0, y + 4.0, y + 8.0, y + 16.0, 1.0, 4.0});
  QuadResult r = gk_integrate_panels(f, breaks, opts);
  r.value /= sqrt_t;
  r.error /= sqrt_t;
  QuadOptions relaxed = opts;
  relaxed.abs_tol = std::max(opts.abs_tol, 1e-12 * r.l1 / sqrt_t);
  return finish(t, x, r, relaxed, "grad_theta");
}

double theta_dt_origin(const RadialDatum& datum, double t, double log_step) {
  check_time(t);
  const double h = log_step;
  auto at = [&](double k) { return theta_origin(datum, t * std::exp(k * h)).value; };
  const double d_dlogt = (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * h);
  return d_dlogt / t;
}

double A1_constant() {
  auto f = [](double r) { return std::exp(-0.25 * r * r) * r * r * r; };
  const double breaks[] = {0.0, 2.0, 4.0, 8.0, 16.0, kZMax};
  const QuadResult r = gk_integrate_panels(f, breaks, QuadOptions{1e-13, 0.0, 15});
  return std::pow(std::numbers::pi, 3) * r.value / std::pow(4.0 * std::numbers::pi, 3);
}

double q1(double beta) {
  if (!(beta > 0.5 && beta < 1.0)) throw ConfigError("q1: β must lie in (1/2, 1)");
  return 5.0 * A1_constant() / (4.0 * (1.0 - beta));
}

WindowReport window_check(const PiecewiseRadialDatum& datum, int j, int samples) {
  if (j < 1 || static_cast<std::size_t>(j) >= datum.schedule.size())
    throw ConfigError("window_check: window index needs R_j and R_{j+1} in the schedule");
  if (samples < 2) throw ConfigError("window_check: need at least two samples");
  const RadialDatum d = as_datum(datum);
  const double Rj = datum.schedule[static_cast<std::size_t>(j - 1)];
  const double Rn = datum.schedule[static_cast<std::size_t>(j)];
  const double lo = 2.0 * Rj * std::log(2.0 * Rj);
  const double hi = Rn / std::log(Rn);
  if (!(hi > lo)) throw ConfigError("window_check: window is empty");
  if (2.0 * std::log(hi) > 700.0) throw ConfigError("window_check: window beyond floating range");

  const double A1 = A1_constant();
  WindowReport rep;
  rep.j = j;
  rep.expected_sign = (j % 2 == 0) ? 1 : -1;
  rep.logsqrt_lo = std::log(lo);
  rep.logsqrt_hi = std::log(hi);
  rep.sign_ok = true;
  for (int k = 1; k <= samples; ++k) {
    // Interior points only: the window is open.
    const double ls = rep.logsqrt_lo + (rep.logsqrt_hi - rep.logsqrt_lo) * k / (samples + 1.0);
    const double logt = 2.0 * ls;
    const HeatSample h = theta_origin(d, std::exp(logt));
    WindowRow row;
    row.j = j;
    row.logsqrt_t = ls;
    row.sign = h.value_times_t > 0.0 ? 1 : (h.value_times_t < 0.0 ? -1 : 0);
    row.ratio_to_A1 = std::abs(h.value_times_t) * std::pow(logt, datum.beta) / A1;
    row.deviation_times_logt = (std::abs(h.value_times_t) * std::pow(ls, datum.beta) / A1 - 1.0) * logt;
    rep.sign_ok = rep.sign_ok && row.sign == rep.expected_sign;
    rep.max_abs_deviation_times_logt = std::max(rep.max_abs_deviation_times_logt, std::abs(row.deviation_times_logt));
    rep.rows.push_back(row);
  }
  return rep;
}

void write_samples_csv(std::ostream& os, std::span<const HeatSample> samples) {
  CsvWriter csv(os, {"logt", "x", "theta", "quad_err"});
  for (const auto& s : samples) {
    csv.cell(std::log(s.t)).cell(s.x).cell(s.value).cell(s.quad_error);
    csv.end_row();
  }
}

void write_window_csv(std::ostream& os, std::span<const WindowReport> reports) {
  CsvWriter csv(os, {"j", "logsqrt_t", "sign", "ratio_to_A1", "deviation_times_logt"});
  for (const auto& rep : reports)
    for (const auto& row : rep.rows) {
      csv.cell(row.j).cell(row.logsqrt_t).cell(row.sign).cell(row.ratio_to_A1).cell(row.deviation_times_logt);
      csv.end_row();
    }
}

}  // namespace critheat::heat_tail
