#include "critheat/oscillation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "critheat/csv.hpp"
#include "critheat/errors.hpp"
#include "critheat/heat_tail.hpp"
#include "critheat/profiles.hpp"
#include "critheat/spectrum.hpp"

namespace critheat::oscillation {

namespace {

struct Setup {
  pde::Grid grid;
  std::vector<double> base;  // ansatz without the unstable-mode kick
  std::vector<double> kick;  // ψ1 on the grid
  double t0 = 0.0;           // rescaled start
  double t1 = 0.0;
};

// -1: disperses, +1: blows up. Runs that stay in range are judged by the last
// trend of u(0); 0 only when it is flat.
int classify(const pde::RunResult& r, const OscillationConfig& cfg) {
  const double u0 = r.final.u0;
  if (r.status == pde::RunStatus::blowup || u0 > cfg.blow_threshold) return 1;
  if (u0 < cfg.disperse_threshold) return -1;
  if (r.steps.size() < 2) return 0;
  const double du = r.steps.back().u0 - r.steps[r.steps.size() - 2].u0;
  return du > 0.0 ? 1 : (du < 0.0 ? -1 : 0);
}

}  // namespace

OscillationReport oscillation_demo(const PiecewiseRadialDatum& datum, const OscillationConfig& cfg) {
  if (cfg.window < 1 || static_cast<std::size_t>(cfg.window) >= datum.schedule.size())
    throw ConfigError("oscillation_demo: window index needs R_j and R_{j+1}");
  if (!(cfg.L > 1.0) || !(cfg.time_ratio > 1.0)) throw ConfigError("oscillation_demo: L and time ratio must exceed 1");
  if (!(cfg.settle_fraction >= 0.0 && cfg.settle_fraction < 1.0))
    throw ConfigError("oscillation_demo: settle fraction must lie in [0, 1)");
  const RadialDatum d = as_datum(datum);
  const double Rj = datum.schedule[static_cast<std::size_t>(cfg.window - 1)];
  const double Rn = datum.schedule[static_cast<std::size_t>(cfg.window)];
  const double lo = std::log(2.0 * Rj * std::log(2.0 * Rj));
  const double hi = std::log(Rn / std::log(Rn));
  const double half_span = 0.25 * std::log(cfg.time_ratio);
  if (!(hi - lo > 2.0 * half_span)) throw ConfigError("oscillation_demo: run does not fit inside the window");
  const double log_sqrt_t0 = 0.5 * (lo + hi) - half_span;

  OscillationReport rep;
  rep.window = cfg.window;
  rep.expected_sign = cfg.window % 2 == 0 ? 1 : -1;
  rep.t_start = std::exp(2.0 * log_sqrt_t0);
  rep.t_end = rep.t_start * cfg.time_ratio;
  const double lam = std::exp(log_sqrt_t0) / cfg.L;
  rep.lambda_scale = lam;

  // Rescaled variables x' = x/λ, t' = t/λ^2, u' = λ^2 u.
  Setup s;
  s.t0 = rep.t_start / (lam * lam);
  s.t1 = rep.t_end / (lam * lam);
  s.grid = pde::make_graded_grid(cfg.h0, 20.0 * std::sqrt(s.t1), cfg.growth);
  const auto& g = s.grid;
  auto theta_rescaled = [&](double r, double t) {
    return lam * lam * heat_tail::theta_at(d, r * lam, t * lam * lam).value;
  };
  auto b_exact = [&](double t) { return lam * lam * heat_tail::theta_origin(d, t * lam * lam).value; };
  // b is smooth on the run; tabulate once.
  std::vector<double> bt_nodes, bt_values;
  for (int k = 0; k <= 64; ++k) {
    const double t = s.t0 * std::pow(s.t1 / s.t0, k / 64.0);
    bt_nodes.push_back(t);
    bt_values.push_back(b_exact(t));
  }
  const RadialProfile b_table(bt_nodes, bt_values);
  auto b_rescaled = [&](double t) { return b_table(std::clamp(t, s.t0, s.t1)); };

  std::vector<double> theta_nodes(g.r.size());
  for (std::size_t i = 0; i < g.r.size(); ++i) theta_nodes[i] = theta_rescaled(g.r[i], s.t0);
  const RadialProfile theta(g.r, theta_nodes);
  const RadialProfile T1 = profiles::build_T1(1e4, 1e-10);
  const double b0 = b_exact(s.t0);
  s.base = pde::assemble_ansatz(g, 1.0, b0, theta, T1, pde::AnsatzConfig{s.t0, cfg.kappa, false});

  const auto pairs = spectrum::eig(spectrum::discretize(20.0, 2000), 1);
  const RadialProfile& psi1 = pairs.front().psi;
  s.kick = pde::sample(g, [&](double r) { return psi1.covers(r) ? psi1(r) : 0.0; });

  pde::SimConfig sim;
  sim.t_start = s.t0;
  sim.horizon = s.t1 - s.t0;
  sim.rtol = cfg.rtol;
  sim.atol = 1e-14;
  sim.dt_init = 1e-3;
  sim.kappa = cfg.kappa;
  sim.stop = [&](double, std::span<const double> u) {
    return u[0] > cfg.blow_threshold || u[0] < cfg.disperse_threshold;
  };
  auto shoot = [&](double alpha) {
    std::vector<double> u = s.base;
    for (std::size_t i = 0; i < u.size(); ++i) u[i] += alpha * s.kick[i];
    return pde::run(g, sim, std::move(u));
  };

  // Bracket: +α adds mass at the core (ψ1(0) = 1 > 0).
  double a_lo = -0.05, a_hi = 0.05;
  pde::RunResult r_lo = shoot(a_lo), r_hi = shoot(a_hi);
  for (int i = 0; i < 8 && !(classify(r_lo, cfg) < 0); ++i) r_lo = shoot(a_lo *= 2.0);
  for (int i = 0; i < 8 && !(classify(r_hi, cfg) > 0); ++i) r_hi = shoot(a_hi *= 2.0);
  if (!(classify(r_lo, cfg) < 0 && classify(r_hi, cfg) > 0))
    throw NumericError("oscillation_demo: could not bracket the unstable mode");

  pde::RunResult best = r_lo;
  double best_alpha = a_lo;
  int it = 0;
  for (; it < cfg.bisection_steps; ++it) {
    const double mid = 0.5 * (a_lo + a_hi);
    if (!(mid > a_lo && mid < a_hi)) break;
    pde::RunResult r = shoot(mid);
    const int c = classify(r, cfg);
    if (r.final.t >= best.final.t) {
      best = r;
      best_alpha = mid;
    }
    if (c == 0) break;
    (c > 0 ? a_hi : a_lo) = mid;
  }
  rep.alpha = best_alpha;
  rep.shooting_iterations = it;
  rep.final_status = best.status;
  rep.t_reached = best.final.t;

  // Trend after settling.
  const double t_settle = s.t0 + cfg.settle_fraction * (s.t1 - s.t0);
  std::size_t agree = 0;
  double first = std::nan(""), last = std::nan(""), t_first = 0.0, t_last = 0.0;
  for (std::size_t k = 1; k < best.steps.size(); ++k) {
    const auto& a = best.steps[k - 1];
    const auto& bstep = best.steps[k];
    if (a.t < t_settle) continue;
    if (!(a.u0 > 0.0) || !(bstep.u0 > 0.0)) continue;
    TrendSample ts;
    ts.t = bstep.t;
    ts.dloglambda = (std::log(bstep.lambda_est) - std::log(a.lambda_est)) / (bstep.t - a.t);
    ts.b = b_rescaled(0.5 * (a.t + bstep.t));
    ts.agrees = (ts.dloglambda > 0.0) == (ts.b > 0.0) && ts.dloglambda != 0.0;
    agree += ts.agrees ? 1 : 0;
    rep.trend.push_back(ts);
    if (std::isnan(first)) {
      first = std::log(a.lambda_est);
      t_first = a.t;
    }
    last = std::log(bstep.lambda_est);
    t_last = bstep.t;
  }
  rep.agreement = rep.trend.empty() ? 0.0 : static_cast<double>(agree) / static_cast<double>(rep.trend.size());
  if (!rep.trend.empty()) {
    rep.loglambda_change = last - first;
    // (5/4)∫ b dt by the trapezoid rule on 32 panels.
    const int n = 32;
    double sum = 0.0;
    for (int k = 0; k <= n; ++k) {
      const double t = t_first + (t_last - t_first) * k / n;
      sum += (k == 0 || k == n ? 0.5 : 1.0) * b_rescaled(t);
    }
    rep.predicted_loglambda_change = 1.25 * sum * (t_last - t_first) / n;
  }

  // Control run: outer data only, linear flow; compare u(0) with the heat tail.
  {
    pde::SimConfig ctl = sim;
    ctl.stop = nullptr;
    ctl.nonlinear = false;
    std::vector<double> u(g.M);
    for (std::size_t i = 0; i < g.M; ++i) u[i] = theta_nodes[i];
    const pde::RunResult cr = pde::run(g, ctl, std::move(u));
    double worst = 0.0;
    for (double frac : {0.25, 0.5, 1.0}) {
      const double t = s.t0 + frac * (s.t1 - s.t0);
      for (std::size_t k = 1; k < cr.steps.size(); ++k) {
        if (cr.steps[k].t < t) continue;
        const auto& a = cr.steps[k - 1];
        const auto& bb = cr.steps[k];
        const double w = (t - a.t) / (bb.t - a.t);
        const double v = a.u0 + w * (bb.u0 - a.u0);
        worst = std::max(worst, std::abs(v / b_exact(t) - 1.0));
        break;
      }
    }
    rep.control_rel_error = worst;
  }
  rep.run = std::move(best);
  return rep;
}

void write_trend_csv(std::ostream& os, const OscillationReport& rep) {
  CsvWriter csv(os, {"window", "t", "dloglambda_dt", "b", "agrees"});
  for (const auto& s : rep.trend) {
    csv.cell(rep.window).cell(s.t).cell(s.dloglambda).cell(s.b).cell(s.agrees ? 1 : 0);
    csv.end_row();
  }
}

}  // namespace critheat::oscillation
