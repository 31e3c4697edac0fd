#include "critheat/pde_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "critheat/csv.hpp"
#include "critheat/errors.hpp"
#include "critheat/profiles.hpp"

namespace critheat::pde {

void SimConfig::validate() const {
  if (!(horizon > 0.0)) throw ConfigError("simulate: horizon must be positive");
  if (!(t_start >= 0.0)) throw ConfigError("simulate: t_start must be nonnegative");
  if (!(rtol > 0.0) || !(atol >= 0.0)) throw ConfigError("simulate: tolerances must be positive");
  if (!(dt_init > 0.0) || !(dt_min > 0.0) || !(dt_max >= dt_min)) throw ConfigError("simulate: bad step bounds");
  if (!(kappa > 0.0 && kappa < 0.5)) throw ConfigError("simulate: κ must lie in (0, 1/2)");
  if (!(R_inner > 0.0)) throw ConfigError("simulate: R must be positive");
  if (!(blowup_factor > 1.0)) throw ConfigError("simulate: blow-up factor must exceed 1");
}

double extract_lambda(double u0) {
  if (!(u0 > 0.0)) {
    std::ostringstream msg;
    msg << "extract_lambda: center value " << u0 << " is not positive; profile is no longer ground-state-like";
    throw DomainError(msg.str());
  }
  return 1.0 / std::sqrt(u0);
}

SimState make_state(const Grid& g, double t, std::vector<double> u) {
  if (u.size() != g.M) throw ConfigError("make_state: sample count does not match grid");
  SimState s;
  s.t = t;
  s.u = std::move(u);
  s.energy = energy(g, s.u);
  s.u0 = s.u[0];
  s.lambda_est = s.u0 > 0.0 ? 1.0 / std::sqrt(s.u0) : std::numeric_limits<double>::quiet_NaN();
  return s;
}

std::vector<double> imex_step(const Grid& g, std::span<const double> u, double dt, bool nonlinear) {
  std::vector<double> rhs(u.begin(), u.end());
  if (nonlinear)
    for (auto& v : rhs) v += dt * std::abs(v) * v;
  return implicit_solve(g, dt, rhs);
}

SimState step(const Grid& g, const SimState& s, const SimConfig& cfg, std::size_t* rejected) {
  double dt = std::clamp(s.dt > 0.0 ? s.dt : cfg.dt_init, cfg.dt_min, cfg.dt_max);
  for (;;) {
    const auto full = imex_step(g, s.u, dt, cfg.nonlinear);
    const auto half = imex_step(g, s.u, 0.5 * dt, cfg.nonlinear);
    const auto two = imex_step(g, half, 0.5 * dt, cfg.nonlinear);
    double scale = 0.0, err = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < two.size(); ++i) {
      scale = std::max(scale, std::abs(two[i]));
      err = std::max(err, std::abs(two[i] - full[i]));
      finite = finite && std::isfinite(two[i]);
    }
    const double ratio = finite ? err / (cfg.atol + cfg.rtol * scale) : std::numeric_limits<double>::infinity();
    if (ratio <= 1.0) {
      SimState out = make_state(g, s.t + dt, two);
      const double grow = ratio > 0.0 ? 0.9 / std::sqrt(ratio) : 2.0;
      out.dt = std::clamp(dt * std::clamp(grow, 0.2, 2.0), cfg.dt_min, cfg.dt_max);
      return out;
    }
    if (rejected) ++*rejected;
    const double shrink = std::isfinite(ratio) ? std::clamp(0.9 / std::sqrt(ratio), 0.1, 0.5) : 0.1;
    dt *= shrink;
    if (dt < cfg.dt_min) {
      std::ostringstream msg;
      msg << "step: time step fell below " << cfg.dt_min << " at t = " << s.t;
      throw NumericError(msg.str());
    }
  }
}

RunResult run(const Grid& g, const SimConfig& cfg, std::vector<double> u_initial) {
  cfg.validate();
  RunResult res;
  SimState s = make_state(g, cfg.t_start, std::move(u_initial));
  for (double v : s.u)
    if (!std::isfinite(v)) throw DomainError("run: initial data must be finite");
  double sup0 = 0.0;
  for (double v : s.u) sup0 = std::max(sup0, std::abs(v));
  s.dt = cfg.dt_init;
  res.steps.push_back({s.t, s.u0, s.lambda_est, s.energy, 0.0});
  const double t_end = cfg.t_start + cfg.horizon;
  std::size_t count = 0;
  while (s.t < t_end * (1.0 - 1e-15)) {
    if (count++ >= cfg.max_steps) {
      res.status = RunStatus::step_limit;
      break;
    }
    SimState trial = s;
    trial.dt = std::min(s.dt, t_end - s.t);
    const double proposed = s.dt;
    SimState next = step(g, trial, cfg, &res.rejected);
    if (next.t >= t_end * (1.0 - 1e-15)) next.dt = proposed;
    res.max_energy_increase = std::max(res.max_energy_increase, next.energy - s.energy);
    res.steps.push_back({next.t, next.u0, next.lambda_est, next.energy, next.t - s.t});
    s = std::move(next);
    double sup = 0.0;
    for (double v : s.u) sup = std::max(sup, std::abs(v));
    if (sup > cfg.blowup_factor * sup0) {
      res.status = RunStatus::blowup;
      break;
    }
    if (cfg.stop && cfg.stop(s.t, s.u)) {
      res.status = RunStatus::stopped;
      break;
    }
  }
  res.final = std::move(s);
  return res;
}

ResidualReport residual(const Grid& g, std::span<const double> u, std::span<const double> u_prev, double dt,
                        const ResidualZones& zones) {
  if (u.size() != g.M || u_prev.size() != g.M) throw ConfigError("residual: sample count does not match grid");
  ResidualReport rep;
  const auto lap = laplacian(g, u);
  rep.pointwise.resize(g.M);
  const double r_in = zones.R * zones.lambda;
  const double r_out = std::sqrt(zones.t);
  for (std::size_t i = 0; i < g.M; ++i) {
    const double ut = dt > 0.0 ? (u[i] - u_prev[i]) / dt : 0.0;
    const double v = std::abs(ut - lap[i] - std::abs(u[i]) * u[i]);
    rep.pointwise[i] = v;
    const double r = g.r[i];
    if (r < r_in)
      rep.inner = std::max(rep.inner, v);
    else if (r > r_out)
      rep.outer = std::max(rep.outer, v);
    else
      rep.intermediate = std::max(rep.intermediate, v);
  }
  return rep;
}

std::vector<double> assemble_ansatz(const Grid& g, double lambda, double b, const RadialProfile& theta,
                                    const RadialProfile& T1, const AnsatzConfig& cfg) {
  if (!(lambda > 0.0)) throw DomainError("assemble_ansatz: λ must be positive");
  if (!(cfg.t > 0.0)) throw DomainError("assemble_ansatz: t must be positive");
  if (!theta.covers(0.0) || !theta.covers(g.r[g.M - 1])) throw RangeError("assemble_ansatz: θ does not cover the grid");
  const double scale = std::pow(lambda, cfg.kappa) * std::pow(std::sqrt(cfg.t), 1.0 - cfg.kappa);
  std::vector<double> u(g.M);
  for (std::size_t i = 0; i < g.M; ++i) {
    const double r = g.r[i];
    const double y = r / lambda;
    const double chi = profiles::eval_cutoff(r / scale);
    const double t1 = T1.covers(y) ? T1(y) : profiles::kT1Limit;
    const double core = profiles::eval_Q(y) / (lambda * lambda);
    u[i] = (cfg.cut_core ? core * chi : core) + 1.25 * b * t1 * chi + theta(r) * (1.0 - chi);
  }
  return u;
}

RadialProfile to_profile(const Grid& g, std::span<const double> u) {
  if (u.size() != g.M) throw ConfigError("to_profile: sample count does not match grid");
  std::vector<double> v(u.begin(), u.end());
  v.push_back(0.0);
  return RadialProfile(g.r, std::move(v));
}

std::vector<double> sample(const Grid& g, const std::function<double(double)>& f) {
  std::vector<double> u(g.M);
  for (std::size_t i = 0; i < g.M; ++i) u[i] = f(g.r[i]);
  return u;
}

void write_run_csv(std::ostream& os, const RunResult& r) {
  CsvWriter csv(os, {"t", "u0", "lambda_est", "energy", "dt"});
  for (const auto& s : r.steps) {
    csv.cell(s.t).cell(s.u0).cell(s.lambda_est).cell(s.energy).cell(s.dt);
    csv.end_row();
  }
}

}  // namespace critheat::pde
