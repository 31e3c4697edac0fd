#pragma once

#include <cstddef>
#include <functional>
#include <ostream>
#include <span>
#include <vector>

#include "critheat/pde_grid.hpp"
#include "critheat/radial_profile.hpp"

// Radial method of lines for u_t = Δu + |u|u on R^6.
namespace critheat::pde {

struct SimConfig {
  double t_start = 0.0;
  double horizon = 1.0;
  double rtol = 1e-6;
  double atol = 1e-12;
  double dt_init = 1e-4;
  double dt_min = 1e-14;
  double dt_max = 1e300;
  bool nonlinear = true;
  double kappa = 0.25;    // cutoff exponent, in (0, 1/2)
  double R_inner = 5.0;   // inner zone is |x| < R_inner λ
  double blowup_factor = 1e6;
  std::size_t max_steps = 2000000;
  // Optional early stop, checked after every accepted step.
  std::function<bool(double t, std::span<const double> u)> stop;

  void validate() const;
};

struct SimState {
  double t = 0.0;
  std::vector<double> u;  // unknown nodes; u(r_max) = 0
  double energy = 0.0;
  double u0 = 0.0;
  double lambda_est = 0.0;  // NaN when u0 <= 0
  double dt = 0.0;
};

enum class RunStatus { completed, blowup, stopped, step_limit };

struct StepRecord {
  double t = 0.0;
  double u0 = 0.0;
  double lambda_est = 0.0;
  double energy = 0.0;
  double dt = 0.0;
};

struct RunResult {
  RunStatus status = RunStatus::completed;
  SimState final;
  std::vector<StepRecord> steps;  // initial state first, then every accepted step
  std::size_t rejected = 0;
  double max_energy_increase = 0.0;  // largest E_{k+1} - E_k over accepted steps
};

SimState make_state(const Grid& g, double t, std::vector<double> u);

// One IMEX step (V + dt K) u' = V (u + dt |u|u) without error control.
std::vector<double> imex_step(const Grid& g, std::span<const double> u, double dt, bool nonlinear);

// One accepted adaptive step: compares a full step with two half steps and
// keeps the half-step result. Returns the new state; its dt field is the
// proposed next step.
SimState step(const Grid& g, const SimState& s, const SimConfig& cfg, std::size_t* rejected = nullptr);

RunResult run(const Grid& g, const SimConfig& cfg, std::vector<double> u_initial);

struct ResidualZones {
  double lambda = 1.0;
  double t = 1.0;
  double R = 5.0;
};

struct ResidualReport {
  std::vector<double> pointwise;
  double inner = 0.0;         // sup over r < Rλ
  double intermediate = 0.0;  // Rλ <= r <= √t
  double outer = 0.0;         // r > √t
};

// |(u - u_prev)/dt - Δ_h u - |u|u| at the unknown nodes. dt = 0 drops the time term.
ResidualReport residual(const Grid& g, std::span<const double> u, std::span<const double> u_prev, double dt,
                        const ResidualZones& zones);

struct AnsatzConfig {
  double t = 1.0;
  double kappa = 0.25;
  // Multiply the core λ^{-2}Q(x/λ) by χ1; off keeps the full core.
  bool cut_core = true;
};

// λ^{-2}Q(x/λ)χ1 + (5b/4)T1(x/λ)χ1 + θ(x)(1-χ1), χ1 = χ(|x| / (λ^κ √t^{1-κ})).
// θ must cover [0, r_max]; T1 is used at its limit beyond its range.
std::vector<double> assemble_ansatz(const Grid& g, double lambda, double b, const RadialProfile& theta,
                                    const RadialProfile& T1, const AnsatzConfig& cfg);

// u0^{-1/2}; throws DomainError when u0 <= 0.
double extract_lambda(double u0);

RadialProfile to_profile(const Grid& g, std::span<const double> u);
std::vector<double> sample(const Grid& g, const std::function<double(double)>& f);

void write_run_csv(std::ostream& os, const RunResult& r);

}  // namespace critheat::pde
