#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "critheat/radial_profile.hpp"
#include "critheat/schedule.hpp"
#include "critheat/spectrum.hpp"
#include "critheat/verdict.hpp"

// Dynamics of the scaling parameter λ(t) in τ = log t.
namespace critheat::scaling {

// τ = major + minor, with |minor| << major. Window edges share the major part
// p_j so differences across a narrow window keep full precision.
struct LogTime {
  double major = 0.0;
  double minor = 0.0;
  double value() const { return major + minor; }
};

// a^s - b^s without cancellation.
double pow_diff(const LogTime& a, const LogTime& b, double s);
double pow_diff(double a, double b, double s);

LogTime edge_minus(const TimeSchedule& s, int j);
LogTime edge_plus(const TimeSchedule& s, int j);

enum class DKind { zero, envelope_plus, envelope_minus, random };
enum class GapKind { zero, envelope_plus, envelope_minus, alternating, random, custom };

struct RateConfig {
  double C1 = 1.0;
  double beta_prime = 1.2;
  DKind d = DKind::zero;
  GapKind gap = GapKind::alternating;
  std::uint64_t seed = 1;
  // Per-window gap factors g_j (index 0 is j = 1) for GapKind::custom; |g_j| <= 1.
  std::vector<double> custom_gap;
  int samples_per_window = 32;
  double ode_tol = 1e-12;
};

struct Sample {
  LogTime tau;
  double loglambda = 0.0;
  int window = 0;     // j
  std::string branch;  // "gap" on (t_j^-, t_j^+), "sign" on (t_j^+, t_{j+1}^-)
  double int_D = 0.0;      // ∫ D dt from the start of the current sign window
  double int_abs_D = 0.0;  // ∫ |D| dt from t_1^+
};

struct LambdaTrajectory {
  std::vector<Sample> samples;
  // log λ at t_j^- and t_j^+, index 0 is j = 1.
  std::vector<double> at_minus;
  std::vector<double> at_plus;
  std::vector<double> abs_D_to_minus;  // ∫_{t_1^+}^{t_j^-} |D|
};

// D(t) t = C1 ξ(τ) τ^{-β'} with ξ ∈ [-1, 1] set by the kind (seeded for random).
class PerturbationField {
 public:
  PerturbationField(const RateConfig& cfg);
  double xi(double tau) const;
  // D(t)·t as a function of τ.
  double D_times_t(double tau) const;

 private:
  RateConfig cfg_;
  std::vector<double> amp_, freq_, phase_;
};

// Integrates the piecewise system from t_1^- with log λ(t_1^-) = q1 (log t_1^-)^{1-β}
// through the sign window (t_{jmax}^+, t_{jmax+1}^-). Throws ContractViolation
// when a gap factor exceeds the envelope.
LambdaTrajectory integrate_piecewise(const TimeSchedule& s, const RateConfig& cfg);

// Upper bounds for even j, lower bounds for odd j, j = 2..jmax.
std::vector<Verdict> check_window_bounds(const LambdaTrajectory& traj, const TimeSchedule& s, const RateConfig& cfg);
// Two-sided telescoping bounds at every j = 2..jmax, plus the comparison
// with the coarse bounds.
std::vector<Verdict> check_telescoping(const LambdaTrajectory& traj, const TimeSchedule& s, const RateConfig& cfg);
// Global envelope, gap-window bounds, the exact identity on sign windows
// against an independent quadrature of D, and the alternation/growth of
// log λ(t_j^-).
std::vector<Verdict> check_trajectory(const LambdaTrajectory& traj, const TimeSchedule& s, const RateConfig& cfg);

// Smallest n1 >= 4 for which every verdict passes for all listed rate configs;
// nullopt if none up to n_max.
std::optional<int> search_nbar(double beta, int jmax, std::span<const RateConfig> cfgs, int n_max = 64);

void write_trajectory_csv(std::ostream& os, const LambdaTrajectory& traj);
void write_verdict_csv(std::ostream& os, std::span<const Verdict> verdicts);

// Synthetic outer field: t^{-1}(log t)^{-β'} on |x| < √t and
// |x|^{-2}(log |x|^2)^{-β'} outside.
struct SyntheticOuterField {
  double beta_prime = 1.2;
  double operator()(double x, double t) const;
  // Relative jump across |x| = √t.
  double seam_mismatch(double t) const;
};

// -⟨2Q w(λ·, t), ψ2⟩ / ⟨ΛQ, ψ2⟩ over B_R with r^5 weights.
double modulation_rhs(const std::function<double(double x, double t)>& w, double lambda, double t,
                      const spectrum::EigenPair& psi2, double R);

// b(t)·t tabulated against τ = log t.
struct BTable {
  std::vector<double> tau;
  std::vector<double> bt;
};

struct MatchedOptions {
  double tol = 1e-11;
  // Extra rate d log λ / dτ added to (5/4) b t.
  std::function<double(double tau)> correction;
};

// d log λ / dτ = (5/4) b(e^τ) e^τ on [tau_begin, tau_end] from loglambda0.
// Throws RangeError when the table does not cover the interval.
LambdaTrajectory integrate_matched(const BTable& table, double tau_begin, double tau_end, double loglambda0,
                                   const MatchedOptions& opts = {});

}  // namespace critheat::scaling
