#pragma once

#include <ostream>
#include <span>
#include <vector>

// Duhamel solution of u_t = Δu + f on R^6 × (t0, ∞), u(t0) = 0, for radial
// forcings at their power/log envelope.
namespace critheat::duhamel {

enum class Region { inner, outer };

// inner: f = A s^{-γ} (log s)^q on |y| < K1√s, zero outside.
// outer: f = A |y|^{-2γ} (log |y|^2)^q on |y| > K1√s, zero inside.
struct ForcingSpec {
  double gamma = 1.0;
  double q = 0.0;
  double K1 = 1.0;
  Region region = Region::inner;
  double t0 = 10.0;
  double amplitude = 1.0;

  void validate() const;  // γ ∈ (0, 3), K1 > 0, t0 > e; throws ConfigError
  double value(double y, double s) const;
};

struct DuhamelValue {
  double u = 0.0;
  double error = 0.0;
};

// u(x, t) with the time integral split at t/2 (log s below, √(t-s) above).
DuhamelValue duhamel_eval(const ForcingSpec& f, double x, double t, double rel_tol = 1e-7);

// t^{1-γ}(log t)^q for |x| < K2√t, |x|^{2-2γ}(log |x|^2)^q beyond.
double bound_shape(const ForcingSpec& f, double x, double t, double K2 = 1.0);

struct BoundRow {
  double t0 = 0.0;
  double t = 0.0;
  double xi = 0.0;  // |x| / √t
  double x = 0.0;
  double u = 0.0;
  double bound = 0.0;
  double Cemp = 0.0;
};

struct BoundReport {
  ForcingSpec forcing;
  std::vector<BoundRow> rows;
  // max/min of Cemp per ξ over all t and both t0 values; the report's worst.
  std::vector<double> xi_values;
  std::vector<double> spread_per_xi;
  double worst_spread = 0.0;
  // Seam continuity: Cemp just inside vs just outside |x| = K2√t, largest ratio.
  double seam_ratio = 0.0;
};

// Evaluates Cemp = u / bound_shape on t_grid × ξ_grid at t0 and 2 t0. t_grid
// must be ascending with every t > 2·2t0.
BoundReport bound_report(ForcingSpec f, std::span<const double> t_grid, std::span<const double> xi_grid,
                         double K2 = 1.0, double seam_eps = 0.05);

// Least-squares exponent of log u(0,t) against log log t.
double fit_log_exponent(const ForcingSpec& f, std::span<const double> t_grid);

void write_bound_csv(std::ostream& os, std::span<const BoundReport> reports);

}  // namespace critheat::duhamel
