#include "critheat/duhamel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "critheat/csv.hpp"
#include "critheat/errors.hpp"
#include "critheat/heat_kernel.hpp"
#include "critheat/quadrature.hpp"

namespace critheat::duhamel {

namespace {

constexpr double kWidth = 60.0;

// ∫ K_τ(x, ρ) f(ρ, s) ρ^5 dρ in z = ρ/√τ.
QuadResult spatial(const ForcingSpec& f, double x, double s, double tau, double rel_tol) {
  const double sqrt_tau = std::sqrt(tau);
  const double y = x / sqrt_tau;
  const double edge = f.K1 * std::sqrt(s) / sqrt_tau;
  double lo = std::max(0.0, y - kWidth);
  double hi = y + kWidth;
  if (f.region == Region::inner)
    hi = std::min(hi, edge);
  else
    lo = std::max(lo, edge);
  QuadResult out;
  if (!(hi > lo)) return out;
  auto g = [&](double z) {
    if (z <= 0.0) return 0.0;
    return heat_kernel::kernel_z(y, z) * f.value(z * sqrt_tau, s);
  };
  const auto breaks = clip_breaks({y - 16.0, y - 8.0, y - 4.0, y - 2.0, y, y + 2.0, y + 4.0, y + 8.0, y + 16.0}, lo, hi);
  return gk_integrate_panels(g, breaks, QuadOptions{rel_tol, 0.0, 12});
}

}  // namespace

void ForcingSpec::validate() const {
  if (!(gamma > 0.0 && gamma < 3.0)) throw ConfigError("forcing: γ must lie in (0, 3)");
  if (!(K1 > 0.0)) throw ConfigError("forcing: K1 must be positive");
  if (!(t0 > std::numbers::e)) throw ConfigError("forcing: t0 must exceed e");
  if (!std::isfinite(q) || !std::isfinite(amplitude)) throw ConfigError("forcing: q and amplitude must be finite");
}

double ForcingSpec::value(double y, double s) const {
  const bool inside = y < K1 * std::sqrt(s);
  if (region == Region::inner) return inside ? amplitude * std::pow(s, -gamma) * std::pow(std::log(s), q) : 0.0;
  if (inside) return 0.0;
  return amplitude * std::pow(y, -2.0 * gamma) * std::pow(std::log(y * y), q);
}

DuhamelValue duhamel_eval(const ForcingSpec& f, double x, double t, double rel_tol) {
  f.validate();
  if (!(t > f.t0)) throw DomainError("duhamel_eval: t must exceed t0");
  if (!(x >= 0.0)) throw DomainError("duhamel_eval: x must be nonnegative");
  DuhamelValue out;
  if (f.amplitude == 0.0) return out;
  const double inner_tol = 0.1 * rel_tol;
  const double split = std::max(f.t0, 0.5 * t);

  // s ∈ [t0, t/2] in v = log s.
  if (split > f.t0) {
    auto g = [&](double v) {
      const double s = std::exp(v);
      return s * spatial(f, x, s, t - s, inner_tol).value;
    };
    const double a = std::log(f.t0), b = std::log(split);
    std::vector<double> breaks{a, b};
    // Seam crossing K1√s = x.
    if (x > 0.0) {
      const double vs = 2.0 * std::log(x / f.K1);
      if (vs > a && vs < b) breaks.insert(breaks.begin() + 1, vs);
    }
    const QuadResult r = gk_integrate_panels(g, breaks, QuadOptions{rel_tol, 0.0, 12});
    out.u += r.value;
    out.error += r.error;
  }
  // s ∈ [split, t] in σ = √(t - s), ds = 2σ dσ.
  {
    auto g = [&](double sigma) {
      if (sigma <= 0.0) {
        // τ → 0: the heat kernel tends to the identity.
        return 0.0;
      }
      const double s = t - sigma * sigma;
      return 2.0 * sigma * spatial(f, x, s, sigma * sigma, inner_tol).value;
    };
    const double smax = std::sqrt(t - split);
    std::vector<double> breaks{0.0, smax};
    if (x > 0.0) {
      const double s_star = x * x / (f.K1 * f.K1);
      if (s_star > split && s_star < t) breaks.insert(breaks.begin() + 1, std::sqrt(t - s_star));
    }
    const QuadResult r = gk_integrate_panels(g, breaks, QuadOptions{rel_tol, 0.0, 12});
    out.u += r.value;
    out.error += r.error;
  }
  if (!std::isfinite(out.u)) throw NumericError("duhamel_eval: non-finite result");
  return out;
}

double bound_shape(const ForcingSpec& f, double x, double t, double K2) {
  if (x < K2 * std::sqrt(t)) return std::pow(t, 1.0 - f.gamma) * std::pow(std::log(t), f.q);
  return std::pow(x, 2.0 - 2.0 * f.gamma) * std::pow(std::log(x * x), f.q);
}

BoundReport bound_report(ForcingSpec f, std::span<const double> t_grid, std::span<const double> xi_grid, double K2,
                         double seam_eps) {
  f.validate();
  if (t_grid.empty() || xi_grid.empty()) throw ConfigError("bound_report: empty grid");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (i > 0 && !(t_grid[i] > t_grid[i - 1])) throw ConfigError("bound_report: t grid must be ascending");
    if (!(t_grid[i] > 4.0 * f.t0)) throw ConfigError("bound_report: every t must exceed 4 t0");
  }
  BoundReport rep;
  rep.forcing = f;
  rep.xi_values.assign(xi_grid.begin(), xi_grid.end());
  std::vector<double> lo(xi_grid.size(), std::numeric_limits<double>::infinity());
  std::vector<double> hi(xi_grid.size(), 0.0);
  const double base_t0 = f.t0;
  for (double t0 : {base_t0, 2.0 * base_t0}) {
    ForcingSpec g = f;
    g.t0 = t0;
    for (double t : t_grid) {
      for (std::size_t k = 0; k < xi_grid.size(); ++k) {
        BoundRow row;
        row.t0 = t0;
        row.t = t;
        row.xi = xi_grid[k];
        row.x = xi_grid[k] * std::sqrt(t);
        row.u = duhamel_eval(g, row.x, t).u;
        row.bound = bound_shape(g, row.x, t, K2);
        row.Cemp = row.u / row.bound;
        lo[k] = std::min(lo[k], std::abs(row.Cemp));
        hi[k] = std::max(hi[k], std::abs(row.Cemp));
        rep.rows.push_back(row);
      }
    }
  }
  for (std::size_t k = 0; k < xi_grid.size(); ++k) {
    const double spread = lo[k] > 0.0 ? hi[k] / lo[k] : std::numeric_limits<double>::infinity();
    rep.spread_per_xi.push_back(spread);
    rep.worst_spread = std::max(rep.worst_spread, spread);
  }
  // Seam at the largest t, base t0.
  const double t = t_grid.back();
  const double xin = K2 * (1.0 - seam_eps) * std::sqrt(t);
  const double xout = K2 * (1.0 + seam_eps) * std::sqrt(t);
  const double cin = duhamel_eval(f, xin, t).u / bound_shape(f, xin, t, K2);
  const double cout = duhamel_eval(f, xout, t).u / bound_shape(f, xout, t, K2);
  rep.seam_ratio = std::max(cin / cout, cout / cin);
  return rep;
}

double fit_log_exponent(const ForcingSpec& f, std::span<const double> t_grid) {
  if (t_grid.size() < 2) throw ConfigError("fit_log_exponent: need at least two times");
  std::vector<double> X, Y;
  for (double t : t_grid) {
    const double u = duhamel_eval(f, 0.0, t).u * std::pow(t, f.gamma - 1.0);
    if (!(u > 0.0)) throw NumericError("fit_log_exponent: nonpositive u(0,t)");
    X.push_back(std::log(std::log(t)));
    Y.push_back(std::log(u));
  }
  const double n = static_cast<double>(X.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    mx += X[i] / n;
    my += Y[i] / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    sxy += (X[i] - mx) * (Y[i] - my);
    sxx += (X[i] - mx) * (X[i] - mx);
  }
  return sxy / sxx;
}

void write_bound_csv(std::ostream& os, std::span<const BoundReport> reports) {
  CsvWriter csv(os, {"gamma", "q", "K1", "logt", "x", "u", "bound", "Cemp"});
  for (const auto& rep : reports)
    for (const auto& row : rep.rows) {
      csv.cell(rep.forcing.gamma).cell(rep.forcing.q).cell(rep.forcing.K1).cell(std::log(row.t)).cell(row.x);
      csv.cell(row.u).cell(row.bound).cell(row.Cemp);
      csv.end_row();
    }
}

}  // namespace critheat::duhamel
