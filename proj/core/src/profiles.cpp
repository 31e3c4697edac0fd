#include "critheat/profiles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "critheat/errors.hpp"
#include "critheat/quadrature.hpp"

namespace critheat::profiles {

namespace {

void require_radius(double r, const char* what) {
  if (!(r >= 0.0)) {
    std::ostringstream msg;
    msg << what << ": radius must be nonnegative, got " << r;
    throw DomainError(msg.str());
  }
}

double bump(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }
double bump_prime(double t) { return t > 0.0 ? std::exp(-1.0 / t) / (t * t) : 0.0; }

}  // namespace

double eval_Q(double r) {
  require_radius(r, "eval_Q");
  const double u = r * r / 24.0;
  return 1.0 / ((1.0 + u) * (1.0 + u));
}

double eval_Q_prime(double r) {
  require_radius(r, "eval_Q_prime");
  const double u = r * r / 24.0;
  return -(r / 6.0) / std::pow(1.0 + u, 3);
}

double eval_LambdaQ(double r) {
  require_radius(r, "eval_LambdaQ");
  const double u = r * r / 24.0;
  return 2.0 * (1.0 - u) / std::pow(1.0 + u, 3);
}

double eval_LambdaQ_prime(double r) {
  require_radius(r, "eval_LambdaQ_prime");
  const double u = r * r / 24.0;
  return (r / 3.0) * (u - 2.0) / std::pow(1.0 + u, 4);
}

double eval_potential(double r) { return kExponent * eval_Q(r); }

double eval_cutoff(double s) {
  if (s <= 1.0) return 1.0;
  if (s >= 2.0) return 0.0;
  const double a = bump(2.0 - s);
  const double b = bump(s - 1.0);
  return a / (a + b);
}

double eval_cutoff_prime(double s) {
  if (s <= 1.0 || s >= 2.0) return 0.0;
  const double a = bump(2.0 - s);
  const double b = bump(s - 1.0);
  const double da = -bump_prime(2.0 - s);
  const double db = bump_prime(s - 1.0);
  return (da * b - a * db) / ((a + b) * (a + b));
}

GroundStateKit::GroundStateKit(int dimension) {
  if (dimension != kDimension) {
    std::ostringstream msg;
    msg << "GroundStateKit: only dimension 6 is supported, got " << dimension;
    throw ConfigError(msg.str());
  }
}

double wronskian(const RadialProfile& gamma, double r) {
  const double g = gamma(r);
  const double dg = gamma.derivative(r);
  return std::pow(r, 5) * (eval_LambdaQ(r) * dg - g * eval_LambdaQ_prime(r));
}

RadialProfile build_Gamma(double r_max, double tol, const BuildOptions& opts) {
  namespace odeint = boost::numeric::odeint;
  if (!(r_max >= 100.0)) throw ConfigError("build_Gamma: r_max must be at least 100");
  if (!(tol > 0.0 && tol < 1e-2)) throw ConfigError("build_Gamma: tol must lie in (0, 1e-2)");
  if (!(opts.r_min > 0.0 && opts.r_min < 1.0)) throw ConfigError("build_Gamma: r_min must lie in (0, 1)");

  const std::vector<double> radii = geometric_grid(opts.r_min, r_max, opts.nodes, false);

  // State (Γ, dΓ/dx) in x = log r, where Γ'' + 5Γ'/r = r^{-2}(Γ_xx + 4Γ_x).
  using State = std::array<double, 2>;
  auto rhs = [](const State& y, State& dy, double x) {
    const double r = std::exp(x);
    dy[0] = y[1];
    dy[1] = -4.0 * y[1] - 2.0 * r * r * eval_Q(r) * y[0];
  };

  // Large-r expansion Γ = c0 (1 + 288 r^{-2} + O(r^{-4})).
  const double c0 = kGammaLimit;
  State y{c0 * (1.0 + 288.0 / (r_max * r_max)), c0 * (-576.0 / (r_max * r_max))};

  std::vector<double> xs(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) xs[i] = std::log(radii[radii.size() - 1 - i]);
  xs.front() = std::log(r_max);

  std::vector<double> values(radii.size()), slopes(radii.size());
  std::size_t filled = 0;
  auto observer = [&](const State& s, double) {
    const std::size_t idx = radii.size() - 1 - filled;
    values[idx] = s[0];
    slopes[idx] = s[1] / radii[idx];
    ++filled;
  };

  try {
    auto stepper = odeint::make_dense_output(tol * 1e-10, tol, odeint::runge_kutta_dopri5<State>());
    odeint::integrate_times(stepper, rhs, y, xs.begin(), xs.end(), -1e-3, observer);
  } catch (const std::exception& ex) {
    std::ostringstream msg;
    msg << "build_Gamma: integration failed after " << filled << " of " << radii.size()
        << " nodes (r_max=" << r_max << ", tol=" << tol << "): " << ex.what();
    throw NumericError(msg.str());
  }
  if (filled != radii.size()) throw NumericError("build_Gamma: integrator stopped early");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!std::isfinite(values[i]) || !std::isfinite(slopes[i])) {
      std::ostringstream msg;
      msg << "build_Gamma: non-finite value at r=" << radii[i];
      throw NumericError(msg.str());
    }
  }

  auto node_wronskian = [&](std::size_t i) {
    const double r = radii[i];
    return std::pow(r, 5) * (eval_LambdaQ(r) * slopes[i] - values[i] * eval_LambdaQ_prime(r));
  };

  // Normalize the Wronskian to +1 at the node nearest r = 1 and check its constancy.
  const auto near1 = std::min_element(radii.begin(), radii.end(),
                                      [](double a, double b) { return std::abs(a - 1.0) < std::abs(b - 1.0); });
  const double w_ref = node_wronskian(static_cast<std::size_t>(near1 - radii.begin()));
  if (!(std::abs(w_ref) > 0.0)) throw NumericError("build_Gamma: vanishing Wronskian");
  for (auto& v : values) v /= w_ref;
  for (auto& d : slopes) d /= w_ref;
  RadialProfile gamma(radii, values, slopes);

  double worst = 0.0;
  double worst_r = 0.0;
  for (std::size_t i = 0; i < radii.size(); i += 10) {
    if (radii[i] < 0.1 || radii[i] > 0.5 * r_max) continue;
    const double r = radii[i];
    const double w = node_wronskian(i);
    if (std::abs(w - 1.0) > worst) {
      worst = std::abs(w - 1.0);
      worst_r = r;
    }
  }
  if (worst > 1e4 * tol) {
    std::ostringstream msg;
    msg << "build_Gamma: Wronskian drifts by " << worst << " at r=" << worst_r << " (tol=" << tol << ")";
    throw NumericError(msg.str());
  }
  return gamma;
}

RadialProfile build_T1(const RadialProfile& gamma, double tol) {
  const auto& radii = gamma.radii();
  if (radii.front() <= 0.0) throw ConfigError("build_T1: Γ grid must start at r > 0");
  const std::size_t n = radii.size();

  QuadOptions q;
  q.rel_tol = std::max(tol, 1e-14);
  q.max_depth = 12;

  // Seeds on [0, r_min] from the leading behaviours ΛQ ≈ 2, Γ ≈ c r^{-4}.
  const double r0 = radii.front();
  const double c = gamma.values().front() * std::pow(r0, 4);
  double a_acc = 4.0 * std::pow(r0, 6) / 6.0;
  double b_acc = c * r0 * r0;

  std::vector<double> out_r(n + 1), out_v(n + 1), out_d(n + 1);
  auto emit = [&](std::size_t i) {
    const double r = radii[i];
    const double g = gamma.values()[i];
    const double dg = gamma.slopes()[i];
    out_r[i + 1] = r;
    out_v[i + 1] = -g * a_acc + eval_LambdaQ(r) * b_acc;
    out_d[i + 1] = -dg * a_acc + eval_LambdaQ_prime(r) * b_acc;
  };
  emit(0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double lo = radii[i];
    const double hi = radii[i + 1];
    auto fa = [](double s) {
      const double lq = eval_LambdaQ(s);
      return lq * lq * std::pow(s, 5);
    };
    auto fb = [&gamma](double s) { return gamma(s) * eval_LambdaQ(s) * std::pow(s, 5); };
    a_acc += gk_integrate(fa, lo, hi, q).value;
    b_acc += gk_integrate(fb, lo, hi, q).value;
    emit(i + 1);
  }

  // T1 is even and smooth at the origin: extrapolate in r^2 from the first two nodes.
  const double r1 = out_r[1], r2 = out_r[2];
  out_r[0] = 0.0;
  out_v[0] = (r2 * r2 * out_v[1] - r1 * r1 * out_v[2]) / (r2 * r2 - r1 * r1);
  out_d[0] = 0.0;

  const double tail = out_v.back();
  if (std::abs(tail + kT1Limit) < 0.05) {
    throw ConfigError(
        "build_T1: Wronskian normalization mismatch (T1 tends to -4/5); flip the sign of Γ");
  }
  if (std::abs(tail - kT1Limit) > 0.05) {
    std::ostringstream msg;
    msg << "build_T1: T1(r_max) = " << tail << " is far from 4/5";
    throw NumericError(msg.str());
  }
  return RadialProfile(std::move(out_r), std::move(out_v), std::move(out_d));
}

RadialProfile build_T1(double r_max, double tol, const BuildOptions& opts) {
  return build_T1(build_Gamma(r_max, tol, opts), tol);
}

}  // namespace critheat::profiles
