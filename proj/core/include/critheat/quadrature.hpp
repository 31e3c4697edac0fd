#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <span>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "critheat/errors.hpp"

namespace critheat {

struct QuadOptions {
  double rel_tol = 1e-10;
  // Panels whose estimated error is below abs_tol are accepted regardless of rel_tol.
  double abs_tol = 0.0;
  unsigned max_depth = 15;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;  // integral of |f|, the scale rel_tol is measured against

  QuadResult& operator+=(const QuadResult& other) {
    value += other.value;
    error += other.error;
    l1 += other.l1;
    return *this;
  }
};

// Adaptive 15-point Gauss-Kronrod on [a, b]. Bisection order is fixed, so the
// result is bitwise reproducible.
template <class F>
QuadResult gk_integrate(F&& f, double a, double b, const QuadOptions& opts = {}) {
  QuadResult out;
  if (!(b > a)) return out;
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  double err = 0.0;
  double l1 = 0.0;
  out.value = GK::integrate(f, a, b, opts.max_depth, opts.rel_tol, &err, &l1);
  out.error = err;
  out.l1 = l1;
  if (!std::isfinite(out.value)) {
    std::ostringstream msg;
    msg << "quadrature produced a non-finite value on panel [" << a << ", " << b << "]";
    throw NumericError(msg.str());
  }
  return out;
}

// Sums adaptive panels between consecutive breakpoints (which must be ascending).
// Throws NumericError with the offending panel when a panel error exceeds 100x
// the tolerance measured against the integral of |f| over all panels.
template <class F>
QuadResult gk_integrate_panels(F&& f, std::span<const double> breaks, const QuadOptions& opts = {}) {
  QuadResult total;
  std::vector<std::pair<std::size_t, QuadResult>> panels;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i];
    const double b = breaks[i + 1];
    if (!(b > a)) continue;
    panels.emplace_back(i, gk_integrate(f, a, b, opts));
    total += panels.back().second;
  }
  const double allowed = std::max(opts.rel_tol * total.l1, opts.abs_tol);
  for (const auto& [i, panel] : panels) {
    if (panel.error > 100.0 * allowed && panel.error > 1e-300) {
      std::ostringstream msg;
      msg << "quadrature did not converge: panel " << i << " [" << breaks[i] << ", " << breaks[i + 1]
          << "] value=" << panel.value << " error=" << panel.error << " allowed=" << allowed;
      throw NumericError(msg.str());
    }
  }
  return total;
}

// Sorts, clips to [lo, hi] and de-duplicates a breakpoint list, always keeping lo and hi.
inline std::vector<double> clip_breaks(std::vector<double> points, double lo, double hi) {
  std::vector<double> out;
  out.reserve(points.size() + 2);
  out.push_back(lo);
  for (double p : points)
    if (p > lo && p < hi) out.push_back(p);
  out.push_back(hi);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(std::size_t n) {
  std::vector<double> x(n), w(n);
  const double pi = 3.14159265358979323846;
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (std::size_t k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / static_cast<double>(k);
      }
      dp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return {x, w};
}

}  // namespace critheat
