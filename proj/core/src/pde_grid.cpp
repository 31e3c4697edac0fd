#include "critheat/pde_grid.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "critheat/errors.hpp"

namespace critheat::pde {

namespace {

Grid build(double a, double k, std::size_t M) {
  Grid g;
  g.a = a;
  g.k = k;
  g.M = M;
  g.r.resize(M + 1);
  for (std::size_t i = 0; i <= M; ++i) g.r[i] = a * std::expm1(k * static_cast<double>(i) / static_cast<double>(M));
  g.r[0] = 0.0;
  g.volume.resize(M);
  g.coupling.resize(M);
  double lower = 0.0;
  for (std::size_t i = 0; i < M; ++i) {
    const double face = 0.5 * (g.r[i] + g.r[i + 1]);
    g.volume[i] = (std::pow(face, 6) - std::pow(lower, 6)) / 6.0;
    g.coupling[i] = std::pow(face, 5) / (g.r[i + 1] - g.r[i]);
    lower = face;
  }
  return g;
}

}  // namespace

Grid make_graded_grid(double h0, double r_max, double growth) {
  if (!(h0 > 0.0) || !(r_max > 10.0 * h0)) throw ConfigError("grid: need h0 > 0 and r_max > 10 h0");
  if (!(growth > 1.0 && growth < 1.5)) throw ConfigError("grid: growth ratio must lie in (1, 1.5)");
  const auto M = static_cast<std::size_t>(std::ceil(std::log1p(r_max * (growth - 1.0) / h0) / std::log(growth)));
  // Solve h0 (ρ^M - 1)/(ρ - 1) = r_max for ρ ∈ (1, growth].
  double lo = 1.0 + 1e-15, hi = growth;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double reach = h0 * std::expm1(static_cast<double>(M) * std::log(mid)) / (mid - 1.0);
    (reach < r_max ? lo : hi) = mid;
  }
  const double rho = 0.5 * (lo + hi);
  const double a = h0 / (rho - 1.0);
  const double k = static_cast<double>(M) * std::log(rho);
  Grid g = build(a, k, M);
  g.r.back() = r_max;
  return g;
}

Grid refine(const Grid& g, int factor) {
  if (factor < 1) throw ConfigError("refine: factor must be positive");
  Grid out = build(g.a, g.k, g.M * static_cast<std::size_t>(factor));
  out.r.back() = g.r.back();
  return out;
}

std::vector<double> laplacian(const Grid& g, std::span<const double> u) {
  if (u.size() != g.M) throw ConfigError("laplacian: sample count does not match grid");
  std::vector<double> out(g.M);
  for (std::size_t i = 0; i < g.M; ++i) {
    const double right = i + 1 < g.M ? u[i + 1] : 0.0;
    double flux = g.coupling[i] * (right - u[i]);
    if (i > 0) flux -= g.coupling[i - 1] * (u[i] - u[i - 1]);
    out[i] = flux / g.volume[i];
  }
  return out;
}

double energy(const Grid& g, std::span<const double> u) {
  if (u.size() != g.M) throw ConfigError("energy: sample count does not match grid");
  double dirichlet = 0.0, potential = 0.0;
  for (std::size_t i = 0; i < g.M; ++i) {
    const double right = i + 1 < g.M ? u[i + 1] : 0.0;
    const double d = right - u[i];
    dirichlet += 0.5 * g.coupling[i] * d * d;
    potential += g.volume[i] * std::abs(u[i]) * u[i] * u[i] / 3.0;
  }
  return std::pow(std::numbers::pi, 3) * (dirichlet - potential);
}

std::vector<double> implicit_solve(const Grid& g, double dt, std::span<const double> rhs) {
  const std::size_t n = g.M;
  if (rhs.size() != n) throw ConfigError("implicit_solve: size mismatch");
  std::vector<double> c(n), d(n), x(n);
  // Row i: -dt c_{i-1/2} x_{i-1} + (V_i + dt(c_{i-1/2} + c_{i+1/2})) x_i - dt c_{i+1/2} x_{i+1} = V_i rhs_i.
  auto diag = [&](std::size_t i) { return g.volume[i] + dt * (g.coupling[i] + (i > 0 ? g.coupling[i - 1] : 0.0)); };
  double denom = diag(0);
  c[0] = -dt * g.coupling[0] / denom;
  d[0] = g.volume[0] * rhs[0] / denom;
  for (std::size_t i = 1; i < n; ++i) {
    const double lower = -dt * g.coupling[i - 1];
    denom = diag(i) - lower * c[i - 1];
    c[i] = i + 1 < n ? -dt * g.coupling[i] / denom : 0.0;
    d[i] = (g.volume[i] * rhs[i] - lower * d[i - 1]) / denom;
  }
  x[n - 1] = d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
  return x;
}

}  // namespace critheat::pde
