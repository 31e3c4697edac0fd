#include <doctest.h>

#include <cmath>
#include <random>

#include "critheat/heat_kernel.hpp"
#include "critheat/heat_tail.hpp"
#include "critheat/pde_sim.hpp"
#include "critheat/profiles.hpp"
#include "critheat/scaling_dynamics.hpp"
#include "critheat/schedule.hpp"
#include "critheat/spectrum.hpp"

using namespace critheat;

namespace {

std::mt19937_64& rng() {
  static std::mt19937_64 g(0x5eed);
  return g;
}

double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

}  // namespace

TEST_CASE("kernel is positive and symmetric") {
  for (int k = 0; k < 200; ++k) {
    const double r = uniform(0.0, 20.0), rho = uniform(0.0, 20.0), tau = std::exp(uniform(-3.0, 4.0));
    const double a = heat_kernel::kernel(r, rho, tau), b = heat_kernel::kernel(rho, r, tau);
    CHECK(a >= 0.0);
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
  }
}

TEST_CASE("free heat flow is linear and order preserving") {
  const RadialDatum f = as_datum(heat_tail::build_theta0(0.75));
  const RadialDatum g = pure_power(2.0);
  for (int k = 0; k < 10; ++k) {
    const double a = uniform(-2.0, 2.0), b = uniform(-2.0, 2.0), t = std::exp(uniform(1.0, 20.0));
    const double lhs = heat_tail::theta_origin(linear_combination(a, f, b, g), t).value;
    const double rhs = a * heat_tail::theta_origin(f, t).value + b * heat_tail::theta_origin(g, t).value;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
    const double lo = uniform(0.1, 1.0), hi = lo + uniform(0.01, 1.0);
    CHECK(heat_tail::theta_origin(pure_power(2.0, lo), t).value < heat_tail::theta_origin(pure_power(2.0, hi), t).value);
    CHECK(heat_tail::theta_origin(f, t).value > 0.0);
  }
}

TEST_CASE("self-similar datum: t theta(0,t) is constant") {
  for (int k = 0; k < 10; ++k) {
    const double t = std::exp(uniform(-5.0, 60.0));
    CHECK(heat_tail::theta_origin(pure_power(2.0), t).value_times_t == doctest::Approx(0.125).epsilon(1e-9));
  }
}

TEST_CASE("pow_diff agrees with extended precision") {
  for (int k = 0; k < 200; ++k) {
    const double a = std::exp(uniform(0.0, 30.0)), b = a * uniform(0.5, 2.0), s = uniform(0.05, 0.5);
    const long double ref = std::pow(static_cast<long double>(a), s) - std::pow(static_cast<long double>(b), s);
    CHECK(scaling::pow_diff(a, b, s) == doctest::Approx(static_cast<double>(ref)).epsilon(1e-12));
  }
}

TEST_CASE("schedules are ordered") {
  for (int k = 0; k < 50; ++k) {
    const int n1 = std::uniform_int_distribution<int>(4, 64)(rng());
    const double beta = uniform(0.55, 0.95);
    TimeSchedule s;
    try {
      s = make_schedule(n1, beta, 3);
    } catch (const ConfigError&) {
      continue;
    }
    for (int j = 1; j <= 3; ++j) {
      CHECK(s.minus(j) <= s.p(j));
      CHECK(s.p(j) <= s.plus(j));
      CHECK(s.plus(j) < s.minus(j + 1));
    }
  }
}

TEST_CASE("Sturm count is monotone") {
  const auto op = spectrum::discretize(20.0, 1000);
  std::size_t prev = 0;
  for (double x = -1.0; x < 1.0; x += 0.01) {
    const std::size_t c = spectrum::sturm_count(op, x);
    CHECK(c >= prev);
    prev = c;
  }
}

TEST_CASE("discrete energy never increases") {
  const pde::Grid g = pde::make_graded_grid(0.05, 100.0, 1.03);
  for (int k = 0; k < 6; ++k) {
    const double amp = uniform(0.5, 1.3), bump = uniform(-0.3, 0.3), width = uniform(0.5, 4.0);
    pde::SimConfig c;
    c.horizon = 3.0;
    c.rtol = 1e-6;
    c.blowup_factor = 1e3;
    const auto res = pde::run(g, c, pde::sample(g, [&](double r) {
      return amp * profiles::eval_Q(r) + bump * std::exp(-r * r / (width * width));
    }));
    CAPTURE(amp);
    CAPTURE(bump);
    CHECK(res.max_energy_increase <= 1e-12 * std::max(1.0, std::abs(res.steps.front().energy)));
  }
}

TEST_CASE("pure heat keeps nonnegative data nonnegative") {
  const pde::Grid g = pde::make_graded_grid(0.05, 100.0, 1.03);
  for (int k = 0; k < 4; ++k) {
    const double c0 = uniform(0.0, 5.0), w = uniform(0.2, 3.0);
    pde::SimConfig c;
    c.horizon = 5.0;
    c.nonlinear = false;
    const auto res = pde::run(g, c, pde::sample(g, [&](double r) { return c0 * std::exp(-r / w) * (1 + std::sin(3 * r)); }));
    for (double v : res.final.u) CHECK(v >= 0.0);
  }
}

TEST_CASE("grid convergence of the center value") {
  // |u_h - u_{h/2}| <= 4 |u_{h/2} - u_{h/4}| at t_end.
  const RadialDatum d = as_datum(heat_tail::build_theta0(0.75));
  const pde::Grid base = pde::make_graded_grid(0.04, 200.0, 1.04);
  pde::SimConfig c;
  c.horizon = 10.0;
  c.nonlinear = false;
  c.rtol = 1e-10;
  double u[3];
  for (int lev = 0; lev < 3; ++lev) {
    const pde::Grid g = lev == 0 ? base : pde::refine(base, 1 << lev);
    u[lev] = pde::run(g, c, pde::sample(g, [&](double r) { return d(r); })).final.u0;
  }
  const double d1 = std::abs(u[0] - u[1]), d2 = std::abs(u[1] - u[2]);
  CAPTURE(d1);
  CAPTURE(d2);
  CHECK(d1 <= 4.0 * d2);
}

TEST_CASE("scaling covariance") {
  // λ^{-2} u0(x/λ) evolved for λ^2 t against u0 evolved for t, λ = 2.
  const pde::Grid g = pde::make_graded_grid(0.05, 100.0, 1.03);
  const pde::Grid fine = pde::refine(g);
  pde::SimConfig c;
  c.rtol = 1e-8;
  auto evolve = [&](const pde::Grid& grid, double lam, double horizon) {
    c.horizon = horizon;
    return pde::run(grid, c, pde::sample(grid, [&](double x) { return 0.5 * profiles::eval_Q(x / lam) / (lam * lam); })).final.u0;
  };
  const double u1 = evolve(g, 1.0, 1.0), u2 = 4.0 * evolve(g, 2.0, 4.0);
  const double f1 = evolve(fine, 1.0, 1.0), f2 = 4.0 * evolve(fine, 2.0, 4.0);
  const double cov = std::abs(u2 - u1);
  const double disc = std::abs(u1 - f1) + std::abs(u2 - f2);
  CAPTURE(cov);
  CAPTURE(disc);
  CHECK(cov <= disc);
  CHECK(std::abs(f2 - f1) < std::abs(u2 - u1) + 1e-15);
}
