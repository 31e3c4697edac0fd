#include <doctest.h>

#include <cmath>
#include <sstream>

#include "critheat/errors.hpp"
#include "critheat/heat_tail.hpp"
#include "critheat/pde_sim.hpp"
#include "critheat/profiles.hpp"

using namespace critheat;
using namespace critheat::pde;

TEST_CASE("graded grid") {
  const Grid g = make_graded_grid(0.05, 100.0, 1.03);
  CHECK(g.r.front() == 0.0);
  CHECK(g.r_max() == doctest::Approx(100.0));
  CHECK(g.h_min() <= 0.05 * (1 + 1e-12));
  for (std::size_t i = 2; i < g.r.size(); ++i) CHECK((g.r[i] - g.r[i - 1]) / (g.r[i - 1] - g.r[i - 2]) <= 1.03 + 1e-12);
  const Grid f = refine(g);
  REQUIRE(f.M == 2 * g.M);
  for (std::size_t i = 0; i <= g.M; ++i) CHECK(f.r[2 * i] == doctest::Approx(g.r[i]).epsilon(1e-13));
  double vol = 0.0;
  for (double v : g.volume) vol += v;
  const double face = 0.5 * (g.r[g.M - 1] + g.r[g.M]);
  CHECK(vol == doctest::Approx(std::pow(face, 6) / 6.0).epsilon(1e-12));
  CHECK_THROWS_AS(make_graded_grid(0.05, 100.0, 1.6), ConfigError);
  CHECK_THROWS_AS(make_graded_grid(1.0, 5.0, 1.1), ConfigError);
}

TEST_CASE("discrete operators") {
  const Grid g = make_graded_grid(0.02, 50.0, 1.02);
  // Δ r^2 = 12 in six dimensions.
  const auto u = sample(g, [](double r) { return r * r; });
  const auto L = laplacian(g, u);
  for (std::size_t i = 0; i + 5 < g.M; ++i) CHECK(L[i] == doctest::Approx(12.0).epsilon(1e-6));
  const std::vector<double> zero(g.M, 0.0);
  CHECK(energy(g, zero) == 0.0);
  const auto same = implicit_solve(g, 0.0, u);
  for (std::size_t i = 0; i < g.M; ++i) CHECK(same[i] == doctest::Approx(u[i]));
  CHECK_THROWS_AS(laplacian(g, std::vector<double>(3)), ConfigError);
}

TEST_CASE("lambda from the center value") {
  CHECK(extract_lambda(4.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(extract_lambda(0.0), DomainError);
  CHECK_THROWS_AS(extract_lambda(-1.0), DomainError);
}

TEST_CASE("ground state is stationary to second order") {
  const Grid base = make_graded_grid(0.1, 200.0, 1.05);
  double prev = 0.0;
  for (int lev = 0; lev < 3; ++lev) {
    const Grid g = lev == 0 ? base : refine(base, 1 << lev);
    const auto u = sample(g, [](double r) { return profiles::eval_Q(r); });
    const auto rep = residual(g, u, u, 0.0, {1.0, 1e4, 5.0});
    double m = 0.0;
    for (std::size_t i = 0; i < g.M; ++i)
      if (g.r[i] < 50.0) m = std::max(m, rep.pointwise[i]);
    if (lev > 0) CHECK(std::log2(prev / m) >= 1.7);
    prev = m;
  }
}

TEST_CASE("pure heat flow matches quadrature") {
  const RadialDatum d = as_datum(heat_tail::build_theta0(0.75));
  const Grid g = make_graded_grid(0.02, 200.0, 1.02);
  SimConfig c;
  c.horizon = 10.0;
  c.nonlinear = false;
  c.rtol = 1e-8;
  const auto res = run(g, c, sample(g, [&](double r) { return d(r); }));
  CHECK(res.status == RunStatus::completed);
  CHECK(res.final.t == doctest::Approx(10.0));
  CHECK(res.final.u0 == doctest::Approx(heat_tail::theta_origin(d, 10.0).value).epsilon(1e-3));
  CHECK(res.max_energy_increase <= 0.0);
  for (double v : res.final.u) CHECK(v >= 0.0);
  std::ostringstream os;
  write_run_csv(os, res);
  CHECK(os.str().rfind("t,u0,lambda_est,energy,dt\n", 0) == 0);
}

TEST_CASE("blow-up and early stop") {
  const Grid g = make_graded_grid(0.05, 100.0, 1.03);
  SimConfig c;
  c.horizon = 50.0;
  c.blowup_factor = 1e3;
  const auto up = run(g, c, sample(g, [](double r) { return 1.2 * profiles::eval_Q(r); }));
  CHECK(up.status == RunStatus::blowup);
  CHECK(up.max_energy_increase <= 0.0);
  c.stop = [](double, std::span<const double> u) { return u[0] < 0.5; };
  const auto down = run(g, c, sample(g, [](double r) { return 0.8 * profiles::eval_Q(r); }));
  CHECK(down.status == RunStatus::stopped);
  CHECK(down.final.u0 < 0.5);
}

TEST_CASE("config validation") {
  SimConfig c;
  c.kappa = 0.6;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = SimConfig{};
  c.horizon = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("ansatz assembly") {
  const Grid g = make_graded_grid(0.05, 2000.0, 1.03);
  const RadialProfile T1 = profiles::build_T1(1e4, 1e-10);
  const RadialProfile zero(std::vector<double>{0.0, 1e6}, std::vector<double>{0.0, 0.0});
  const auto u = assemble_ansatz(g, 2.0, 0.0, zero, T1, AnsatzConfig{1e6, 0.25, true});
  for (std::size_t i = 0; i < g.M; ++i)
    if (g.r[i] < 20.0) CHECK(u[i] == doctest::Approx(profiles::eval_Q(g.r[i] / 2.0) / 4.0).epsilon(1e-12));
  const RadialProfile shortp(std::vector<double>{0.0, 10.0}, std::vector<double>{0.0, 0.0});
  CHECK_THROWS_AS(assemble_ansatz(g, 1.0, 0.0, shortp, T1, AnsatzConfig{}), RangeError);
  CHECK_THROWS_AS(assemble_ansatz(g, -1.0, 0.0, zero, T1, AnsatzConfig{}), DomainError);
}

TEST_CASE("the T1 corrector removes the first-order inner residual") {
  // Constant outer field b; λ moves by d log λ/dt = (5/4) b.
  const double b = -1e-2, t = 1e4, dt = 1e-3;
  const Grid g = make_graded_grid(0.02, 1000.0, 1.02);
  const RadialProfile T1 = profiles::build_T1(1e4, 1e-10);
  const RadialProfile theta(std::vector<double>{0.0, 2000.0}, std::vector<double>{b, b});
  const double lam1 = std::exp(1.25 * b * dt);
  auto inner_residual = [&](double corr) {
    const auto u0 = assemble_ansatz(g, 1.0, corr, theta, T1, AnsatzConfig{t, 0.25, true});
    const auto u1 = assemble_ansatz(g, lam1, corr, theta, T1, AnsatzConfig{t + dt, 0.25, true});
    return residual(g, u1, u0, dt, {lam1, t + dt, 5.0}).inner;
  };
  const double with_T1 = inner_residual(b);
  const double without = inner_residual(0.0);
  CAPTURE(with_T1);
  CAPTURE(without);
  CHECK(with_T1 < 0.1 * without);
}
