#include <doctest.h>

#include <cmath>
#include <sstream>

#include "critheat/errors.hpp"
#include "critheat/heat_tail.hpp"
#include "critheat/scaling_dynamics.hpp"
#include "critheat/schedule.hpp"

using namespace critheat;
using namespace critheat::scaling;

TEST_CASE("schedule construction") {
  CHECK_THROWS_AS(make_schedule(3, 0.75, 5), ConfigError);
  CHECK_THROWS_AS(make_schedule(16, 1.0, 5), ConfigError);
  CHECK_THROWS_AS(make_schedule(16, 0.75, 9), ConfigError);
  const auto s = make_schedule(16, 0.75, 5);
  CHECK(s.p(1) == doctest::Approx(std::pow(16.0, 4.0)));
  CHECK(s.p(2) == doctest::Approx(std::pow(16.0, 8.0)));
  CHECK(s.log_R(1) == doctest::Approx(0.5 * s.p(1)));
  CHECK(s.log_tI == s.minus(1));
  for (int j = 1; j <= 5; ++j) {
    CHECK(s.minus_off(j) < 0.0);
    CHECK(s.plus_off(j) > 0.0);
  }
  std::ostringstream os;
  write_schedule_csv(os, s);
  CHECK(!os.str().empty());
}

TEST_CASE("pow_diff keeps precision across narrow windows") {
  CHECK(pow_diff(8.0, 2.0, 0.5) == doctest::Approx(std::sqrt(8.0) - std::sqrt(2.0)));
  const LogTime a{1e20, 3.0}, b{1e20, -5.0};
  // (p+3)^s - (p-5)^s ≈ 8 s p^{s-1}.
  const double s = 0.25;
  CHECK(pow_diff(a, b, s) == doctest::Approx(8.0 * s * std::pow(1e20, s - 1.0)).epsilon(1e-9));
  CHECK_THROWS_AS(pow_diff(-1.0, 2.0, 0.5), DomainError);
}

TEST_CASE("unperturbed trajectory: closed-form increments") {
  const auto s = make_schedule(16, 0.75, 5);
  RateConfig cfg;
  const auto traj = integrate_piecewise(s, cfg);
  const double q = heat_tail::q1(0.75);
  CHECK(traj.at_minus[0] == doctest::Approx(q * std::pow(s.minus(1), 0.25)));
  for (int j = 1; j <= 5; ++j) {
    const auto idx = static_cast<std::size_t>(j - 1);
    const double sign = j % 2 ? -1.0 : 1.0;
    const double expect = traj.at_plus[idx] + sign * q * pow_diff(edge_minus(s, j + 1), edge_plus(s, j), 0.25);
    if (idx + 1 < traj.at_minus.size()) CHECK(traj.at_minus[idx + 1] == doctest::Approx(expect).epsilon(1e-12));
  }
  CHECK(all_pass(check_window_bounds(traj, s, cfg)));
  CHECK(all_pass(check_telescoping(traj, s, cfg)));
  CHECK(all_pass(check_trajectory(traj, s, cfg)));
}

TEST_CASE("perturbed trajectories pass every check") {
  const auto s = make_schedule(16, 0.75, 5);
  for (DKind d : {DKind::envelope_plus, DKind::envelope_minus, DKind::random}) {
    RateConfig cfg;
    cfg.d = d;
    cfg.seed = 3;
    const auto traj = integrate_piecewise(s, cfg);
    CHECK(all_pass(check_window_bounds(traj, s, cfg)));
    CHECK(all_pass(check_telescoping(traj, s, cfg)));
    CHECK(all_pass(check_trajectory(traj, s, cfg)));
  }
}

TEST_CASE("perturbation field respects its envelope") {
  RateConfig cfg;
  cfg.d = DKind::random;
  cfg.seed = 11;
  const PerturbationField f(cfg);
  for (double tau = 10.0; tau < 1e6; tau *= 1.7) {
    CHECK(std::abs(f.xi(tau)) <= 1.0);
    CHECK(std::abs(f.D_times_t(tau)) <= cfg.C1 * std::pow(tau, -cfg.beta_prime) * (1 + 1e-15));
  }
  cfg.beta_prime = 1.0;
  CHECK_THROWS_AS(PerturbationField{cfg}, ConfigError);
}

TEST_CASE("gap factors beyond the envelope break the contract") {
  const auto s = make_schedule(16, 0.75, 3);
  RateConfig cfg;
  cfg.gap = GapKind::custom;
  cfg.custom_gap = {0.5, 1.5, 0.0};
  CHECK_THROWS_AS(integrate_piecewise(s, cfg), ContractViolation);
  cfg.custom_gap = {0.5};
  CHECK_THROWS_AS(integrate_piecewise(s, cfg), ConfigError);
}

TEST_CASE("threshold search") {
  RateConfig zero, plus, minus;
  plus.d = DKind::envelope_plus;
  minus.d = DKind::envelope_minus;
  const RateConfig cfgs[] = {zero, plus, minus};
  const auto n = search_nbar(0.75, 5, cfgs, 32);
  REQUIRE(n.has_value());
  CHECK(*n <= 16);
}

TEST_CASE("outer field and modulation forcing") {
  const SyntheticOuterField W{1.2};
  const double t = 1e4;
  CHECK(W(0.0, t) == doctest::Approx(1.0 / (t * std::pow(std::log(t), 1.2))));
  CHECK(W(1e3, t) == doctest::Approx(1e-6 * std::pow(std::log(1e6), -1.2)));
  CHECK(W.seam_mismatch(t) < 1e-14);

  const auto pairs = spectrum::eig(spectrum::discretize(20.0, 2000), 2);
  const double C1 = std::abs(modulation_rhs(W, 1.0, 1e4, pairs[1], 20.0)) * 1e4 * std::pow(std::log(1e4), 1.2);
  const double C2 = std::abs(modulation_rhs(W, 1.0, 1e5, pairs[1], 20.0)) * 1e5 * std::pow(std::log(1e5), 1.2);
  CHECK(C1 > 0.0);
  CHECK(C2 / C1 == doctest::Approx(1.0).epsilon(1e-8));
  CHECK_THROWS_AS(modulation_rhs(W, 10.0, 100.0, pairs[1], 20.0), DomainError);
}

TEST_CASE("matched integration recovers the closed-form first window") {
  const double A1 = 0.125, beta = 0.75;
  BTable table;
  for (double tau = 10.0; tau <= 200.0; tau += 0.5) {
    table.tau.push_back(tau);
    table.bt.push_back(-A1 * std::pow(tau, -beta));
  }
  const auto traj = integrate_matched(table, 12.0, 150.0, 0.0);
  REQUIRE(!traj.samples.empty());
  for (const auto& smp : traj.samples) {
    const double tau = smp.tau.value();
    const double closed = -1.25 * A1 * (std::pow(tau, 1 - beta) - std::pow(12.0, 1 - beta)) / (1 - beta);
    CHECK(smp.loglambda == doctest::Approx(closed).epsilon(1e-8));
  }
  CHECK_THROWS_AS(integrate_matched(table, 5.0, 150.0, 0.0), RangeError);
}

TEST_CASE("rate envelope follows from the b bound") {
  // |b| <= 2A1/(t (log t)^β) gives |d log λ / dτ| <= (5/2) A1 τ^{-β}.
  const double A1 = 0.125, beta = 0.75;
  BTable table;
  for (double tau = 10.0; tau <= 100.0; tau += 0.25) {
    table.tau.push_back(tau);
    table.bt.push_back(2.0 * A1 * std::pow(tau, -beta) * std::sin(tau));
  }
  const auto traj = integrate_matched(table, 10.0, 100.0, 0.0);
  for (std::size_t k = 1; k < traj.samples.size(); ++k) {
    const double t0 = traj.samples[k - 1].tau.value(), t1 = traj.samples[k].tau.value();
    const double rate = std::abs(traj.samples[k].loglambda - traj.samples[k - 1].loglambda) / (t1 - t0);
    CHECK(rate <= 2.5 * A1 * std::pow(t0, -beta) * (1 + 1e-9));
  }
}
