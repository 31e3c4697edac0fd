#include <doctest.h>

#include <cmath>

#include "critheat/errors.hpp"
#include "critheat/profiles.hpp"
#include "support/oracles.hpp"

using namespace critheat;
using namespace critheat::profiles;

namespace {

const RadialProfile& gamma_profile() {
  static const RadialProfile g = build_Gamma(1e4, 1e-10);
  return g;
}

const RadialProfile& t1_profile() {
  static const RadialProfile t = build_T1(gamma_profile(), 1e-10);
  return t;
}

}  // namespace

TEST_CASE("ground state closed forms") {
  CHECK(eval_Q(0.0) == doctest::Approx(1.0));
  CHECK(eval_Q(std::sqrt(24.0)) == doctest::Approx(0.25));
  CHECK(eval_LambdaQ(0.0) == doctest::Approx(2.0));
  CHECK(std::abs(eval_LambdaQ(std::sqrt(24.0))) < 1e-15);
  CHECK(eval_potential(3.0) == doctest::Approx(2.0 * eval_Q(3.0)));
  CHECK_THROWS_AS(eval_Q(-1.0), DomainError);
}

TEST_CASE("Lambda Q is the scaling derivative of Q") {
  for (double r : {0.3, 1.0, 4.0, 12.0, 80.0}) {
    const double h = 1e-5 * r;
    const double dQ = (eval_Q(r + h) - eval_Q(r - h)) / (2 * h);
    CHECK(eval_LambdaQ(r) == doctest::Approx(2 * eval_Q(r) + r * dQ).epsilon(1e-8));
    const double dL = (eval_LambdaQ(r + h) - eval_LambdaQ(r - h)) / (2 * h);
    CHECK(eval_LambdaQ_prime(r) == doctest::Approx(dL).epsilon(1e-6));
  }
}

TEST_CASE("Q solves the stationary equation and Lambda Q is in the kernel") {
  // Residual oracle computes Δf + 2Qf + ΛQ; subtract the ΛQ it adds.
  for (double r : {0.2, 1.0, 5.0, 20.0}) {
    const double res_Q = oracle::log_stencil_residual([](double x) { return eval_Q(x); }, r) - eval_LambdaQ(r);
    // ΔQ + Q^2 = ΔQ + 2Q·Q - Q^2.
    CHECK(std::abs(res_Q - eval_Q(r) * eval_Q(r)) < 1e-7);
    const double res_L = oracle::log_stencil_residual([](double x) { return eval_LambdaQ(x); }, r) - eval_LambdaQ(r);
    CHECK(std::abs(res_L) < 1e-7);
  }
}

TEST_CASE("cutoff") {
  CHECK(eval_cutoff(0.0) == 1.0);
  CHECK(eval_cutoff(1.0) == 1.0);
  CHECK(eval_cutoff(2.0) == 0.0);
  CHECK(eval_cutoff(7.0) == 0.0);
  double prev = 1.0;
  for (double s = 1.0; s <= 2.0; s += 0.01) {
    const double v = eval_cutoff(s);
    CHECK(v <= prev);
    prev = v;
    if (s > 1.02 && s < 1.98) {
      const double h = 1e-6;
      CHECK(eval_cutoff_prime(s) == doctest::Approx((eval_cutoff(s + h) - eval_cutoff(s - h)) / (2 * h)).epsilon(1e-5));
    }
  }
}

TEST_CASE("only dimension six is supported") {
  CHECK_NOTHROW(GroundStateKit{6});
  CHECK_THROWS_AS(GroundStateKit{5}, ConfigError);
}

TEST_CASE("Gamma: unit Wronskian, origin singularity and limit") {
  const auto& g = gamma_profile();
  for (double r : g.radii())
    if (r > 1e-2 && r < 5e3) REQUIRE(std::abs(wronskian(g, r) - 1.0) < 1e-8);
  CHECK(g(1e-3) * std::pow(1e-3, 4) == doctest::Approx(-1.0 / 8.0).epsilon(1e-5));
  CHECK(g(1e4) == doctest::Approx(kGammaLimit).epsilon(1e-6));
  CHECK_THROWS_AS(build_Gamma(50.0, 1e-10), ConfigError);
}

TEST_CASE("T1: regular at the origin, tends to 4/5") {
  const auto& t = t1_profile();
  CHECK(std::abs(t(0.0)) < 1e-10);
  CHECK(std::abs(t(1e3) - kT1Limit) < 1e-4);
  CHECK(std::abs(t(1e4) - kT1Limit) < 1e-6);
  CHECK(t(1.0) == doctest::Approx(-0.1474).epsilon(1e-3));
}

TEST_CASE("T1 solves H T1 = -Lambda Q against an independent stencil") {
  const auto& t = t1_profile();
  const double bound = 1e-6 * eval_LambdaQ(0.0);
  for (double r = 0.05; r < 5e3; r *= 1.37) {
    CAPTURE(r);
    CHECK(std::abs(oracle::log_stencil_residual([&](double x) { return t(x); }, r)) < bound);
  }
}

TEST_CASE("reversed Wronskian sign is rejected") {
  RadialProfile g = gamma_profile();
  g.scale(-1.0);
  CHECK_THROWS_AS(build_T1(g, 1e-10), ConfigError);
}
