#include <doctest.h>

#include <cmath>
#include <sstream>

#include "critheat/duhamel.hpp"
#include "critheat/errors.hpp"
#include "support/oracles.hpp"

using namespace critheat;
using namespace critheat::duhamel;

TEST_CASE("forcing validation") {
  ForcingSpec f;
  CHECK_NOTHROW(f.validate());
  f.gamma = 3.0;
  CHECK_THROWS_AS(f.validate(), ConfigError);
  f.gamma = 1.0;
  f.K1 = 0.0;
  CHECK_THROWS_AS(f.validate(), ConfigError);
  f.K1 = 1.0;
  f.t0 = 2.0;
  CHECK_THROWS_AS(f.validate(), ConfigError);
  f.t0 = 10.0;
  CHECK_THROWS_AS(duhamel_eval(f, 0.0, 5.0), DomainError);
  CHECK_THROWS_AS(duhamel_eval(f, -1.0, 50.0), DomainError);
}

TEST_CASE("forcing values") {
  ForcingSpec f;
  f.gamma = 2.0;
  f.q = 1.0;
  f.amplitude = 3.0;
  CHECK(f.value(1.0, 100.0) == doctest::Approx(3.0 * 1e-4 * std::log(100.0)));
  CHECK(f.value(20.0, 100.0) == 0.0);
  f.region = Region::outer;
  CHECK(f.value(1.0, 100.0) == 0.0);
  CHECK(f.value(20.0, 100.0) == doctest::Approx(3.0 * std::pow(20.0, -4) * std::log(400.0)));
}

TEST_CASE("inner forcing against the chi-square oracle") {
  struct Case {
    double gamma, q, x;
  };
  for (const Case c : {Case{1, 0, 0}, Case{2, 0, 0}, Case{1, 1, 0}, Case{2, -1, 7.0}, Case{1, 0, 30.0}}) {
    CAPTURE(c.gamma);
    CAPTURE(c.q);
    CAPTURE(c.x);
    ForcingSpec f;
    f.gamma = c.gamma;
    f.q = c.q;
    const double t = 200.0;
    const double ref = oracle::duhamel_inner(c.gamma, c.q, 1.0, 10.0, c.x, t);
    const auto v = duhamel_eval(f, c.x, t);
    CHECK(v.u == doctest::Approx(ref).epsilon(1e-6));
  }
}

TEST_CASE("bound constants are insensitive to t0 and t") {
  ForcingSpec f;
  const double ts[] = {200, 632.45553203367592, 2000};
  const double xs[] = {0, 0.5, 2};
  const auto rep = bound_report(f, ts, xs);
  CHECK(rep.rows.size() == 18);
  CHECK(rep.worst_spread < 2.0);
  CHECK(rep.seam_ratio < 2.0);
  std::ostringstream os;
  write_bound_csv(os, std::span(&rep, 1));
  CHECK(os.str().rfind("gamma,q,K1,logt,x,u,bound,Cemp\n", 0) == 0);

  const double early[] = {30, 200};
  CHECK_THROWS_AS(bound_report(f, early, xs), ConfigError);
}

TEST_CASE("log exponent of the inner bound") {
  ForcingSpec f;
  f.q = 1.0;
  const double ts[] = {1e4, 1e6, 1e8, 1e10, 1e12};
  CHECK(fit_log_exponent(f, ts) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("bound shape") {
  ForcingSpec f;
  f.gamma = 2.0;
  f.q = -1.0;
  const double t = 1e4;
  CHECK(bound_shape(f, 0.0, t) == doctest::Approx(1e-4 / std::log(t)));
  CHECK(bound_shape(f, 1e3, t) == doctest::Approx(1e-6 / std::log(1e6)));
}
