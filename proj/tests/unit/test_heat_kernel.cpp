#include <doctest.h>

#include <cmath>

#include "critheat/errors.hpp"
#include "critheat/heat_kernel.hpp"
#include "critheat/quadrature.hpp"
#include "support/oracles.hpp"

using namespace critheat;
using namespace critheat::heat_kernel;

TEST_CASE("scaled Bessel values at the origin") {
  CHECK(scaled_bessel_g(2, 0.0) == doctest::Approx(0.125));
  CHECK(scaled_bessel_g(3, 0.0) == 0.0);
  CHECK_THROWS(scaled_bessel_g(4, 1.0));
  CHECK_THROWS(scaled_bessel_g(2, -1.0));
}

TEST_CASE("branch switches are continuous") {
  for (int nu : {2, 3})
    for (double a : {1.0, 500.0}) {
      const double lo = scaled_bessel_g(nu, a * (1 - 1e-12));
      const double hi = scaled_bessel_g(nu, a * (1 + 1e-12));
      CHECK(std::abs(hi / lo - 1.0) < 1e-10);
    }
}

TEST_CASE("closed-form sphere average against angular quadrature") {
  for (double a : {0.0, 1e-3, 0.3, 0.999, 1.001, 5.0, 17.0, 40.0}) {
    CAPTURE(a);
    const double ref = oracle::sphere_average(a);
    CHECK(8.0 * scaled_bessel_g(2, a) == doctest::Approx(ref).epsilon(1e-13));
    CHECK(sphere_average_quadrature(a) == doctest::Approx(ref).epsilon(1e-12));
  }
}

TEST_CASE("the kernel preserves constants") {
  for (double y : {0.0, 0.5, 3.0, 10.0}) {
    const double lo = std::max(0.0, y - 30.0);
    const auto r = gk_integrate([y](double z) { return kernel_z(y, z); }, lo, y + 30.0, QuadOptions{1e-13, 0, 15});
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-11));
  }
}

TEST_CASE("kernel symmetry and derivative") {
  const double tau = 2.5;
  for (double r : {0.1, 1.0, 4.0})
    for (double rho : {0.2, 2.0, 7.0}) {
      CHECK(kernel(r, rho, tau) == doctest::Approx(kernel(rho, r, tau)).epsilon(1e-13));
      const double h = 1e-6;
      const double fd = (kernel(r + h, rho, tau) - kernel(r - h, rho, tau)) / (2 * h);
      CHECK(kernel_dr(r, rho, tau) == doctest::Approx(fd).epsilon(1e-6));
      const double y = r / std::sqrt(tau), z = rho / std::sqrt(tau);
      const double fdz = (kernel_z(y + h, z) - kernel_z(y - h, z)) / (2 * h);
      CHECK(kernel_z_dy(y, z) == doctest::Approx(fdz).epsilon(1e-6));
    }
}
