#include "critheat/heat_kernel.hpp"

#include <cmath>
#include <numbers>

#include "critheat/errors.hpp"
#include "critheat/quadrature.hpp"

namespace critheat::heat_kernel {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Σ_k (a/2)^{2k+ν} / (k! (k+ν)!) divided by a^2, times e^{-a}.
double series_g(int nu, double a) {
  const double half = 0.5 * a;
  double term = std::pow(half, nu - 2) / (4.0 * factorial(nu));  // (a/2)^ν / a^2 / ν!
  double sum = term;
  for (int k = 1; k < 30; ++k) {
    term *= half * half / (k * static_cast<double>(k + nu));
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return std::exp(-a) * sum;
}

// Hankel expansion e^{-a} I_ν(a) ~ (2πa)^{-1/2} Σ (-1)^k a_k(ν) / a^k.
double asymptotic_g(int nu, double a) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 12; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -(mu - odd * odd) / (k * 8.0 * a);
    sum += term;
    if (std::abs(term) < 1e-17) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * a) / (a * a);
}

}  // namespace

double scaled_bessel_g(int nu, double a) {
  if (nu != 2 && nu != 3) throw ConfigError("scaled_bessel_g: order must be 2 or 3");
  if (!(a >= 0.0)) throw DomainError("scaled_bessel_g: argument must be nonnegative");
  if (a < 1.0) return series_g(nu, a);
  if (a <= 500.0) return std::exp(-a) * std::cyl_bessel_i(static_cast<double>(nu), a) / (a * a);
  return asymptotic_g(nu, a);
}

double kernel_z(double y, double z) {
  const double d = y - z;
  return 0.125 * std::exp(-0.25 * d * d) * scaled_bessel_g(2, 0.5 * y * z) * std::pow(z, 5);
}

double kernel_z_dy(double y, double z) {
  const double d = y - z;
  const double a = 0.5 * y * z;
  return 0.125 * std::exp(-0.25 * d * d) * (-0.5 * y * scaled_bessel_g(2, a) + 0.5 * z * scaled_bessel_g(3, a)) *
         std::pow(z, 5);
}

double kernel(double r, double rho, double tau) {
  if (!(tau > 0.0)) throw DomainError("kernel: τ must be positive");
  const double pref = 8.0 * std::pow(std::numbers::pi, 3) / std::pow(4.0 * std::numbers::pi * tau, 3);
  const double d = r - rho;
  return pref * std::exp(-d * d / (4.0 * tau)) * scaled_bessel_g(2, r * rho / (2.0 * tau));
}

double kernel_dr(double r, double rho, double tau) {
  if (!(tau > 0.0)) throw DomainError("kernel_dr: τ must be positive");
  const double pref = 8.0 * std::pow(std::numbers::pi, 3) / std::pow(4.0 * std::numbers::pi * tau, 3);
  const double d = r - rho;
  const double a = r * rho / (2.0 * tau);
  return pref * std::exp(-d * d / (4.0 * tau)) *
         (-r / (2.0 * tau) * scaled_bessel_g(2, a) + rho / (2.0 * tau) * scaled_bessel_g(3, a));
}

double sphere_average_quadrature(double a, int points) {
  const auto [x, w] = gauss_legendre(static_cast<std::size_t>(points));
  // ∫_0^π e^{a cos φ} sin^4 φ dφ / ∫_0^π sin^4 φ dφ, with cos φ = -1 + ... mapped from [-1, 1].
  double num = 0.0;
  const double pi = std::numbers::pi;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double phi = 0.5 * pi * (x[i] + 1.0);
    const double s = std::sin(phi);
    num += w[i] * std::exp(a * std::cos(phi) - a) * s * s * s * s;
  }
  num *= 0.5 * pi;
  return num / (3.0 * pi / 8.0);
}

}  // namespace critheat::heat_kernel
