#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

// Reference computations that share no code with the library.
namespace oracle {

inline constexpr double kPi = 3.14159265358979323846;

// Δf + 2Q f + g for a radial f on R^6, with f'' + 5f'/r written in s = log r as
// r^{-2}(f_ss + 4 f_s) and both derivatives from five-point centered stencils.
inline double log_stencil_residual(const std::function<double(double)>& f, double r, double ds = 1e-2) {
  double v[5];
  for (int k = -2; k <= 2; ++k) v[k + 2] = f(r * std::exp(k * ds));
  const double fs = (v[0] - 8 * v[1] + 8 * v[3] - v[4]) / (12 * ds);
  const double fss = (-v[0] + 16 * v[1] - 30 * v[2] + 16 * v[3] - v[4]) / (12 * ds * ds);
  const double u = r * r / 24.0;
  const double Q = 1.0 / ((1 + u) * (1 + u));
  const double LQ = 2.0 * (1 - u) / ((1 + u) * (1 + u) * (1 + u));
  return (fss + 4 * fs) / (r * r) + 2 * Q * v[2] + LQ;
}

// e^{-a} times the average of e^{a cos θ} over S^5 (weight sin^4 θ), by
// Gauss-Legendre in θ.
inline double sphere_average(double a) {
  auto num = [a](double th) { return std::exp(a * (std::cos(th) - 1.0)) * std::pow(std::sin(th), 4); };
  auto den = [](double th) { return std::pow(std::sin(th), 4); };
  using GL = boost::math::quadrature::gauss<double, 64>;
  double n = 0.0, d = 0.0;
  const int panels = 8;
  for (int p = 0; p < panels; ++p) {
    const double lo = kPi * p / panels, hi = kPi * (p + 1) / panels;
    n += GL::integrate(num, lo, hi);
    d += GL::integrate(den, lo, hi);
  }
  return n / d;
}

struct MonteCarlo {
  double mean = 0.0;
  double stderr_ = 0.0;
};

// E|Z|^{-2} for Z ~ N(0, 2 I_6), which is (4π)^{-3} ∫ e^{-|z|^2/4} |z|^{-2} dz.
inline MonteCarlo gaussian_inverse_square_moment(std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, std::sqrt(2.0));
  double s = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    double r2 = 0.0;
    for (int k = 0; k < 6; ++k) {
      const double z = n(rng);
      r2 += z * z;
    }
    const double v = 1.0 / r2;
    s += v;
    s2 += v * v;
  }
  const double m = s / static_cast<double>(samples);
  const double var = s2 / static_cast<double>(samples) - m * m;
  return {m, std::sqrt(var / static_cast<double>(samples))};
}

// Solution at |x| = x, time t of u_t = Δu + A s^{-γ}(log s)^q 1_{|y| < K1√s},
// u(t0) = 0. The heat semigroup applied to a ball indicator is a (non-central)
// chi-square probability: P(|x + √(2τ) N|^2 < K1^2 s).
inline double duhamel_inner(double gamma, double q, double K1, double t0, double x, double t, double A = 1.0) {
  auto integrand = [&](double s) {
    const double tau = t - s;
    const double bound = K1 * K1 * s / (2.0 * tau);
    double p;
    if (x == 0.0) {
      p = boost::math::cdf(boost::math::chi_squared_distribution<double>(6.0), bound);
    } else {
      p = boost::math::cdf(boost::math::non_central_chi_squared_distribution<double>(6.0, x * x / (2.0 * tau)), bound);
    }
    return A * std::pow(s, -gamma) * std::pow(std::log(s), q) * p;
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  // Near s = t the probability tends to 1 (x inside the ball) or 0 smoothly.
  const double mid = 0.5 * (t0 + t);
  return GK::integrate(integrand, t0, mid, 20, 1e-12) + GK::integrate(integrand, mid, t, 20, 1e-12);
}

}  // namespace oracle
