#pragma once

#include "critheat/radial_profile.hpp"

// Special functions of the six-dimensional energy-critical heat equation
// u_t = Δu + |u|u: the ground state Q, its scaling generator ΛQ, the second
// radial solution Γ of the linearized equation, the bounded corrector T1 with
// H T1 = -ΛQ, and the smooth cutoff χ.
namespace critheat::profiles {

inline constexpr int kDimension = 6;
inline constexpr double kExponent = 2.0;  // (n+2)/(n-2) at n = 6
// Limit of T1 at infinity; the inner/outer matching constant.
inline constexpr double kT1Limit = 0.8;
// Γ(∞) for the pair normalized to unit Wronskian.
inline constexpr double kGammaLimit = -1.0 / 4608.0;

// Q(r) = (1 + r^2/24)^{-2}. Throws DomainError for r < 0.
double eval_Q(double r);
double eval_Q_prime(double r);
// ΛQ = (2 + r d/dr) Q = 2 (1 - r^2/24)(1 + r^2/24)^{-3}.
double eval_LambdaQ(double r);
double eval_LambdaQ_prime(double r);
// Linearized potential V = p Q^{p-1}; at n = 6 this is 2Q.
double eval_potential(double r);

// χ(s): 1 for s <= 1, 0 for s >= 2, exponential-bump blend in between.
double eval_cutoff(double s);
double eval_cutoff_prime(double s);

class GroundStateKit {
 public:
  // Only n = 6 is supported; other dimensions throw ConfigError.
  explicit GroundStateKit(int dimension = kDimension);

  int dimension() const noexcept { return kDimension; }
  double exponent() const noexcept { return kExponent; }

  double Q(double r) const { return eval_Q(r); }
  double LambdaQ(double r) const { return eval_LambdaQ(r); }
  double potential(double r) const { return eval_potential(r); }
};

struct BuildOptions {
  double r_min = 1e-3;
  std::size_t nodes = 2000;
};

// Second radial solution of Γ'' + (5/r)Γ' + 2QΓ = 0, integrated inward from
// r_max out of its large-r expansion and scaled to unit Wronskian with ΛQ.
// The profile carries exact node slopes. Requires r_max >= 100.
RadialProfile build_Gamma(double r_max, double tol, const BuildOptions& opts = {});

// r^5 (ΛQ Γ' - Γ (ΛQ)') evaluated from a Γ profile.
double wronskian(const RadialProfile& gamma, double r);

// Bounded solution of H T1 + ΛQ = 0 by variation of parameters,
//   T1 = -Γ ∫_0^r ΛQ^2 s^5 ds + ΛQ ∫_0^r Γ ΛQ s^5 ds,
// sampled on Γ's grid plus the origin. Throws ConfigError when Γ carries the
// opposite Wronskian sign (T1 would tend to -4/5).
RadialProfile build_T1(const RadialProfile& gamma, double tol);
RadialProfile build_T1(double r_max, double tol, const BuildOptions& opts = {});

}  // namespace critheat::profiles
