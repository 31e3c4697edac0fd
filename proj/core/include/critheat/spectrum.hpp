#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

#include "critheat/radial_profile.hpp"

// Radial Dirichlet eigenvalue problem -H ψ = μ ψ on the ball B_R in six
// dimensions, H = Δ + 2Q, discretized by r^5-weighted finite volumes.
namespace critheat::spectrum {

// Finite-volume form of -H on nodes r_i = i h (i = 0..N-1, h = R/N) with
// ψ(R) = 0. Cell volumes V_i = ∫ r^5 dr over the dual cell; face couplings
// c = r_f^5 / h. The symmetric matrix S = V^{-1/2} (K - 2QV) V^{-1/2} is stored
// as (diag, offdiag); eigenvectors of S map back via ψ = V^{-1/2} w.
struct DirichletOperator {
  double R = 0.0;
  std::size_t N = 0;
  double h = 0.0;
  std::vector<double> nodes;
  std::vector<double> potential;  // V(r_i) = 2Q(r_i)
  std::vector<double> weights;    // r^5-measure cell volumes
  std::vector<double> face_coupling;  // c_{i+1/2}, i = 0..N-1 (last face touches the boundary node)
  std::vector<double> diag;
  std::vector<double> offdiag;

  // (-H u) at the nodes for samples u_i = u(r_i), with u(R) = 0 imposed.
  std::vector<double> apply(std::span<const double> u) const;
  // Discrete r^5-weighted inner product Σ V_i a_i b_i.
  double inner(std::span<const double> a, std::span<const double> b) const;
};

// Requires R >= 5, N >= 500 and at least 20 nodes per unit radius.
DirichletOperator discretize(double R, std::size_t N);

struct EigenPair {
  double mu = 0.0;
  RadialProfile psi;          // on [0, R], ψ(0) = 1, ψ(R) = 0
  std::vector<double> samples;  // ψ at the operator nodes
};

// Lowest k eigenpairs (k <= 10) by Sturm bisection and inverse iteration.
std::vector<EigenPair> eig(const DirichletOperator& op, int k = 5);

// Number of eigenvalues of the symmetric tridiagonal S strictly below x.
std::size_t sturm_count(const DirichletOperator& op, double x);

struct ScalingRow {
  double R = 0.0;
  std::size_t N = 0;
  double mu1 = 0.0;
  double mu2R4 = 0.0;
  double mu3R3 = 0.0;
  double psi1_decay_fit = 0.0;  // slope of log|ψ1| against r on [5, R/2]
  double psi2_decay_fit = 0.0;  // slope of log|ψ2| against log r on [R/8, R/4]
  double psi2_weighted_sup = 0.0;  // sup over (0, R/2) of |ψ2| (1+r)^4
  double psi1_envelope_max = 0.0;  // sup over (5, R/2) of log|ψ1| + r sqrt(-μ1)
  std::vector<double> mu;  // first five eigenvalues
};

// One row per radius; N = N_per_R * R nodes. Radii must be ascending and >= 10.
std::vector<ScalingRow> scaling_report(std::span<const double> radii, std::size_t nodes_per_unit);

void write_scaling_csv(std::ostream& os, std::span<const ScalingRow> rows);

// Richardson-extrapolated limit of μ1 (the negative eigenvalue -e0 on all of R^6)
// from a sequence of radii, reported with an error bar.
struct E0Estimate {
  double e0 = 0.0;
  double error = 0.0;
};
E0Estimate estimate_e0(std::span<const double> radii, std::size_t nodes_per_unit);

}  // namespace critheat::spectrum
