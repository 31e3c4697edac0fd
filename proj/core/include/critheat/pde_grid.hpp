#pragma once

#include <cstddef>
#include <span>
#include <vector>

// Graded radial grid and the r^5-weighted finite-volume operators on it.
namespace critheat::pde {

// Nodes r_i = a (ρ^i - 1), i = 0..M, ρ = e^{k/M}; r_M = r_max carries u = 0.
// Unknowns are u_0..u_{M-1}. Refining by 2 keeps a and k, so grids nest.
struct Grid {
  double a = 0.0;
  double k = 0.0;
  std::size_t M = 0;
  std::vector<double> r;         // M + 1 nodes
  std::vector<double> volume;    // dual-cell r^5 volumes, M entries
  std::vector<double> coupling;  // r_f^5 / (r_{i+1} - r_i) on face i+1/2, M entries

  std::size_t unknowns() const noexcept { return M; }
  double r_max() const { return r.back(); }
  double h_min() const { return r[1] - r[0]; }
};

// Smallest grid with first spacing h0, ratio <= growth, ending exactly at r_max.
Grid make_graded_grid(double h0, double r_max, double growth);
Grid refine(const Grid& g, int factor = 2);

// Δ_h u at the unknown nodes (u has M entries; the boundary value is 0).
std::vector<double> laplacian(const Grid& g, std::span<const double> u);

// E = π^3 [ Σ_f c_f (Δu)^2 / 2 - Σ V_i |u_i|^3 / 3 ].
double energy(const Grid& g, std::span<const double> u);

// Solves (V + dt K) x = V rhs.
std::vector<double> implicit_solve(const Grid& g, double dt, std::span<const double> rhs);

}  // namespace critheat::pde
