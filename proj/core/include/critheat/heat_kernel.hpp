#pragma once

// Six-dimensional heat kernel reduced to radial data. For a radial datum d,
//   e^{τΔ}d (r) = ∫_0^∞ K_τ(r, ρ) d(ρ) ρ^5 dρ,
//   K_τ(r, ρ) = (4πτ)^{-3} 8π^3 e^{-(r-ρ)^2/4τ} g_2(rρ/2τ),
// with g_ν(a) = e^{-a} I_ν(a) / a^2 (the sphere average done in closed form).
namespace critheat::heat_kernel {

// e^{-a} I_ν(a) / a^2 for ν ∈ {2, 3}, a >= 0. g_2(0) = 1/8, g_3(0) = 0.
double scaled_bessel_g(int nu, double a);

// Kernel in self-similar variables y = r/√τ, z = ρ/√τ:
//   K_τ(r, ρ) ρ^5 dρ = kernel_z(y, z) dz · τ^0,
// kernel_z(y, z) = (1/8) e^{-(y-z)^2/4} g_2(yz/2) z^5.
double kernel_z(double y, double z);
// ∂_y of kernel_z (divide by √τ for ∂_r).
double kernel_z_dy(double y, double z);

// Physical kernel K_τ(r, ρ) and ∂_r K_τ.
double kernel(double r, double rho, double tau);
double kernel_dr(double r, double rho, double tau);

// e^{-a} (1/|S^5|)∫ e^{a ω·e} dω by Gauss-Legendre in the polar angle
// (sin^4 weight). Equals 8 g_2(a).
double sphere_average_quadrature(double a, int points = 64);

}  // namespace critheat::heat_kernel
