#pragma once

#include <functional>

#include "polyelast/polar.hpp"
#include "polyelast/radial_bvp.hpp"
#include "polyelast/rho.hpp"

namespace polyelast {

struct EnergyReport {
    double total = 0.0;
    double dirichlet_part = 0.0;
    double rho_part = 0.0;
    double quad_error_estimate = 0.0;
};

// How r is rebuilt between grid nodes before quadrature.
enum class Reconstruction {
    Hermite,         // cubic through (r_i, ṙ_i); below the first node, the power law it starts on
    PiecewiseLinear  // nodal values only, with r(0) = 0; the direct minimizer's discretization
};

// Gauss points per cell for each reconstruction.
inline constexpr int kHermiteGaussPoints = 6;
inline constexpr int kLinearGaussPoints = 4;

// 2π ∫₀¹ [½(ṙ² + M²r²/R²) + ρ(M r ṙ / R)] R dR.
EnergyReport radial_energy(const RadialProfile& p, const RhoSpec& rho,
                           Reconstruction mode = Reconstruction::Hermite);

// ∫_B ½|∇u|² + ρ(det ∇u) for a map sampled on a polar mesh.
EnergyReport full_energy(const PolarGrid& grid, const VectorField& u, const RhoSpec& rho);

// u(R, θ) = r(R) e_R(Mθ) on the mesh for a given radial function.
VectorField embed_radial(const PolarGrid& grid, int M, const std::function<double(double)>& r);
// Same for a solved profile, evaluating r between nodes with the ODE flow.
VectorField embed_radial_solution(const PolarGrid& grid, const RadialProfile& p, const RhoSpec& rho);

}  // namespace polyelast
