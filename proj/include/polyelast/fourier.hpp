#pragma once

#include <ostream>
#include <vector>

#include "polyelast/algebra.hpp"
#include "polyelast/polar.hpp"

namespace polyelast {

// η(R, θ) = ½A_0(R) + Σ_{j≥1} A_j(R) cos jθ + B_j(R) sin jθ, with vector-valued
// coefficients sampled at the radial nodes of `grid`.
struct DiskField {
    PolarGrid grid;
    int Jmax = 0;
    std::vector<std::vector<Vec2>> A;  // A[j][i], j = 0..Jmax
    std::vector<std::vector<Vec2>> B;  // B[j][i]; B[0] stays zero
    // set when the angular resolution is below 4 Jmax nodes
    bool alias_risk = false;

    static DiskField zeros(const PolarGrid& grid, int Jmax);
    // η and ∂_θ η at radial node i.
    Vec2 value(std::size_t i, double theta) const;
    Vec2 d_theta(std::size_t i, double theta) const;
};

// A_j = (1/π) ∫ η cos jθ dθ, B_j = (1/π) ∫ η sin jθ dθ by the trapezoid rule.
DiskField decompose(const PolarGrid& grid, const VectorField& samples, int Jmax);
VectorField reconstruct(const DiskField& f);

struct WeightedNorms {
    double theta_norm;  // ∫_B R⁻² |∂_θ η|² dx
    double plain_norm;  // ∫_B R⁻² |η|² dx
};

// Requires the 0-mode to be absent.
WeightedNorms weighted_norms(const DiskField& f);

// Zeroes modes 1 <= j < n; the 0-mode survives only if keep_zero (or n = 0).
DiskField strip_low_modes(const DiskField& f, int n, bool keep_zero = false);

// max |det ∇(½A_0)| on the mesh; rejects fields carrying any mode j ≥ 1.
double zero_mode_det_check(const DiskField& f);

struct ParsevalCheck {
    double lhs;  // Dirichlet energy of the reconstructed field
    double rhs;  // sum of per-mode Dirichlet energies
};

ParsevalCheck parseval_gradient_check(const DiskField& f);

struct ModeRow {
    int j;
    double plain_norm;
    double theta_norm;
    double ratio;
};

std::vector<ModeRow> mode_table(const DiskField& f);
void write_mode_table_csv(std::ostream& os, const std::vector<ModeRow>& rows);

}  // namespace polyelast
