#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "polyelast/algebra.hpp"
#include "polyelast/numerics.hpp"

namespace polyelast {

// Tensor mesh on the unit disk: composite Gauss-Legendre radii times
// equispaced angles. Node (i, j) is stored at i * n_theta + j.
struct PolarGrid {
    RadialQuadrature radial;
    int n_theta = 0;

    PolarGrid() = default;
    PolarGrid(int radial_cells, int radial_order, int n_theta);

    std::size_t n_radial() const { return radial.size(); }
    std::size_t size() const { return radial.size() * static_cast<std::size_t>(n_theta); }
    std::size_t index(std::size_t i, int j) const { return i * static_cast<std::size_t>(n_theta) + j; }
    double R(std::size_t i) const { return radial.nodes()[i]; }
    double theta(int j) const;
    // Area weight of node (i, j) for ∫ · dx over the disk.
    double area_weight(std::size_t i) const;
};

using VectorField = std::vector<Vec2>;
using MatrixField = std::vector<Mat2>;
using ScalarField = std::vector<double>;

VectorField sample_map(const PolarGrid& grid, const std::function<Vec2(double R, double theta)>& fn);
MatrixField sample_matrix_field(const PolarGrid& grid, const std::function<Mat2(double R, double theta)>& fn);

// ∂_R and ∂_θ of scalar samples.
ScalarField d_radial(const PolarGrid& grid, const ScalarField& f);
ScalarField d_theta(const PolarGrid& grid, const ScalarField& f);

// Cartesian gradient of a scalar field: f_R e_R + (1/R) f_θ e_θ.
VectorField gradient(const PolarGrid& grid, const ScalarField& f);
// Cartesian gradient of a map u: u_R ⊗ e_R + (1/R) u_θ ⊗ e_θ.
MatrixField gradient(const PolarGrid& grid, const VectorField& u);
// ∂_θ of a matrix field, componentwise.
MatrixField d_theta(const PolarGrid& grid, const MatrixField& m);

double integrate(const PolarGrid& grid, const ScalarField& density);

}  // namespace polyelast
