#include "polyelast/polar.hpp"

#include <numbers>
#include <stdexcept>

namespace polyelast {

PolarGrid::PolarGrid(int radial_cells, int radial_order, int n_theta_)
    : radial(radial_cells, radial_order, 0.0, 1.0), n_theta(n_theta_) {
    if (n_theta_ < 4) throw std::invalid_argument("PolarGrid: need at least 4 angular nodes");
}

double PolarGrid::theta(int j) const { return 2.0 * std::numbers::pi * j / n_theta; }

double PolarGrid::area_weight(std::size_t i) const {
    return radial.weights()[i] * radial.nodes()[i] * 2.0 * std::numbers::pi / n_theta;
}

VectorField sample_map(const PolarGrid& grid, const std::function<Vec2(double, double)>& fn) {
    VectorField out(grid.size());
    for (std::size_t i = 0; i < grid.n_radial(); ++i)
        for (int j = 0; j < grid.n_theta; ++j) out[grid.index(i, j)] = fn(grid.R(i), grid.theta(j));
    return out;
}

MatrixField sample_matrix_field(const PolarGrid& grid, const std::function<Mat2(double, double)>& fn) {
    MatrixField out(grid.size());
    for (std::size_t i = 0; i < grid.n_radial(); ++i)
        for (int j = 0; j < grid.n_theta; ++j) out[grid.index(i, j)] = fn(grid.R(i), grid.theta(j));
    return out;
}

ScalarField d_radial(const PolarGrid& grid, const ScalarField& f) {
    if (f.size() != grid.size()) throw std::invalid_argument("d_radial: size mismatch");
    ScalarField out(f.size());
    const auto stride = static_cast<std::size_t>(grid.n_theta);
    for (int j = 0; j < grid.n_theta; ++j) grid.radial.differentiate_strided(f.data() + j, stride, out.data() + j, stride);
    return out;
}

ScalarField d_theta(const PolarGrid& grid, const ScalarField& f) {
    if (f.size() != grid.size()) throw std::invalid_argument("d_theta: size mismatch");
    ScalarField out(f.size());
    const PeriodicDifferentiator D(grid.n_theta);
    for (std::size_t i = 0; i < grid.n_radial(); ++i) {
        const std::size_t base = grid.index(i, 0);
        D.apply(f.data() + base, 1, out.data() + base, 1);
    }
    return out;
}

VectorField gradient(const PolarGrid& grid, const ScalarField& f) {
    const ScalarField fr = d_radial(grid, f);
    const ScalarField ft = d_theta(grid, f);
    VectorField out(f.size());
    for (std::size_t i = 0; i < grid.n_radial(); ++i) {
        for (int j = 0; j < grid.n_theta; ++j) {
            const std::size_t k = grid.index(i, j);
            const double t = grid.theta(j);
            out[k] = e_R(t) * fr[k] + e_T(t) * (ft[k] / grid.R(i));
        }
    }
    return out;
}

MatrixField gradient(const PolarGrid& grid, const VectorField& u) {
    ScalarField ux(u.size()), uy(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) {
        ux[k] = u[k].x;
        uy[k] = u[k].y;
    }
    const VectorField gx = gradient(grid, ux);
    const VectorField gy = gradient(grid, uy);
    MatrixField out(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) out[k] = {gx[k].x, gx[k].y, gy[k].x, gy[k].y};
    return out;
}

MatrixField d_theta(const PolarGrid& grid, const MatrixField& m) {
    ScalarField c[4];
    for (auto& v : c) v.resize(m.size());
    for (std::size_t k = 0; k < m.size(); ++k) {
        c[0][k] = m[k].a11;
        c[1][k] = m[k].a12;
        c[2][k] = m[k].a21;
        c[3][k] = m[k].a22;
    }
    ScalarField d[4];
    for (int q = 0; q < 4; ++q) d[q] = d_theta(grid, c[q]);
    MatrixField out(m.size());
    for (std::size_t k = 0; k < m.size(); ++k) out[k] = {d[0][k], d[1][k], d[2][k], d[3][k]};
    return out;
}

double integrate(const PolarGrid& grid, const ScalarField& density) {
    if (density.size() != grid.size()) throw std::invalid_argument("integrate: size mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < grid.n_radial(); ++i) {
        double ring = 0.0;
        for (int j = 0; j < grid.n_theta; ++j) ring += density[grid.index(i, j)];
        total += ring * grid.area_weight(i);
    }
    return total;
}

}  // namespace polyelast
