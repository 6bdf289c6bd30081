#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace polyelast {

struct GaussRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

GaussRule gauss_legendre(int n);

// Geometric grid of n radii from r0 to 1 (inclusive), dense near 0.
std::vector<double> geometric_grid(double r0, int n);

// Finite-difference weights for the m-th derivative at x0 using the given
// stencil abscissae (Fornberg's recursion).
std::vector<double> fd_weights(double x0, const std::vector<double>& xs, int m);

struct Extrapolated {
    double value = 0.0;
    double error = std::numeric_limits<double>::infinity();
};

// f′(0) from central differences at steps h, h/1.4, ... extrapolated in h²
// (Ridders). The error estimate is floored at the roundoff level of f over the
// step, so a lucky zero difference is never reported as exact.
Extrapolated ridders_derivative(const std::function<double(double)>& f, double h);

// Composite Gauss-Legendre rule on [a, b] with equal cells; also provides
// per-cell polynomial differentiation of nodal data.
class RadialQuadrature {
public:
    RadialQuadrature() = default;
    RadialQuadrature(int n_cells, int order, double a = 0.0, double b = 1.0);

    int n_cells() const { return n_cells_; }
    int order() const { return order_; }
    std::size_t size() const { return nodes_.size(); }
    double lower() const { return a_; }
    double upper() const { return b_; }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }

    // Derivative of data sampled at nodes(); exact for polynomials of degree
    // < order within each cell.
    std::vector<double> differentiate(const std::vector<double>& values) const;
    // Same, reading values[offset + i * stride].
    void differentiate_strided(const double* values, std::size_t stride, double* out,
                               std::size_t out_stride) const;

private:
    int n_cells_ = 0;
    int order_ = 0;
    double a_ = 0.0, b_ = 1.0;
    std::vector<double> nodes_;
    std::vector<double> weights_;
    std::vector<double> diff_;  // order x order on the reference cell
};

// Spectral derivative of n equispaced periodic samples over [0, 2π).
class PeriodicDifferentiator {
public:
    explicit PeriodicDifferentiator(int n);
    int size() const { return n_; }
    void apply(const double* in, std::size_t in_stride, double* out, std::size_t out_stride) const;
    std::vector<double> apply(const std::vector<double>& in) const;

private:
    int n_;
    std::vector<double> row_;  // circulant first row
};

}  // namespace polyelast
