#include "polyelast/energy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace polyelast {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Parts {
    double dirichlet = 0.0;
    double rho = 0.0;
};

void accumulate(Parts& acc, int M, const RhoSpec& rho, double R, double r, double dr, double w) {
    acc.dirichlet += w * 0.5 * (dr * dr + M * M * r * r / (R * R)) * R;
    acc.rho += w * rho_eval(rho, M * r * dr / R).rho * R;
}

Parts integrate_profile(int M, const RhoSpec& rho, const std::vector<double>& grid, const std::vector<double>& r,
                        const std::vector<double>& dr, Reconstruction mode) {
    const int np = (mode == Reconstruction::Hermite) ? kHermiteGaussPoints : kLinearGaussPoints;
    const GaussRule g = gauss_legendre(np);
    Parts acc;

    // origin cell [0, R_0]
    const double R0 = grid.front();
    for (int q = 0; q < np; ++q) {
        const double R = 0.5 * R0 * (g.nodes[q] + 1.0);
        const double w = 0.5 * R0 * g.weights[q];
        double rv = 0.0, dv = 0.0;
        if (mode == Reconstruction::Hermite) {
            const double D = (r[0] != 0.0) ? R0 * dr[0] / r[0] : 0.0;
            rv = r[0] * std::pow(R / R0, D);
            dv = D * rv / R;
        } else {
            dv = r[0] / R0;
            rv = dv * R;
        }
        accumulate(acc, M, rho, R, rv, dv, w);
    }

    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double a = grid[i], h = grid[i + 1] - grid[i];
        for (int q = 0; q < np; ++q) {
            const double t = 0.5 * (g.nodes[q] + 1.0);
            const double R = a + h * t;
            const double w = 0.5 * h * g.weights[q];
            double rv, dv;
            if (mode == Reconstruction::Hermite) {
                const double t2 = t * t, t3 = t2 * t;
                rv = (2 * t3 - 3 * t2 + 1) * r[i] + (t3 - 2 * t2 + t) * h * dr[i] + (-2 * t3 + 3 * t2) * r[i + 1] +
                     (t3 - t2) * h * dr[i + 1];
                dv = ((6 * t2 - 6 * t) * r[i] + (3 * t2 - 4 * t + 1) * h * dr[i] + (-6 * t2 + 6 * t) * r[i + 1] +
                      (3 * t2 - 2 * t) * h * dr[i + 1]) /
                     h;
            } else {
                rv = (1 - t) * r[i] + t * r[i + 1];
                dv = (r[i + 1] - r[i]) / h;
            }
            accumulate(acc, M, rho, R, rv, dv, w);
        }
    }
    acc.dirichlet *= kTwoPi;
    acc.rho *= kTwoPi;
    return acc;
}

}  // namespace

EnergyReport radial_energy(const RadialProfile& p, const RhoSpec& rho, Reconstruction mode) {
    if (p.grid.size() < 2 || p.r.size() != p.grid.size() || p.dr.size() != p.grid.size())
        throw std::invalid_argument("radial_energy: inconsistent profile");
    if (!(p.grid.front() > 0.0)) throw std::invalid_argument("radial_energy: radii must be positive");
    const Parts fine = integrate_profile(p.M, rho, p.grid, p.r, p.dr, mode);

    EnergyReport rep;
    rep.dirichlet_part = fine.dirichlet;
    rep.rho_part = fine.rho;
    rep.total = fine.dirichlet + fine.rho;

    // Richardson-style estimate from the two grids with every other node removed;
    // taking the larger guards against an accidental cancellation on one of them.
    const double factor = (mode == Reconstruction::Hermite) ? 15.0 : 3.0;
    for (std::size_t offset : {0, 1}) {
        std::vector<double> cg, cr, cd;
        for (std::size_t i = offset; i < p.grid.size(); i += 2) {
            cg.push_back(p.grid[i]);
            cr.push_back(p.r[i]);
            cd.push_back(p.dr[i]);
        }
        if (cg.back() != p.grid.back()) {
            cg.push_back(p.grid.back());
            cr.push_back(p.r.back());
            cd.push_back(p.dr.back());
        }
        if (cg.size() < 2) continue;
        const Parts coarse = integrate_profile(p.M, rho, cg, cr, cd, mode);
        rep.quad_error_estimate = std::max(rep.quad_error_estimate, std::abs(coarse.dirichlet + coarse.rho - rep.total) / factor);
    }
    rep.quad_error_estimate = std::max(rep.quad_error_estimate, 1e-14 * std::abs(rep.total));
    return rep;
}

EnergyReport full_energy(const PolarGrid& grid, const VectorField& u, const RhoSpec& rho) {
    if (u.size() != grid.size()) throw std::invalid_argument("full_energy: field does not match grid");
    const MatrixField F = gradient(grid, u);
    ScalarField dir(F.size()), pen(F.size());
    for (std::size_t k = 0; k < F.size(); ++k) {
        dir[k] = 0.5 * frob_dot(F[k], F[k]);
        pen[k] = rho_eval(rho, F[k].det()).rho;
    }
    EnergyReport rep;
    rep.dirichlet_part = integrate(grid, dir);
    rep.rho_part = integrate(grid, pen);
    rep.total = rep.dirichlet_part + rep.rho_part;

    // Angular part: drop every other angle. Radial part: size of the top
    // Legendre coefficient of the ring integrals in each cell.
    double est = 0.0;
    if (grid.n_theta % 2 == 0) {
        double half = 0.0;
        for (std::size_t i = 0; i < grid.n_radial(); ++i) {
            double ring = 0.0;
            for (int j = 0; j < grid.n_theta; j += 2) ring += dir[grid.index(i, j)] + pen[grid.index(i, j)];
            half += 2.0 * ring * grid.area_weight(i);
        }
        est += std::abs(half - rep.total);
    }
    const int p = grid.radial.order();
    const GaussRule g = gauss_legendre(p);
    const double h = (grid.radial.upper() - grid.radial.lower()) / grid.radial.n_cells();
    for (int c = 0; c < grid.radial.n_cells(); ++c) {
        double coef = 0.0;
        for (int q = 0; q < p; ++q) {
            const std::size_t i = static_cast<std::size_t>(c) * p + q;
            double ring = 0.0;
            for (int j = 0; j < grid.n_theta; ++j) ring += dir[grid.index(i, j)] + pen[grid.index(i, j)];
            ring *= grid.R(i) * kTwoPi / grid.n_theta;
            // P_{p-1} at the node by the three-term recurrence
            double p0 = 1.0, p1 = g.nodes[q];
            for (int k = 2; k < p; ++k) {
                const double p2 = ((2.0 * k - 1.0) * g.nodes[q] * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            coef += g.weights[q] * ring * p1;
        }
        est += 0.5 * h * (2.0 * p - 1.0) / 2.0 * std::abs(coef);
    }
    rep.quad_error_estimate = std::max(est, 1e-14 * std::abs(rep.total));
    return rep;
}

VectorField embed_radial(const PolarGrid& grid, int M, const std::function<double(double)>& r) {
    std::vector<double> rv(grid.n_radial());
    for (std::size_t i = 0; i < rv.size(); ++i) rv[i] = r(grid.R(i));
    VectorField u(grid.size());
    for (std::size_t i = 0; i < grid.n_radial(); ++i)
        for (int j = 0; j < grid.n_theta; ++j) u[grid.index(i, j)] = e_R(M * grid.theta(j)) * rv[i];
    return u;
}

VectorField embed_radial_solution(const PolarGrid& grid, const RadialProfile& p, const RhoSpec& rho) {
    const auto states = evaluate_solution(p, rho, grid.radial.nodes());
    VectorField u(grid.size());
    for (std::size_t i = 0; i < grid.n_radial(); ++i)
        for (int j = 0; j < grid.n_theta; ++j) u[grid.index(i, j)] = e_R(p.M * grid.theta(j)) * states[i].r;
    return u;
}

}  // namespace polyelast
