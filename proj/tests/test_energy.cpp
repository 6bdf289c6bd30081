#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "polyelast/energy.hpp"
#include "polyelast/numerics.hpp"
#include "polyelast/polar.hpp"
#include "polyelast/radial_bvp.hpp"

using namespace polyelast;

namespace {

constexpr double kPi = std::numbers::pi;

RadialProfile identity_profile(int n) {
    RadialProfile p;
    p.M = 1;
    p.grid = geometric_grid(1e-4, n);
    p.r = p.grid;
    p.dr.assign(p.grid.size(), 1.0);
    return p;
}

void check_parts(const EnergyReport& e) {
    CHECK(std::abs(e.total - (e.dirichlet_part + e.rho_part)) <= 1e-12 * std::max(1.0, std::abs(e.total)));
    CHECK(e.rho_part >= 0.0);
}

}  // namespace

TEST_CASE("radial energy of the identity") {
    const RhoSpec rho = build_rho(1.0, 1.0, 0.0);
    for (Reconstruction mode : {Reconstruction::Hermite, Reconstruction::PiecewiseLinear}) {
        const EnergyReport e = radial_energy(identity_profile(128), rho, mode);
        CHECK(e.total == doctest::Approx(1.5 * kPi).epsilon(1e-12));
        check_parts(e);
    }
    const RhoSpec delayed = build_rho(1.0, 1.0, 0.5);
    const EnergyReport d = radial_energy(identity_profile(128), delayed);
    CHECK(d.total == doctest::Approx(3.926990816987241).epsilon(1e-12));
    check_parts(d);
}

TEST_CASE("a profile that is zero except for a final ramp") {
    const RhoSpec rho = build_rho(1.0, 1.0, 0.0);
    RadialProfile p;
    p.M = 2;
    p.grid = geometric_grid(1e-3, 64);
    p.r.assign(p.grid.size(), 0.0);
    p.dr.assign(p.grid.size(), 0.0);
    p.r.back() = 1.0;
    const double h = p.grid.back() - p.grid[p.grid.size() - 2];
    p.dr.back() = 1.0 / h;
    p.dr[p.grid.size() - 2] = 0.0;
    for (Reconstruction mode : {Reconstruction::Hermite, Reconstruction::PiecewiseLinear}) {
        const EnergyReport e = radial_energy(p, rho, mode);
        CHECK(std::isfinite(e.total));
        CHECK(e.dirichlet_part > 0.0);
        CHECK(e.dirichlet_part > e.rho_part);
        check_parts(e);
    }
}

TEST_CASE("full energy of the identity on a fine polar mesh") {
    const RhoSpec rho = build_rho(1.0, 1.0, 0.0);
    const PolarGrid grid(32, 8, 256);
    const VectorField id = sample_map(grid, [](double R, double t) { return Vec2{R * std::cos(t), R * std::sin(t)}; });
    const EnergyReport e = full_energy(grid, id, rho);
    CHECK(std::abs(e.total - 1.5 * kPi) / (1.5 * kPi) < 1e-4);
    check_parts(e);
}

TEST_CASE("full energy agrees with the radial energy for solved M-covers") {
    for (int M : {2, 3}) {
        const RhoSpec rho = build_rho(0.5, 1.0, 0.0);
        const BvpSolution sol = solve_bvp(M, rho);
        const PolarGrid grid(16, 8, 64);
        const EnergyReport full = full_energy(grid, embed_radial_solution(grid, sol.profile, rho), rho);
        const EnergyReport rad = radial_energy(sol.profile, rho);
        CAPTURE(M);
        CHECK(std::abs(full.total - rad.total) / rad.total < 1e-4);
        check_parts(full);
    }
}

TEST_CASE("full energy of a closed-form radial map matches the radial energy") {
    const RhoSpec rho = build_rho(2.0, 1.0, 0.0);
    const int M = 2;
    auto r = [](double R) { return R * R * (1.5 - 0.5 * R); };
    const PolarGrid grid(16, 8, 64);
    RadialProfile p;
    p.M = M;
    p.grid = geometric_grid(1e-4, 512);
    for (double R : p.grid) {
        p.r.push_back(r(R));
        p.dr.push_back(3.0 * R - 1.5 * R * R);
    }
    const EnergyReport full = full_energy(grid, embed_radial(grid, M, r), rho);
    const EnergyReport rad = radial_energy(p, rho);
    CHECK(std::abs(full.total - rad.total) / rad.total < 1e-4);
}

TEST_CASE("compactly supported perturbations of the identity never lower the energy") {
    const RhoSpec rho = build_rho(1.0, 1.0, 0.0);
    const PolarGrid grid(16, 8, 64);
    const VectorField id = sample_map(grid, [](double R, double t) { return Vec2{R * std::cos(t), R * std::sin(t)}; });
    const double e0 = full_energy(grid, id, rho).total;
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int k = 0; k < 50; ++k) {
        const double cx = 0.6 * (U(rng) - 0.5), cy = 0.6 * (U(rng) - 0.5), w = 0.15 + 0.2 * U(rng);
        const Vec2 amp{0.2 * (U(rng) - 0.5), 0.2 * (U(rng) - 0.5)};
        const VectorField u = sample_map(grid, [&](double R, double t) {
            const double x = R * std::cos(t), y = R * std::sin(t);
            const double q = ((x - cx) * (x - cx) + (y - cy) * (y - cy)) / (w * w);
            const double bump = q < 1.0 ? std::pow(1.0 - q, 4) : 0.0;
            return Vec2{x, y} + amp * bump;
        });
        CHECK(full_energy(grid, u, rho).total >= e0 - 1e-6);
    }
}

TEST_CASE("doubling the grid stays within the reported error estimate") {
    auto sampled = [](int n, int M) {
        RadialProfile p;
        p.M = M;
        p.grid = geometric_grid(1e-4, n);
        for (double R : p.grid) {
            p.r.push_back(std::pow(R, M) * (1.5 - 0.5 * R));
            p.dr.push_back(M * std::pow(R, M - 1) * (1.5 - 0.5 * R) - 0.5 * std::pow(R, M));
        }
        return p;
    };
    for (const RhoSpec& rho : {build_rho(0.5, 1.0, 0.0), build_rho(2.0, 0.5, 0.2), build_rho(1.0, 1.0, 0.5),
                               build_rho(3.0, 0.3, 0.0)})
        for (int M : {1, 2, 3})
            for (int n : {64, 128, 256, 512}) {
                const EnergyReport a = radial_energy(sampled(n, M), rho);
                const EnergyReport b = radial_energy(sampled(2 * n, M), rho);
                CAPTURE(M);
                CAPTURE(n);
                CHECK(std::abs(a.total - b.total) < 4.0 * a.quad_error_estimate);
            }
}
