#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "polyelast/energy.hpp"
#include "polyelast/radial_bvp.hpp"
#include "polyelast/rho.hpp"

namespace polyelast {

struct MinimizeInit {
    enum class Kind { Identity, PowerLaw, Random, Warm };
    Kind kind = Kind::Identity;
    double s = 1.0;                 // PowerLaw amplitude
    std::uint64_t seed = 0;         // Random
    std::vector<double> values;     // Warm start, one value per grid node

    static MinimizeInit identity() { return {}; }
    static MinimizeInit power_law(double s) { return {Kind::PowerLaw, s, 0, {}}; }
    static MinimizeInit random(std::uint64_t seed) { return {Kind::Random, 1.0, seed, {}}; }
    static MinimizeInit warm(std::vector<double> v) { return {Kind::Warm, 1.0, 0, std::move(v)}; }
};

struct MinimizeOptions {
    int grid_size = 512;
    int max_iters = 20000;
    double step0 = 1.0;
    double tol_grad = 1e-10;
    double eps0 = 1e-6;  // first grid radius, as in the BVP solver
    MinimizeInit init;
    // Scale the descent direction by the inverse Dirichlet stiffness.
    bool precondition = true;
};

struct IterationRecord {
    int iter;
    double energy;
    double grad_norm;
    double step;
};

struct MinimizeResult {
    RadialProfile profile;
    EnergyReport energy;
    int iterations = 0;
    double grad_norm = 0.0;
    bool converged = false;
    // converged because no step could resolve a further decrease in floating point
    bool roundoff_stop = false;
    std::vector<IterationRecord> log;
};

class MaxItersExceeded : public std::runtime_error {
public:
    explicit MaxItersExceeded(MinimizeResult last);
    MinimizeResult last;
};

// Projected gradient descent with Armijo backtracking on nodal values of r over
// the geometric grid; r(1) = 1 is held fixed and r_i >= 0 enforced.
MinimizeResult minimize(int M, const RhoSpec& rho, const MinimizeOptions& opts = {});

// Gradient of radial_energy(p, rho, Reconstruction::PiecewiseLinear) with
// respect to every nodal value r_i (the fixed last node included).
std::vector<double> discrete_gradient(const RadialProfile& p, const RhoSpec& rho);

}  // namespace polyelast
