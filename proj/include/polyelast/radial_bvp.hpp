#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "polyelast/rho.hpp"

namespace polyelast {

// Radial part r(R) of the M-covering map u = r(R) e_R(Mθ), sampled on (0, 1].
struct RadialProfile {
    int M = 1;
    std::vector<double> grid;
    std::vector<double> r;
    std::vector<double> dr;
};

struct LiftOff {
    enum class Kind { Immediate, Delayed };
    Kind kind = Kind::Immediate;
    double delta = 0.0;

    bool delayed() const { return kind == Kind::Delayed; }
};

std::string to_string(LiftOff::Kind k);

struct BvpDiagnostics {
    std::vector<double> d;
    std::vector<double> ddot;
    std::vector<double> z;
    std::vector<double> zdot;
    LiftOff lift_off;      // of the profile r
    LiftOff rho_lift_off;  // of the penalty density ρ(d(R))
    double DM_estimate = 0.0;
    double residual_sup = 0.0;
};

struct BvpOptions {
    double eps0 = 1e-6;
    int grid_size = 512;
    double rtol = 1e-9;
    double s_max_limit = 1048576.0;  // 2^20
    double s_tol = 1e-12;
    double tol_residual = 1e-6;
    double liftoff_tol = 1e-8;
};

struct BvpSolution {
    RadialProfile profile;
    BvpDiagnostics diag;
    double s_star = 0.0;
    int shots = 0;
};

class Diverged : public std::runtime_error {
public:
    explicit Diverged(double s);
    double s;
};

// One row of the zero-extension search on [δ, 1] with r(δ) = 0.
struct DelayedCandidate {
    double delta;
    double slope;  // ṙ(δ⁺) needed to reach r(1) = 1; the C¹ mismatch with r ≡ 0
    bool bracketed;
};

struct DelayedSearch {
    std::vector<DelayedCandidate> candidates;
    bool found = false;
    double best_delta = 0.0;
    double best_slope = 0.0;
};

class NoBracket : public std::runtime_error {
public:
    NoBracket(double s_max, DelayedSearch search);
    double s_max;
    DelayedSearch search;
};

class ResidualTooLarge : public std::runtime_error {
public:
    ResidualTooLarge(double residual, BvpSolution solution);
    double residual;
    BvpSolution solution;
};

double ddot_closed_form(double R, double r, double dr, int M, const RhoSpec& rho);
double ode_rhs(double R, double r, double dr, int M, const RhoSpec& rho);

// Integrates from eps0 to 1 with the power-law seed r = s eps0^M.
RadialProfile shoot(int M, const RhoSpec& rho, double s, double eps0, int n_steps, double rtol = 1e-9);

BvpSolution solve_bvp(int M, const RhoSpec& rho, const BvpOptions& opts = {});

BvpDiagnostics diagnostics(const RadialProfile& p, const RhoSpec& rho, double liftoff_tol = 1e-8);

// Zero-amplitude test uses the amplitude relative to the kernel branch,
// r_i < tol * R_i^M, so a resolved power-law start is not mistaken for r ≡ 0.
LiftOff classify_liftoff(const RadialProfile& p, double tol = 1e-8);

// Largest initial interval on which ρ(d(R)) vanishes.
LiftOff classify_rho_liftoff(const RadialProfile& p, const RhoSpec& rho);

// Sup over cells of the local defect between stored consecutive states and the
// ODE flow, expressed per unit length in the form M²r/R − ṙ − R r̈ − Mρ″ḋ r.
double ode_residual(const RadialProfile& p, const RhoSpec& rho);

double rescale_check(const RadialProfile& p, const RhoSpec& rho, double eps);

bool z_interval_bound_check(const RadialProfile& p, const BvpDiagnostics& diag);

struct ZRootBounds {
    double lo;
    double hi;
};
ZRootBounds z_root_bounds(int M);

// Counts strict sign changes, ignoring entries with |v| <= tol.
int sign_changes(const std::vector<double>& v, double tol);

// Evaluates (r, ṙ) of the trajectory through the profile's first node at the
// given increasing radii by integrating the ODE.
struct RadialState {
    double r;
    double dr;
};
std::vector<RadialState> evaluate_solution(const RadialProfile& p, const RhoSpec& rho, const std::vector<double>& radii,
                                           double rtol = 1e-10);

// Power-law structure a (R/δ)^M below the point δ where d reaches the delay of ρ.
struct DelayedFit {
    double delta = 0.0;
    double a = 0.0;
    double fit_rel_error = 0.0;
    double c1_mismatch = 0.0;
    int fit_nodes = 0;
};
DelayedFit fit_delayed_power_law(const RadialProfile& p, const RhoSpec& rho);

DelayedSearch delayed_liftoff_search(int M, const RhoSpec& rho, const std::vector<double>& deltas,
                                     double rtol = 1e-9);

}  // namespace polyelast
