#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "polyelast/algebra.hpp"
#include "polyelast/polar.hpp"
#include "polyelast/radial_bvp.hpp"
#include "polyelast/rho.hpp"

namespace polyelast {

// ---- buckling functional --------------------------------------------------

// (1/ε)|ξᵀx̂|² + ε|adj(ξ) x̂|².
double w_eps_pointwise(const Vec2& xhat, const Mat2& xi, double eps);

// Twist map v = R e_R(θ + k(R)), with k sampled on radii ending at R = 1.
struct TwistProfile {
    std::vector<double> grid;
    std::vector<double> k;
    std::vector<double> dk;
    double eps = 1.0;
};

// k ≡ 0, the identity map.
TwistProfile identity_twist(double eps, int n = 64);

// D_ε(u) = ∫_B W_ε(x, ∇u) dx for a map sampled on a polar mesh.
double buckling_energy(const PolarGrid& grid, const VectorField& u, double eps);
// Same for a twist map; the integrand does not depend on θ.
double buckling_energy(const TwistProfile& tp, int gauss_points = 8);

double p_eps(double eps);

// λ′(R) R along a twist stationary point.
double twist_pressure_slope(const TwistProfile& tp, double R);

// ---- quadratic forms diagonal in the polar frame ---------------------------

struct Coefficient {
    std::function<double(double)> value;
    std::function<double(double)> derivative;

    static Coefficient constant(double c);
};

// M(x)ξ·ξ = c_rr ξ_RR² + c_rt ξ_Rθ² + c_tr ξ_θR² + c_tt ξ_θθ², ξ_ab = e_aᵀ ξ e_b.
struct PolarQuadForm {
    double nu = 1.0;
    Coefficient c_rr, c_rt, c_tr, c_tt;
    // set for the constant form (a, 1, a, 1)·ν
    std::optional<double> fast_a;

    static PolarQuadForm ncover(double a, double nu);
    // Smallest sampled coefficient value must not fall below ν.
    bool satisfies_floor(int samples = 720) const;
    double density(double theta, const Mat2& xi) const;
};

double quadratic_energy(const PolarGrid& grid, const VectorField& u, const PolarQuadForm& form);

// (R/√N) e_R(Nθ), the N-cover map.
VectorField ncover_map(const PolarGrid& grid, int N);

class SingularSystem : public std::runtime_error {
public:
    explicit SingularSystem(double det);
    double det;
};

struct PressureSample {
    double lam_theta;
    double lam_R_R;
};

// Solves the 2x2 system for (λ,θ, λ,R R) induced by the boundary map
// (1/√N) e_R(Nθ) under a polar-diagonal form.
PressureSample ncover_pressure_system(const PolarQuadForm& form, int N, double R, double theta);
// Closed form for the constant form (a, 1, a, 1)·ν: (0, ν(N − a/N)).
PressureSample ncover_pressure_fast(const PolarQuadForm& form, int N);

struct PressureGradient {
    std::vector<double> radii;
    std::vector<double> thetas;
    std::vector<PressureSample> samples;  // index i * thetas.size() + j
    // max of the componentwise sup norms of λ,θ and λ,R R
    double sup_norm_P = 0.0;
    bool used_fast_path = false;
};

PressureGradient compute_pressure_gradient(const PolarQuadForm& form, int N, const std::vector<double>& radii,
                                           const std::vector<double>& thetas, bool allow_fast_path = true);
void write_pressure_csv(std::ostream& os, const PressureGradient& pg);

// ---- uniqueness conditions -------------------------------------------------

// Prefactor of the general small-pressure bound P ≤ c ν.
inline const double kSmallPressureFactor = std::sqrt(3.0) / (2.0 * std::sqrt(2.0));

enum class PressureMode { General, RadialOnly, AngularOnly };

struct SmallPressureResult {
    bool pass;
    bool strict;
    double threshold;
};

SmallPressureResult small_pressure_check(double P, double nu, PressureMode mode);

struct Interval {
    double lo;
    double hi;
};

// Open interval (N² − N, N² + N) of a for which the N-cover pressure is small.
Interval admissible_a_range(int N);

double ncover_min_energy(double nu, double a, int N);

struct HfThresholds {
    int n;
    int m;
};

HfThresholds hf_thresholds(double P, double nu);

struct CompressibleThreshold {
    double P;
    int n;
};

// P = sup_R |∂_R ρ′(d(R))| R by finite differences on the profile grid.
CompressibleThreshold hf_threshold_compressible(const RadialProfile& p, const RhoSpec& rho);

struct UniquenessConditions {
    bool cond_i;   // d ≥ s0 everywhere
    bool cond_ii;  // d constant
};

UniquenessConditions uniqueness_conditions(const RadialProfile& p, const RhoSpec& rho);

enum class AdmMode { HighModes, WithZeroMode };

struct DerivativeNorms {
    ScalarField grad_norm;  // |∇u|
    ScalarField hess_norm;  // |∇²u|
};

DerivativeNorms derivative_norms(const PolarGrid& grid, const VectorField& u);

int adm_condition(const PolarGrid& grid, const ScalarField& grad_norm, const ScalarField& hess_norm, double alpha,
                  AdmMode mode);

struct SsCheck {
    bool pass;
    double sup;  // sup_R |ρ′(d(R))| R
};

SsCheck ss_condition_check(const RadialProfile& p, const RhoSpec& rho, double nu);

class DegenerateField : public std::runtime_error {
public:
    explicit DegenerateField(double fraction);
    double fraction;
};

struct SigmaBound {
    int l;
    double max_ratio;
};

// Smallest integer l with |∂_θ σ| ≤ l |σ| at every node.
SigmaBound estimate_sigma_bound(const PolarGrid& grid, const MatrixField& sigma);

// {"op", "inputs", "P", "threshold", "strict", "pass"}
nlohmann::json check_report(const std::string& op, const nlohmann::json& inputs, double P, double threshold,
                            bool strict, bool pass);

}  // namespace polyelast
