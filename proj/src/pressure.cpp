#include "polyelast/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>

#include "polyelast/numerics.hpp"

namespace polyelast {

namespace {

// Smallest integer ≥ x, forgiving a relative excess of 1e-9 so that exact
// integer ratios are not pushed up by rounding.
int ceil_slack(double x) {
    if (!(x > 0.0)) return 0;
    return std::max(0, static_cast<int>(std::ceil(x - 1e-9 * std::max(1.0, x))));
}

void check_twist(const TwistProfile& tp) {
    const std::size_t n = tp.grid.size();
    if (n < 2 || tp.k.size() != n || tp.dk.size() != n)
        throw std::invalid_argument("twist: grid, k and dk must have equal length >= 2");
    if (tp.grid.front() != 0.0 || std::abs(tp.grid.back() - 1.0) > 1e-12)
        throw std::invalid_argument("twist: grid must run from 0 to 1");
    for (std::size_t i = 1; i < n; ++i)
        if (!(tp.grid[i] > tp.grid[i - 1])) throw std::invalid_argument("twist: radii must increase strictly");
    if (std::abs(tp.k.back()) > 1e-12) throw std::invalid_argument("twist: k(1) must vanish");
    if (!(tp.eps >= 1.0)) throw std::invalid_argument("twist: eps must be >= 1");
}

struct TwistValue {
    double k;
    double dk;
};

// Cubic Hermite interpolation of (k, k′).
TwistValue twist_at(const TwistProfile& tp, double R) {
    const auto& g = tp.grid;
    std::size_t c = static_cast<std::size_t>(std::upper_bound(g.begin(), g.end(), R) - g.begin());
    c = std::clamp<std::size_t>(c, 1, g.size() - 1) - 1;
    const double h = g[c + 1] - g[c];
    const double t = (R - g[c]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t, h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    const double d00 = (6 * t2 - 6 * t) / h, d10 = 3 * t2 - 4 * t + 1, d01 = (-6 * t2 + 6 * t) / h, d11 = 3 * t2 - 2 * t;
    const double k = h00 * tp.k[c] + h10 * h * tp.dk[c] + h01 * tp.k[c + 1] + h11 * h * tp.dk[c + 1];
    const double dk = d00 * tp.k[c] + d10 * tp.dk[c] + d01 * tp.k[c + 1] + d11 * tp.dk[c + 1];
    return {k, dk};
}

// ∇v of the twist map at (R, θ = 0).
Mat2 twist_gradient(double R, const TwistValue& v) {
    const Vec2 a = e_R(v.k) + (R * v.dk) * e_T(v.k);
    return outer(a, e_R(0.0)) + outer(e_T(v.k), e_T(0.0));
}

void check_profile_basic(const RadialProfile& p) {
    if (p.grid.size() < 3 || p.r.size() != p.grid.size() || p.dr.size() != p.grid.size())
        throw std::invalid_argument("profile: grid, r and dr must have equal length >= 3");
}

std::vector<double> determinants(const RadialProfile& p) {
    std::vector<double> d(p.grid.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = p.M * p.r[i] * p.dr[i] / p.grid[i];
    return d;
}

}  // namespace

double w_eps_pointwise(const Vec2& xhat, const Mat2& xi, double eps) {
    if (!(eps >= 1.0)) throw std::invalid_argument("w_eps_pointwise: eps must be >= 1");
    if (std::abs(norm2(xhat) - 1.0) > 1e-10) throw std::invalid_argument("w_eps_pointwise: xhat must be a unit vector");
    return norm2(xi.transpose() * xhat) / eps + eps * norm2(adjugate(xi) * xhat);
}

TwistProfile identity_twist(double eps, int n) {
    if (n < 2) throw std::invalid_argument("identity_twist: need at least 2 nodes");
    if (!(eps >= 1.0)) throw std::invalid_argument("identity_twist: eps must be >= 1");
    TwistProfile tp;
    tp.eps = eps;
    for (int i = 0; i < n; ++i) tp.grid.push_back(static_cast<double>(i) / (n - 1));
    tp.k.assign(n, 0.0);
    tp.dk.assign(n, 0.0);
    return tp;
}

double buckling_energy(const PolarGrid& grid, const VectorField& u, double eps) {
    if (u.size() != grid.size()) throw std::invalid_argument("buckling_energy: size mismatch");
    const MatrixField G = gradient(grid, u);
    ScalarField w(G.size());
    for (std::size_t i = 0; i < grid.n_radial(); ++i)
        for (int j = 0; j < grid.n_theta; ++j) {
            const std::size_t k = grid.index(i, j);
            w[k] = w_eps_pointwise(e_R(grid.theta(j)), G[k], eps);
        }
    return integrate(grid, w);
}

double buckling_energy(const TwistProfile& tp, int gauss_points) {
    check_twist(tp);
    const GaussRule rule = gauss_legendre(gauss_points);
    double total = 0.0;
    for (std::size_t c = 0; c + 1 < tp.grid.size(); ++c) {
        const double a = tp.grid[c], b = tp.grid[c + 1];
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double R = 0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[q];
            const Mat2 xi = twist_gradient(R, twist_at(tp, R));
            total += 0.5 * (b - a) * rule.weights[q] * R * w_eps_pointwise(e_R(0.0), xi, tp.eps);
        }
    }
    return 2.0 * std::numbers::pi * total;
}

double p_eps(double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("p_eps: eps must be positive");
    return eps - 1.0 / eps;
}

double twist_pressure_slope(const TwistProfile& tp, double R) {
    check_twist(tp);
    if (!(R > 0.0 && R <= 1.0)) throw std::invalid_argument("twist_pressure_slope: R must lie in (0,1]");
    const TwistValue v = twist_at(tp, R);
    const double eps = tp.eps, p = p_eps(eps);
    const double s = std::sin(v.k), c = std::cos(v.k);
    const double num = p * (s * s / eps - eps * c * c) - R * R * v.dk * v.dk;
    return num / (1.0 / eps + p * c * c);
}

Coefficient Coefficient::constant(double c) {
    return {[c](double) { return c; }, [](double) { return 0.0; }};
}

PolarQuadForm PolarQuadForm::ncover(double a, double nu) {
    if (!(nu > 0.0)) throw std::invalid_argument("PolarQuadForm: nu must be positive");
    PolarQuadForm f;
    f.nu = nu;
    f.c_rr = Coefficient::constant(a * nu);
    f.c_rt = Coefficient::constant(nu);
    f.c_tr = Coefficient::constant(a * nu);
    f.c_tt = Coefficient::constant(nu);
    f.fast_a = a;
    return f;
}

bool PolarQuadForm::satisfies_floor(int samples) const {
    for (int q = 0; q < samples; ++q) {
        const double t = 2.0 * std::numbers::pi * q / samples;
        for (const Coefficient* c : {&c_rr, &c_rt, &c_tr, &c_tt})
            if (c->value(t) < nu) return false;
    }
    return true;
}

double PolarQuadForm::density(double theta, const Mat2& xi) const {
    const Vec2 er = e_R(theta), et = e_T(theta);
    const double rr = dot(er, xi * er), rt = dot(er, xi * et), tr = dot(et, xi * er), tt = dot(et, xi * et);
    return c_rr.value(theta) * rr * rr + c_rt.value(theta) * rt * rt + c_tr.value(theta) * tr * tr +
           c_tt.value(theta) * tt * tt;
}

double quadratic_energy(const PolarGrid& grid, const VectorField& u, const PolarQuadForm& form) {
    if (u.size() != grid.size()) throw std::invalid_argument("quadratic_energy: size mismatch");
    const MatrixField G = gradient(grid, u);
    ScalarField f(G.size());
    for (std::size_t i = 0; i < grid.n_radial(); ++i)
        for (int j = 0; j < grid.n_theta; ++j) {
            const std::size_t k = grid.index(i, j);
            f[k] = form.density(grid.theta(j), G[k]);
        }
    return integrate(grid, f);
}

VectorField ncover_map(const PolarGrid& grid, int N) {
    if (N < 1) throw std::invalid_argument("ncover_map: N must be >= 1");
    const double scale = 1.0 / std::sqrt(static_cast<double>(N));
    return sample_map(grid, [&](double R, double t) { return e_R(N * t) * (R * scale); });
}

SingularSystem::SingularSystem(double det_)
    : std::runtime_error("pressure system is singular (det " + std::to_string(det_) + ")"), det(det_) {}

PressureSample ncover_pressure_system(const PolarQuadForm& form, int N, double R, double theta) {
    if (N < 2) throw std::invalid_argument("ncover_pressure_system: N must be >= 2");
    if (!(R > 0.0 && R <= 1.0)) throw std::invalid_argument("ncover_pressure_system: R must lie in (0,1]");
    const double rn = std::sqrt(static_cast<double>(N));
    const double tk = (N - 1) * theta;
    const double s = std::sin(tk), c = std::cos(tk);
    const double al = form.c_rr.value(theta), be = form.c_rt.value(theta), ga = form.c_tr.value(theta),
                 de = form.c_tt.value(theta);
    const double dbe = form.c_rt.derivative(theta), dde = form.c_tt.derivative(theta);
    const double h1 = rn * dbe * s + (rn * (N - 1) * be + rn * de - al / rn) * c;
    const double h2 = -rn * dde * c + (rn * be + rn * (N - 1) * de - ga / rn) * s;
    // [[-s/√N, √N c], [c/√N, √N s]] (λ,θ, λ,R R)ᵀ = (h1, h2)ᵀ
    const double m11 = -s / rn, m12 = rn * c, m21 = c / rn, m22 = rn * s;
    const double det = m11 * m22 - m12 * m21;
    if (std::abs(det) < 1e-12) throw SingularSystem(det);
    return {(h1 * m22 - m12 * h2) / det, (m11 * h2 - m21 * h1) / det};
}

PressureSample ncover_pressure_fast(const PolarQuadForm& form, int N) {
    if (!form.fast_a) throw std::invalid_argument("ncover_pressure_fast: form has no constant fast path");
    if (N < 2) throw std::invalid_argument("ncover_pressure_fast: N must be >= 2");
    return {0.0, form.nu * (N - *form.fast_a / N)};
}

PressureGradient compute_pressure_gradient(const PolarQuadForm& form, int N, const std::vector<double>& radii,
                                           const std::vector<double>& thetas, bool allow_fast_path) {
    PressureGradient pg;
    pg.radii = radii;
    pg.thetas = thetas;
    pg.used_fast_path = allow_fast_path && form.fast_a.has_value();
    double sup_t = 0.0, sup_r = 0.0;
    for (double R : radii) {
        for (double t : thetas) {
            const PressureSample s =
                pg.used_fast_path ? ncover_pressure_fast(form, N) : ncover_pressure_system(form, N, R, t);
            if (pg.used_fast_path && !(R > 0.0 && R <= 1.0))
                throw std::invalid_argument("compute_pressure_gradient: R must lie in (0,1]");
            pg.samples.push_back(s);
            sup_t = std::max(sup_t, std::abs(s.lam_theta));
            sup_r = std::max(sup_r, std::abs(s.lam_R_R));
        }
    }
    pg.sup_norm_P = std::max(sup_t, sup_r);
    return pg;
}

void write_pressure_csv(std::ostream& os, const PressureGradient& pg) {
    os << "R,theta,lam_theta,lam_R_R\n" << std::setprecision(17);
    std::size_t k = 0;
    for (double R : pg.radii)
        for (double t : pg.thetas) {
            const PressureSample& s = pg.samples[k++];
            os << R << ',' << t << ',' << s.lam_theta << ',' << s.lam_R_R << '\n';
        }
}

SmallPressureResult small_pressure_check(double P, double nu, PressureMode mode) {
    if (!(P >= 0.0)) throw std::invalid_argument("small_pressure_check: P must be >= 0");
    if (!(nu > 0.0)) throw std::invalid_argument("small_pressure_check: nu must be positive");
    const double threshold = (mode == PressureMode::General) ? kSmallPressureFactor * nu : nu;
    return {P <= threshold, P < threshold, threshold};
}

Interval admissible_a_range(int N) {
    if (N < 2) throw std::invalid_argument("admissible_a_range: N must be >= 2");
    return {static_cast<double>(N) * N - N, static_cast<double>(N) * N + N};
}

double ncover_min_energy(double nu, double a, int N) {
    if (!(nu > 0.0)) throw std::invalid_argument("ncover_min_energy: nu must be positive");
    const Interval I = admissible_a_range(N);
    if (a < I.lo || a > I.hi) throw std::invalid_argument("ncover_min_energy: a outside [N^2-N, N^2+N]");
    return nu * std::numbers::pi / 2.0 * (1.0 + a) * (1.0 / N + N);
}

HfThresholds hf_thresholds(double P, double nu) {
    if (!(P >= 0.0)) throw std::invalid_argument("hf_thresholds: P must be >= 0");
    if (!(nu > 0.0)) throw std::invalid_argument("hf_thresholds: nu must be positive");
    return {ceil_slack(P / nu), ceil_slack(P / (kSmallPressureFactor * nu))};
}

CompressibleThreshold hf_threshold_compressible(const RadialProfile& p, const RhoSpec& rho) {
    check_profile_basic(p);
    const std::size_t n = p.grid.size();
    const std::vector<double> d = determinants(p);
    std::vector<double> q(n);
    for (std::size_t i = 0; i < n; ++i) q[i] = rho_eval(rho, d[i]).drho;
    double P = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = std::clamp<std::size_t>(i, 1, n - 2);
        const std::vector<double> xs{p.grid[c - 1], p.grid[c], p.grid[c + 1]};
        const std::vector<double> w = fd_weights(p.grid[i], xs, 1);
        const double dq = w[0] * q[c - 1] + w[1] * q[c] + w[2] * q[c + 1];
        P = std::max(P, std::abs(dq) * p.grid[i]);
    }
    return {P, ceil_slack(P)};
}

UniquenessConditions uniqueness_conditions(const RadialProfile& p, const RhoSpec& rho) {
    check_profile_basic(p);
    const std::vector<double> d = determinants(p);
    const auto [lo, hi] = std::minmax_element(d.begin(), d.end());
    return {*lo >= rho.s0 - 1e-8, *hi - *lo <= 1e-8};
}

DerivativeNorms derivative_norms(const PolarGrid& grid, const VectorField& u) {
    const MatrixField G = gradient(grid, u);
    DerivativeNorms out;
    out.grad_norm.resize(G.size());
    out.hess_norm.assign(G.size(), 0.0);
    for (std::size_t k = 0; k < G.size(); ++k) out.grad_norm[k] = frobenius(G[k]);
    for (int comp = 0; comp < 4; ++comp) {
        ScalarField c(G.size());
        for (std::size_t k = 0; k < G.size(); ++k) {
            const Mat2& m = G[k];
            c[k] = comp == 0 ? m.a11 : comp == 1 ? m.a12 : comp == 2 ? m.a21 : m.a22;
        }
        const VectorField gc = gradient(grid, c);
        for (std::size_t k = 0; k < G.size(); ++k) out.hess_norm[k] += norm2(gc[k]);
    }
    for (double& h : out.hess_norm) h = std::sqrt(h);
    return out;
}

int adm_condition(const PolarGrid& grid, const ScalarField& grad_norm, const ScalarField& hess_norm, double alpha,
                  AdmMode mode) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("adm_condition: alpha must lie in (0,1]");
    if (grad_norm.size() != grid.size() || hess_norm.size() != grid.size())
        throw std::invalid_argument("adm_condition: size mismatch");
    // smallest admissible n from the ratio |∇²u| R / |∇u|
    double ratio = 0.0;
    for (std::size_t i = 0; i < grid.n_radial(); ++i)
        for (int j = 0; j < grid.n_theta; ++j) {
            const std::size_t k = grid.index(i, j);
            const double h = hess_norm[k] * grid.R(i);
            if (h <= 1e-12 * std::max(1.0, grad_norm[k])) continue;
            if (!(grad_norm[k] > 0.0)) throw std::invalid_argument("adm_condition: |grad u| vanishes where |hess u| does not");
            ratio = std::max(ratio, h / grad_norm[k]);
        }
    const double factor = (mode == AdmMode::HighModes) ? 4.0 * alpha : 8.0 * std::sqrt(2.0) * alpha / std::sqrt(3.0);
    return ceil_slack(factor * ratio);
}

SsCheck ss_condition_check(const RadialProfile& p, const RhoSpec& rho, double nu) {
    check_profile_basic(p);
    if (!(nu > 0.0)) throw std::invalid_argument("ss_condition_check: nu must be positive");
    const std::vector<double> d = determinants(p);
    double sup = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) sup = std::max(sup, std::abs(rho_eval(rho, d[i]).drho) * p.grid[i]);
    return {sup <= nu, sup};
}

DegenerateField::DegenerateField(double fraction_)
    : std::runtime_error("field vanishes on " + std::to_string(100.0 * fraction_) + "% of nodes"), fraction(fraction_) {}

SigmaBound estimate_sigma_bound(const PolarGrid& grid, const MatrixField& sigma) {
    if (sigma.size() != grid.size()) throw std::invalid_argument("estimate_sigma_bound: size mismatch");
    const MatrixField ds = d_theta(grid, sigma);
    std::size_t degenerate = 0;
    double ratio = 0.0;
    for (std::size_t k = 0; k < sigma.size(); ++k) {
        const double s = frobenius(sigma[k]);
        if (s <= 1e-12) {
            ++degenerate;
            continue;
        }
        ratio = std::max(ratio, frobenius(ds[k]) / s);
    }
    const double fraction = static_cast<double>(degenerate) / static_cast<double>(sigma.size());
    if (fraction > 0.01) throw DegenerateField(fraction);
    return {ceil_slack(ratio), ratio};
}

nlohmann::json check_report(const std::string& op, const nlohmann::json& inputs, double P, double threshold,
                            bool strict, bool pass) {
    return {{"op", op}, {"inputs", inputs}, {"P", P}, {"threshold", threshold}, {"strict", strict}, {"pass", pass}};
}

}  // namespace polyelast
