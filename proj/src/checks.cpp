#include "polyelast/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>

#include "polyelast/algebra.hpp"
#include "polyelast/direct_min.hpp"
#include "polyelast/energy.hpp"
#include "polyelast/fourier.hpp"
#include "polyelast/numerics.hpp"
#include "polyelast/pressure.hpp"
#include "polyelast/radial_bvp.hpp"
#include "polyelast/rho.hpp"

namespace polyelast {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Runs one check; a runtime bound, when given, is part of the verdict.
CheckResult timed(int id, const std::string& name, const std::function<void(CheckResult&)>& body,
                  double max_seconds = std::numeric_limits<double>::infinity()) {
    CheckResult r;
    r.id = id;
    r.name = name;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(r);
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (r.seconds > max_seconds) {
        r.pass = false;
        r.detail += fmt("; runtime %.2fs exceeds %.0fs", r.seconds, max_seconds);
    }
    return r;
}

double sup_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s = std::max(s, std::abs(a[i] - b[i]));
    return s;
}

// Random profile family for gradient checks: r_i = R_i (½ + U), r(1) = 1.
RadialProfile random_profile(int M, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    RadialProfile p;
    p.M = M;
    p.grid = geometric_grid(1e-2, 64);
    for (double R : p.grid) p.r.push_back(R * (0.5 + U(rng)));
    p.r.back() = 1.0;
    p.dr.assign(p.r.size(), 0.0);
    return p;
}

// Random vector profile R^j (c0 + c1 R + c2 R²) per component.
std::vector<Vec2> random_mode_profile(const PolarGrid& g, int j, std::mt19937_64& rng) {
    std::normal_distribution<double> N01;
    const double c[6] = {N01(rng), N01(rng), N01(rng), N01(rng), N01(rng), N01(rng)};
    std::vector<Vec2> out(g.n_radial());
    for (std::size_t i = 0; i < g.n_radial(); ++i) {
        const double R = g.R(i), p = std::pow(R, j);
        out[i] = {p * (c[0] + c[1] * R + c[2] * R * R), p * (c[3] + c[4] * R + c[5] * R * R)};
    }
    return out;
}

}  // namespace

CheckResult check_counterexample_energy() {
    return timed(1, "counterexample energy", [](CheckResult& r) {
        const double nu = 1.0, a = 5.0;
        const int N = 2;
        const double formula = ncover_min_energy(nu, a, N);
        const bool formula_ok = rel(formula, 7.5 * kPi) < 1e-12;
        const PolarGrid grid(16, 8, 64);
        const double quad = quadratic_energy(grid, ncover_map(grid, N), PolarQuadForm::ncover(a, nu));
        const double gap = rel(quad, formula);
        r.pass = formula_ok && gap < 1e-6;
        r.detail = fmt("formula %.9f (7.5pi %s), quadrature of u=(R/sqrt N)e_NR %.9f, relative gap %.3e", formula,
                       formula_ok ? "ok" : "mismatch", quad, gap);
    }, 1.0);
}

CheckResult check_pressure_closed_form() {
    return timed(2, "pressure closed form", [](CheckResult& r) {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> U(0.0, 1.0);
        struct Case {
            int N;
            double a, nu;
        };
        double worst = 0.0;
        for (const Case& c : {Case{2, 5.0, 1.0}, Case{3, 8.0, 2.0}, Case{4, 15.0, 0.5}}) {
            const PolarQuadForm form = PolarQuadForm::ncover(c.a, c.nu);
            const double expected = c.nu * (c.N - c.a / c.N);
            for (int k = 0; k < 1000; ++k) {
                const double R = 1.0 - U(rng), t = 2.0 * kPi * U(rng);
                const PressureSample s = ncover_pressure_system(form, c.N, R, t);
                worst = std::max({worst, std::abs(s.lam_theta), std::abs(s.lam_R_R - expected)});
            }
        }
        bool endpoints_ok = true;
        for (int N : {2, 3, 4}) {
            const Interval I = admissible_a_range(N);
            for (double a : {I.lo - 1e-6, I.lo + 1e-6, I.hi - 1e-6, I.hi + 1e-6}) {
                const PressureGradient pg =
                    compute_pressure_gradient(PolarQuadForm::ncover(a, 1.0), N, {0.25, 0.5, 1.0}, {0.0, 1.0, 2.0}, false);
                const bool strict = small_pressure_check(pg.sup_norm_P, 1.0, PressureMode::RadialOnly).strict;
                endpoints_ok = endpoints_ok && (strict == (a > I.lo && a < I.hi));
            }
        }
        r.pass = worst < 1e-10 && endpoints_ok;
        r.detail = fmt("max deviation from (0, nu(N-a/N)) over 3000 points %.2e; strict iff a in (N^2-N, N^2+N) at endpoints +-1e-6: %s",
                       worst, endpoints_ok ? "yes" : "no");
    });
}

CheckResult check_buckling_identity() {
    return timed(3, "buckling identity", [](CheckResult& r) {
        const PolarGrid grid(16, 8, 64);
        const VectorField id = sample_map(grid, [](double R, double t) { return e_R(t) * R; });
        double worst_energy = 0.0, worst_slope = 0.0;
        for (double eps : {1.0, 1.2, std::sqrt(2.0), 2.0}) {
            worst_energy = std::max(worst_energy, rel(buckling_energy(grid, id, eps), kPi * (eps + 1.0 / eps)));
            const TwistProfile tp = identity_twist(eps);
            for (double R : {0.1, 0.37, 0.5, 0.9, 1.0})
                worst_slope = std::max(worst_slope, std::abs(twist_pressure_slope(tp, R) + p_eps(eps)));
        }
        r.pass = worst_energy < 1e-6 && worst_slope < 1e-12;
        r.detail = fmt("D_eps(Id) vs pi(eps+1/eps): max rel %.2e; slope(k=0) + p_eps: max %.2e", worst_energy, worst_slope);
    });
}

CheckResult check_identity_ground_truth() {
    return timed(4, "M=1 ground truth", [](CheckResult& r) {
        const RhoSpec rho = build_rho(1.0, 1.0, 0.0);
        const double exact = kPi * (1.0 + rho_eval(rho, 1.0).rho);
        const BvpSolution sol = solve_bvp(1, rho);
        const double bvp_sup = sup_distance(sol.profile.r, sol.profile.grid);
        const double bvp_gap = rel(radial_energy(sol.profile, rho).total, exact);
        double min_sup = 0.0, min_gap = 0.0;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            MinimizeOptions o;
            o.init = MinimizeInit::random(seed);
            const MinimizeResult m = minimize(1, rho, o);
            min_sup = std::max(min_sup, sup_distance(m.profile.r, m.profile.grid));
            min_gap = std::max(min_gap, rel(m.energy.total, exact));
        }
        r.pass = bvp_sup < 1e-3 && bvp_gap < 1e-4 && min_sup < 1e-3 && min_gap < 1e-4;
        r.detail = fmt("BVP sup|r-R| %.2e energy rel %.2e; 10 random minimizations max sup %.2e energy rel %.2e",
                       bvp_sup, bvp_gap, min_sup, min_gap);
    }, 10.0);
}

CheckResult check_bvp_invariants() {
    return timed(5, "BVP invariant suite", [](CheckResult& r) {
        int failures = 0;
        double worst_res = 0.0, worst_neg = 0.0, worst_d0 = 0.0, worst_dm = 0.0, worst_gap = 0.0;
        int worst_changes = 0;
        for (int M : {2, 3})
            for (double gamma : {0.25, 0.5, 2.0})
                for (double delay : {0.0, 0.5}) {
                    const RhoSpec rho = build_rho(gamma, 1.0, delay);
                    const BvpSolution sol = solve_bvp(M, rho);
                    const RadialProfile& p = sol.profile;
                    const BvpDiagnostics& g = sol.diag;
                    double neg = 0.0;
                    for (std::size_t i = 0; i < p.grid.size(); ++i)
                        neg = std::min({neg, p.r[i], p.dr[i], g.d[i], g.ddot[i]});
                    const int changes = sign_changes(g.zdot, 1e-10);
                    const double dm = g.lift_off.delayed() ? 0.0 : std::abs(g.DM_estimate - M) / M;
                    const double e_bvp = radial_energy(p, rho).total;
                    const double e_min = minimize(M, rho).energy.total;
                    const double gap = std::abs(e_min - e_bvp) / e_bvp;
                    const bool ok = g.residual_sup < 1e-6 && neg >= -1e-8 && g.d.front() <= 1e-4 && changes <= 1 &&
                                    dm <= 0.05 && gap < 1e-3;
                    if (!ok) ++failures;
                    worst_res = std::max(worst_res, g.residual_sup);
                    worst_neg = std::min(worst_neg, neg);
                    worst_d0 = std::max(worst_d0, g.d.front());
                    worst_changes = std::max(worst_changes, changes);
                    worst_dm = std::max(worst_dm, dm);
                    worst_gap = std::max(worst_gap, gap);
                }
        r.pass = failures == 0;
        r.detail = fmt("12 cases, %d failing; max residual %.2e, min of r,dr,d,ddot %.2e, max d(eps0) %.2e, max zdot sign changes %d, max |D_M-M|/M %.2e, max energy gap %.2e",
                       failures, worst_res, worst_neg, worst_d0, worst_changes, worst_dm, worst_gap);
    });
}

CheckResult check_delayed_structure() {
    return timed(6, "delayed-rho structure", [](CheckResult& r) {
        double worst_fit = 0.0, worst_c1 = 0.0;
        for (int M : {2, 3})
            for (double gamma : {0.25, 0.5, 2.0}) {
                const RhoSpec rho = build_rho(gamma, 1.0, 0.5);
                const DelayedFit fit = fit_delayed_power_law(solve_bvp(M, rho).profile, rho);
                worst_fit = std::max(worst_fit, fit.fit_rel_error);
                worst_c1 = std::max(worst_c1, fit.c1_mismatch);
            }
        r.pass = worst_fit < 1e-4 && worst_c1 < 1e-5;
        r.detail = fmt("a(R/delta)^M fit over 6 solves: max rel error %.2e, max C1 mismatch %.2e", worst_fit, worst_c1);
    });
}

CheckResult check_fourier_estimates() {
    return timed(7, "Fourier estimates", [](CheckResult& r) {
        std::mt19937_64 rng(5);
        const PolarGrid grid(8, 12, 64);
        const int J = 8;
        double worst_mode = 0.0;
        for (int j = 1; j <= J; ++j) {
            DiskField f = DiskField::zeros(grid, J);
            f.A[j] = random_mode_profile(grid, j, rng);
            f.B[j] = random_mode_profile(grid, j, rng);
            const WeightedNorms w = weighted_norms(f);
            worst_mode = std::max(worst_mode, rel(w.theta_norm, j * j * w.plain_norm));
        }
        bool floor_ok = true;
        double worst_margin = std::numeric_limits<double>::infinity();
        for (int n : {1, 2, 3, 5})
            for (int trial = 0; trial < 20; ++trial) {
                DiskField f = DiskField::zeros(grid, J);
                for (int j = 0; j <= J; ++j) {
                    f.A[j] = random_mode_profile(grid, std::max(j, 1), rng);
                    if (j > 0) f.B[j] = random_mode_profile(grid, j, rng);
                }
                const WeightedNorms w = weighted_norms(strip_low_modes(f, n));
                const double margin = w.theta_norm / w.plain_norm - n * n;
                worst_margin = std::min(worst_margin, margin);
                floor_ok = floor_ok && w.theta_norm >= n * n * w.plain_norm - 1e-8;
            }
        double worst_det = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            DiskField f = DiskField::zeros(grid, J);
            f.A[0] = random_mode_profile(grid, 0, rng);
            worst_det = std::max(worst_det, zero_mode_det_check(f));
        }
        r.pass = worst_mode < 1e-8 && floor_ok && worst_det < 1e-10;
        r.detail = fmt("per-mode theta/plain vs j^2 max rel %.2e; n^2 floor for n in {1,2,3,5} %s (min excess %.3f); zero-mode max |det| %.2e",
                       worst_mode, floor_ok ? "holds" : "violated", worst_margin, worst_det);
    });
}

CheckResult check_convexity_oracle() {
    return timed(8, "convexity oracle", [](CheckResult& r) {
        std::mt19937_64 rng(8);
        std::uniform_real_distribution<double> U(-2.0, 2.0);
        auto random_matrix = [&] { return Mat2{U(rng), U(rng), U(rng), U(rng)}; };
        double min_gap = std::numeric_limits<double>::infinity();
        for (double gamma : {0.1, 0.9, 1.0, 10.0})
            for (double delay : {0.0, 0.5}) {
                const RhoSpec rho = build_rho(gamma, 1.0, delay);
                for (int k = 0; k < 10000; ++k) min_gap = std::min(min_gap, monotonicity_gap(random_matrix(), random_matrix(), rho));
            }
        double worst_det = 0.0, worst_cof = 0.0;
        for (int k = 0; k < 10000; ++k) {
            const Mat2 A = random_matrix(), B = random_matrix();
            const DetExpansion e = det_expansion(A, B);
            worst_det = std::max(worst_det, std::abs(e.lhs - e.rhs));
            worst_cof = std::max(worst_cof, std::abs(frobenius(cofactor(A)) - frobenius(A)));
        }
        r.pass = min_gap >= -1e-10 && worst_det < 1e-12 && worst_cof < 1e-12;
        r.detail = fmt("min monotonicity gap %.3e over 8e4 pairs; det expansion max error %.2e; ||cof A|-|A|| max %.2e",
                       min_gap, worst_det, worst_cof);
    });
}

CheckResult check_threshold_arithmetic() {
    return timed(9, "threshold arithmetic", [](CheckResult& r) {
        const HfThresholds h = hf_thresholds(1.5, 1.0);
        bool relation = true;
        int first_bad = 0;
        for (int n = 1; n <= 20; ++n) {
            // smallest m with sqrt(3) m / (2 sqrt 2) >= n, i.e. 3 m^2 >= 8 n^2, in integers
            int m = 0;
            while (3 * m * m < 8 * n * n) ++m;
            if (hf_thresholds(n, 1.0).m != m) {
                relation = false;
                if (!first_bad) first_bad = n;
            }
        }
        r.pass = h.n == 2 && h.m == 3 && relation;
        r.detail = fmt("hf_thresholds(1.5, 1) = (%d, %d); m = ceil(2 sqrt2 n / sqrt3) for n <= 20: %s", h.n, h.m,
                       relation ? "all match" : fmt("first mismatch at n=%d", first_bad).c_str());
    });
}

CheckResult check_gradient_correctness() {
    return timed(10, "gradient correctness", [](CheckResult& r) {
        std::mt19937_64 rng(10);
        double worst = 0.0;
        for (int t = 0; t < 10; ++t) {
            const int M = 1 + t % 3;
            const RhoSpec rho = build_rho(0.5 + t * 0.2, 1.0, (t % 2) ? 0.5 : 0.0);
            const RadialProfile p = random_profile(M, rng);
            const std::vector<double> g = discrete_gradient(p, rho);
            for (std::size_t i = 0; i < p.r.size(); ++i) {
                auto E = [&](double dx) {
                    RadialProfile q = p;
                    q.r[i] += dx;
                    return radial_energy(q, rho, Reconstruction::PiecewiseLinear).total;
                };
                // keep the extrapolation with the smallest error estimate over a few starting steps
                double fd = 0.0, best = std::numeric_limits<double>::infinity();
                for (double H : {1e-1, 3e-2, 1e-2, 3e-3, 1e-3}) {
                    const Extrapolated d = ridders_derivative(E, H * p.grid[i]);
                    if (d.error < best) best = d.error, fd = d.value;
                }
                worst = std::max(worst, std::abs(fd - g[i]) / std::abs(g[i]));
            }
        }
        r.pass = worst < 1e-6;
        r.detail = fmt("max per-node relative error vs extrapolated central differences over 10 random profiles %.2e", worst);
    });
}

std::vector<CheckResult> run_acceptance_suite() {
    std::vector<CheckResult> out;
    out.push_back(check_counterexample_energy());
    out.push_back(check_pressure_closed_form());
    out.push_back(check_buckling_identity());
    out.push_back(check_identity_ground_truth());
    out.push_back(check_bvp_invariants());
    out.push_back(check_delayed_structure());
    out.push_back(check_fourier_estimates());
    out.push_back(check_convexity_oracle());
    out.push_back(check_threshold_arithmetic());
    out.push_back(check_gradient_correctness());
    return out;
}

std::string format_check_line(const CheckResult& r) {
    return fmt("%s [%d] %s (%.2fs): ", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds) + r.detail;
}

}  // namespace polyelast
