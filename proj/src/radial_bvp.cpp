#include "polyelast/radial_bvp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "polyelast/numerics.hpp"
#include "polyelast/ode.hpp"

namespace polyelast {

namespace {

using Integrator = DormandPrince<2>;
using State = Integrator::State;

// The ODE in the logarithmic variable x = ln R with state (r, q = R ṙ):
//   r' = q,   q' = M² r − M R ρ''(d) ḋ r.
struct LogRhs {
    int M;
    const RhoSpec* rho;

    State operator()(double x, const State& y) const {
        const double R = std::exp(x);
        const double r = y[0];
        const double dr = y[1] / R;
        const double d = M * r * dr / R;
        const double dd = rho_eval(*rho, d).ddrho;
        double src = M * M * r;
        if (dd != 0.0) src -= M * R * dd * ddot_closed_form(R, r, dr, M, *rho) * r;
        return {y[1], src};
    }
};

// Smooth pieces of ρ: below the delay, on the bridge, on the affine tail.
struct RhoPiece {
    int M;
    const RhoSpec* rho;

    int operator()(double x, const State& y) const {
        const double R = std::exp(x);
        const double d = M * y[0] * y[1] / (R * R);
        if (d <= rho->delay) return 0;
        return d < rho->s0 ? 1 : 2;
    }
};

Integrator::Settings settings(double rtol, double span) {
    Integrator::Settings s;
    s.rtol = rtol;
    s.h_init = std::min(1e-2, span);
    s.h_max = 0.25;
    return s;
}

// Flow of the ODE from (R0, state0) through the increasing radii `targets`.
Integrator::Result flow(int M, const RhoSpec& rho, double R0, const RadialState& s0, const std::vector<double>& targets,
                        double rtol) {
    std::vector<double> xs(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i) xs[i] = std::log(targets[i]);
    const double x0 = std::log(R0);
    const double span = xs.empty() ? 1.0 : std::max(xs.back() - x0, 1e-12);
    return Integrator::integrate(LogRhs{M, &rho}, RhoPiece{M, &rho}, x0, State{s0.r, R0 * s0.dr}, xs, settings(rtol, span));
}

// r(1) of the seeded trajectory; +inf when the trajectory blows up.
double endpoint(int M, const RhoSpec& rho, double s, double eps0, double rtol) {
    const RadialState seed{s * std::pow(eps0, M), s * M * std::pow(eps0, M - 1)};
    const auto res = flow(M, rho, eps0, seed, {1.0}, rtol);
    if (res.diverged) return std::numeric_limits<double>::infinity();
    return res.states.back()[0];
}

double endpoint_from(int M, const RhoSpec& rho, double delta, double slope, double rtol) {
    const auto res = flow(M, rho, delta, {0.0, slope}, {1.0}, rtol);
    if (res.diverged) return std::numeric_limits<double>::infinity();
    return res.states.back()[0];
}

void check_profile(const RadialProfile& p) {
    if (p.M < 1) throw std::invalid_argument("profile: winding M must be >= 1");
    if (p.grid.size() < 2 || p.r.size() != p.grid.size() || p.dr.size() != p.grid.size())
        throw std::invalid_argument("profile: grid, r and dr must have equal length >= 2");
    if (!(p.grid.front() > 0.0)) throw std::invalid_argument("profile: radii must be positive");
    for (std::size_t i = 1; i < p.grid.size(); ++i)
        if (!(p.grid[i] > p.grid[i - 1])) throw std::invalid_argument("profile: radii must increase strictly");
}

}  // namespace

std::string to_string(LiftOff::Kind k) { return k == LiftOff::Kind::Immediate ? "Immediate" : "Delayed"; }

Diverged::Diverged(double s_) : std::runtime_error("integration diverged for seed amplitude " + std::to_string(s_)), s(s_) {}

NoBracket::NoBracket(double s_max_, DelayedSearch search_)
    : std::runtime_error("no bracket: r_s(1) < 1 for all s up to " + std::to_string(s_max_)),
      s_max(s_max_),
      search(std::move(search_)) {}

ResidualTooLarge::ResidualTooLarge(double residual_, BvpSolution solution_)
    : std::runtime_error("ODE residual " + std::to_string(residual_) + " above tolerance"),
      residual(residual_),
      solution(std::move(solution_)) {}

double ddot_closed_form(double R, double r, double dr, int M, const RhoSpec& rho) {
    const double d = M * r * dr / R;
    const double dd = rho_eval(rho, d).ddrho;
    const double a = R * dr - r;
    const double num = M * (a * a + (M * M - 1.0) * r * r);
    const double den = R * R * R + M * M * dd * r * r * R;
    return num / den;
}

double ode_rhs(double R, double r, double dr, int M, const RhoSpec& rho) {
    const double d = M * r * dr / R;
    const double dd = rho_eval(rho, d).ddrho;
    double coupling = 0.0;
    if (dd != 0.0) coupling = M * dd * ddot_closed_form(R, r, dr, M, rho) * r;
    return (M * M * r / R - dr - coupling) / R;
}

RadialProfile shoot(int M, const RhoSpec& rho, double s, double eps0, int n_steps, double rtol) {
    if (M < 1) throw std::invalid_argument("shoot: M must be >= 1");
    if (!(s >= 0.0)) throw std::invalid_argument("shoot: seed amplitude must be non-negative");
    if (!(eps0 > 0.0 && eps0 < 1.0)) throw std::invalid_argument("shoot: eps0 must lie in (0,1)");
    RadialProfile p;
    p.M = M;
    p.grid = geometric_grid(eps0, n_steps);
    const RadialState seed{s * std::pow(eps0, M), s * M * std::pow(eps0, M - 1)};
    std::vector<double> targets(p.grid.begin() + 1, p.grid.end());
    const auto res = flow(M, rho, eps0, seed, targets, rtol);
    if (res.diverged) throw Diverged(s);
    p.r.resize(p.grid.size());
    p.dr.resize(p.grid.size());
    p.r[0] = seed.r;
    p.dr[0] = seed.dr;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        p.r[i + 1] = res.states[i][0];
        p.dr[i + 1] = res.states[i][1] / targets[i];
    }
    return p;
}

BvpSolution solve_bvp(int M, const RhoSpec& rho, const BvpOptions& opts) {
    if (M < 1) throw std::invalid_argument("solve_bvp: M must be >= 1");
    if (!(opts.eps0 > 0.0 && opts.eps0 < 1.0)) throw std::invalid_argument("solve_bvp: eps0 must lie in (0,1)");
    if (opts.grid_size < 16) throw std::invalid_argument("solve_bvp: grid_size must be >= 16");

    int shots = 0;
    auto value = [&](double s) {
        ++shots;
        return endpoint(M, rho, s, opts.eps0, opts.rtol);
    };

    double lo = 0.0;
    double hi = 1.0;
    double v_hi = value(hi);
    while (v_hi < 1.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > opts.s_max_limit) {
            std::vector<double> deltas;
            for (int k = 1; k < 20; ++k) deltas.push_back(0.05 * k);
            throw NoBracket(opts.s_max_limit, delayed_liftoff_search(M, rho, deltas, opts.rtol));
        }
        v_hi = value(hi);
    }
    double v_lo = (lo == 0.0) ? 0.0 : value(lo);
    while (hi - lo > std::max(opts.s_tol, 4.0 * std::numeric_limits<double>::epsilon() * hi)) {
        const double mid = 0.5 * (lo + hi);
        const double v = value(mid);
        if (v < 1.0) {
            lo = mid;
            v_lo = v;
        } else {
            hi = mid;
            v_hi = v;
        }
    }
    double s_star = (std::abs(v_hi - 1.0) < std::abs(v_lo - 1.0)) ? hi : lo;
    // One secant step inside the bracket removes the bisection floor.
    if (std::isfinite(v_hi) && v_hi > v_lo) {
        const double sec = lo + (1.0 - v_lo) * (hi - lo) / (v_hi - v_lo);
        if (sec > lo && sec < hi) s_star = sec;
    }

    BvpSolution sol;
    sol.profile = shoot(M, rho, s_star, opts.eps0, opts.grid_size, opts.rtol);
    sol.s_star = s_star;
    sol.shots = shots + 1;
    sol.diag = diagnostics(sol.profile, rho, opts.liftoff_tol);
    if (!(sol.diag.residual_sup < opts.tol_residual)) throw ResidualTooLarge(sol.diag.residual_sup, std::move(sol));
    return sol;
}

BvpDiagnostics diagnostics(const RadialProfile& p, const RhoSpec& rho, double liftoff_tol) {
    check_profile(p);
    const std::size_t n = p.grid.size();
    const int M = p.M;
    BvpDiagnostics g;
    g.d.resize(n);
    g.ddot.resize(n);
    g.z.resize(n);
    g.zdot.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double R = p.grid[i], r = p.r[i], dr = p.dr[i];
        g.d[i] = M * r * dr / R;
        g.ddot[i] = ddot_closed_form(R, r, dr, M, rho);
        g.z[i] = 0.5 * dr * dr + 0.5 * M * M * r * r / (R * R) + f_aux(rho, g.d[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double R = p.grid[i], r = p.r[i];
        if (r > 1e-10) {
            const double w = R * p.dr[i] / r;
            g.zdot[i] = -(r * r / (R * R * R)) * (w * w - 2.0 * M * M * w + M * M);
        } else {
            const std::size_t a = (i == 0) ? 0 : i - 1;
            const std::size_t b = (i + 1 == n) ? i : i + 1;
            g.zdot[i] = (g.z[b] - g.z[a]) / (p.grid[b] - p.grid[a]);
        }
    }
    g.DM_estimate = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (p.r[i] > liftoff_tol) {
            g.DM_estimate = p.grid[i] * p.dr[i] / p.r[i];
            break;
        }
    }
    g.lift_off = classify_liftoff(p, liftoff_tol);
    g.rho_lift_off = classify_rho_liftoff(p, rho);
    g.residual_sup = ode_residual(p, rho);
    return g;
}

LiftOff classify_liftoff(const RadialProfile& p, double tol) {
    check_profile(p);
    long k = -1;
    for (std::size_t i = 0; i < p.grid.size(); ++i) {
        if (std::abs(p.r[i]) < tol * std::pow(p.grid[i], p.M))
            k = static_cast<long>(i);
        else
            break;
    }
    if (k < 1) return {LiftOff::Kind::Immediate, 0.0};
    return {LiftOff::Kind::Delayed, p.grid[k]};
}

LiftOff classify_rho_liftoff(const RadialProfile& p, const RhoSpec& rho) {
    check_profile(p);
    const std::size_t n = p.grid.size();
    auto d_at = [&](std::size_t i) { return p.M * p.r[i] * p.dr[i] / p.grid[i]; };
    long k = -1;
    for (std::size_t i = 0; i < n; ++i) {
        if (d_at(i) <= rho.delay)
            k = static_cast<long>(i);
        else
            break;
    }
    if (k < 1) return {LiftOff::Kind::Immediate, 0.0};
    if (static_cast<std::size_t>(k) + 1 == n) return {LiftOff::Kind::Delayed, 1.0};
    const double d0 = d_at(k), d1 = d_at(k + 1);
    const double t = (d1 > d0) ? (rho.delay - d0) / (d1 - d0) : 0.0;
    return {LiftOff::Kind::Delayed, p.grid[k] + t * (p.grid[k + 1] - p.grid[k])};
}

double ode_residual(const RadialProfile& p, const RhoSpec& rho) {
    check_profile(p);
    double sup = 0.0;
    for (std::size_t i = 0; i + 1 < p.grid.size(); ++i) {
        const double R0 = p.grid[i], R1 = p.grid[i + 1];
        const auto res = flow(p.M, rho, R0, {p.r[i], p.dr[i]}, {R1}, 1e-12);
        if (res.diverged) return std::numeric_limits<double>::infinity();
        const State& y = res.states.back();
        const double dx = std::log(R1 / R0);
        const double defect = std::max(std::abs(y[0] - p.r[i + 1]), std::abs(y[1] - R1 * p.dr[i + 1]));
        sup = std::max(sup, defect / (dx * std::sqrt(R0 * R1)));
    }
    return sup;
}

std::vector<RadialState> evaluate_solution(const RadialProfile& p, const RhoSpec& rho, const std::vector<double>& radii,
                                           double rtol) {
    check_profile(p);
    std::vector<RadialState> out;
    out.reserve(radii.size());
    const double R0 = p.grid.front();
    std::vector<double> ahead;
    for (double R : radii) {
        if (R < R0) {
            // below the first node the trajectory follows the kernel power law
            const double D = (p.r[0] != 0.0) ? R0 * p.dr[0] / p.r[0] : 0.0;
            const double r = p.r[0] * std::pow(R / R0, D);
            out.push_back({r, (R > 0.0) ? D * r / R : 0.0});
        } else {
            ahead.push_back(R);
        }
    }
    if (!ahead.empty()) {
        const auto res = flow(p.M, rho, R0, {p.r[0], p.dr[0]}, ahead, rtol);
        if (res.diverged) throw Diverged(p.r[0]);
        for (std::size_t i = 0; i < ahead.size(); ++i) out.push_back({res.states[i][0], res.states[i][1] / ahead[i]});
    }
    return out;
}

double rescale_check(const RadialProfile& p, const RhoSpec& rho, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("rescale_check: eps must lie in (0,1)");
    check_profile(p);
    std::vector<double> keep;
    std::vector<double> sources;
    for (double R : p.grid) {
        if (eps * R >= p.grid.front()) {
            keep.push_back(R);
            sources.push_back(eps * R);
        }
    }
    if (keep.size() < 2) throw std::invalid_argument("rescale_check: no overlapping grid");
    const auto states = evaluate_solution(p, rho, sources);
    RadialProfile q;
    q.M = p.M;
    q.grid = keep;
    q.r.resize(keep.size());
    q.dr.resize(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) {
        q.r[i] = states[i].r / eps;
        q.dr[i] = states[i].dr;
    }
    return ode_residual(q, rho);
}

ZRootBounds z_root_bounds(int M) {
    const double root = M * std::sqrt(static_cast<double>(M) * M - 1.0);
    return {M * M - root, M * M + root};
}

bool z_interval_bound_check(const RadialProfile& p, const BvpDiagnostics& diag) {
    if (p.M < 2) throw std::invalid_argument("z_interval_bound_check: M must be >= 2");
    const auto [lo, hi] = z_root_bounds(p.M);
    const double slack = 1e-6;
    bool started = false;
    for (std::size_t i = 0; i < p.grid.size(); ++i) {
        if (!started) {
            if (p.r[i] > 1e-8) started = true;
            else continue;
        }
        if (diag.zdot[i] < 0.0) break;
        const double w = p.grid[i] * p.dr[i] / p.r[i];
        if (w < lo - slack || w > hi + slack) return false;
    }
    return true;
}

int sign_changes(const std::vector<double>& v, double tol) {
    int changes = 0;
    int last = 0;
    for (double x : v) {
        if (std::abs(x) <= tol) continue;
        const int s = x > 0 ? 1 : -1;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

DelayedFit fit_delayed_power_law(const RadialProfile& p, const RhoSpec& rho) {
    check_profile(p);
    if (!(rho.delay > 0.0)) throw std::invalid_argument("fit_delayed_power_law: rho has no delay");
    const std::size_t n = p.grid.size();
    auto d_at = [&](double R, double r, double dr) { return p.M * r * dr / R; };
    std::size_t k = 0;
    while (k + 1 < n && d_at(p.grid[k + 1], p.r[k + 1], p.dr[k + 1]) <= rho.delay) ++k;
    if (k + 1 >= n || d_at(p.grid[k], p.r[k], p.dr[k]) > rho.delay)
        throw std::invalid_argument("fit_delayed_power_law: d never crosses the delay inside the grid");

    // locate δ with d(δ) = delay by bisection on the flow out of node k
    const RadialState start{p.r[k], p.dr[k]};
    double a = p.grid[k], b = p.grid[k + 1];
    RadialState at_delta = start;
    for (int it = 0; it < 60 && b - a > 1e-15 * b; ++it) {
        const double mid = 0.5 * (a + b);
        const auto res = flow(p.M, rho, p.grid[k], start, {mid}, 1e-12);
        const RadialState s{res.states.back()[0], res.states.back()[1] / mid};
        if (d_at(mid, s.r, s.dr) <= rho.delay) {
            a = mid;
            at_delta = s;
        } else {
            b = mid;
        }
    }
    DelayedFit fit;
    fit.delta = a;
    if (a > p.grid[k]) {
        const auto res = flow(p.M, rho, p.grid[k], start, {a}, 1e-12);
        at_delta = {res.states.back()[0], res.states.back()[1] / a};
    }

    // least squares for ln a over the nodes below δ
    double acc = 0.0;
    int m = 0;
    for (std::size_t i = 0; i <= k; ++i) {
        if (p.r[i] <= 0.0) continue;
        acc += std::log(p.r[i]) - p.M * std::log(p.grid[i] / fit.delta);
        ++m;
    }
    if (m == 0) throw std::invalid_argument("fit_delayed_power_law: no positive samples below delta");
    fit.fit_nodes = m;
    fit.a = std::exp(acc / m);
    double err = 0.0;
    for (std::size_t i = 0; i <= k; ++i) {
        if (p.r[i] <= 0.0) continue;
        const double model = fit.a * std::pow(p.grid[i] / fit.delta, p.M);
        err = std::max(err, std::abs(p.r[i] - model) / p.r[i]);
    }
    fit.fit_rel_error = err;
    const double left_value = fit.a;
    const double left_slope = fit.a * p.M / fit.delta;
    fit.c1_mismatch = std::max(std::abs(left_value - at_delta.r), std::abs(left_slope - at_delta.dr));
    return fit;
}

DelayedSearch delayed_liftoff_search(int M, const RhoSpec& rho, const std::vector<double>& deltas, double rtol) {
    DelayedSearch out;
    double best = std::numeric_limits<double>::infinity();
    for (double delta : deltas) {
        if (!(delta > 0.0 && delta < 1.0)) continue;
        DelayedCandidate c{delta, 0.0, false};
        double lo = 0.0, hi = 1.0;
        double v = endpoint_from(M, rho, delta, hi, rtol);
        while (v < 1.0 && hi < 1048576.0) {
            lo = hi;
            hi *= 2.0;
            v = endpoint_from(M, rho, delta, hi, rtol);
        }
        if (v >= 1.0) {
            c.bracketed = true;
            while (hi - lo > 1e-12 * std::max(1.0, hi)) {
                const double mid = 0.5 * (lo + hi);
                if (endpoint_from(M, rho, delta, mid, rtol) < 1.0) lo = mid;
                else hi = mid;
            }
            c.slope = 0.5 * (lo + hi);
            if (c.slope < best) {
                best = c.slope;
                out.best_delta = delta;
                out.best_slope = c.slope;
            }
        }
        out.candidates.push_back(c);
    }
    // a genuine delayed solution needs ṙ(δ⁺) = 0 to join r ≡ 0 in C¹
    out.found = std::isfinite(best) && best < 1e-6;
    return out;
}

}  // namespace polyelast
