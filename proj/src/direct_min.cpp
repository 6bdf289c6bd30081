#include "polyelast/direct_min.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "polyelast/numerics.hpp"

namespace polyelast {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kArmijo = 1e-4;

// Nodal slopes of the piecewise-linear interpolant (averaged at interior nodes).
std::vector<double> nodal_slopes(const std::vector<double>& R, const std::vector<double>& r) {
    const std::size_t n = R.size();
    std::vector<double> s(n);
    auto cell = [&](std::size_t i) { return (r[i + 1] - r[i]) / (R[i + 1] - R[i]); };
    s[0] = 0.5 * (r[0] / R[0] + cell(0));
    for (std::size_t i = 1; i + 1 < n; ++i) s[i] = 0.5 * (cell(i - 1) + cell(i));
    s[n - 1] = cell(n - 2);
    return s;
}

RadialProfile make_profile(int M, const std::vector<double>& R, const std::vector<double>& r) {
    RadialProfile p;
    p.M = M;
    p.grid = R;
    p.r = r;
    p.dr = nodal_slopes(R, r);
    return p;
}

// Tridiagonal Hessian of 2π ∫ ½(ṙ² + M² r²/R²) R dR over the free nodes 0..n-2.
struct Stiffness {
    std::vector<double> diag, off;
};

Stiffness dirichlet_stiffness(int M, const std::vector<double>& R) {
    const std::size_t n = R.size();
    const GaussRule g = gauss_legendre(kLinearGaussPoints);
    Stiffness K{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
    const double M2 = static_cast<double>(M) * M;
    for (int q = 0; q < kLinearGaussPoints; ++q) {
        const double x = 0.5 * R[0] * (g.nodes[q] + 1.0);
        const double w = 0.5 * R[0] * g.weights[q];
        const double phi = x / R[0], dphi = 1.0 / R[0];
        K.diag[0] += w * (dphi * dphi + M2 * phi * phi / (x * x)) * x;
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = R[i + 1] - R[i];
        for (int q = 0; q < kLinearGaussPoints; ++q) {
            const double t = 0.5 * (g.nodes[q] + 1.0);
            const double x = R[i] + h * t;
            const double w = 0.5 * h * g.weights[q];
            const double pa = 1.0 - t, pb = t, da = -1.0 / h, db = 1.0 / h;
            K.diag[i] += w * (da * da + M2 * pa * pa / (x * x)) * x;
            K.diag[i + 1] += w * (db * db + M2 * pb * pb / (x * x)) * x;
            K.off[i] += w * (da * db + M2 * pa * pb / (x * x)) * x;
        }
    }
    for (auto& v : K.diag) v *= kTwoPi;
    for (auto& v : K.off) v *= kTwoPi;
    return K;
}

// Solves K p = g on the free nodes (Thomas algorithm); p[n-1] = 0.
std::vector<double> solve_free(const Stiffness& K, const std::vector<double>& g) {
    const std::size_t m = g.size() - 1;
    std::vector<double> c(m), d(m), p(g.size(), 0.0);
    c[0] = K.off[0] / K.diag[0];
    d[0] = g[0] / K.diag[0];
    for (std::size_t i = 1; i < m; ++i) {
        const double den = K.diag[i] - K.off[i - 1] * c[i - 1];
        c[i] = K.off[i] / den;
        d[i] = (g[i] - K.off[i - 1] * d[i - 1]) / den;
    }
    p[m - 1] = d[m - 1];
    for (std::size_t i = m - 1; i-- > 0;) p[i] = d[i] - c[i] * p[i + 1];
    return p;
}

// E(b) − E(a) for two nodal vectors on the same grid, written so that the
// difference is formed before summation: near a minimizer it is many orders
// of magnitude below E itself.
double energy_difference(int M, const RhoSpec& rho, const std::vector<double>& R, const std::vector<double>& a,
                         const std::vector<double>& b) {
    const std::size_t n = R.size();
    const double M2 = static_cast<double>(M) * M;
    const GaussRule g = gauss_legendre(kLinearGaussPoints);
    const GaussRule gl = gauss_legendre(5);
    // ρ(y) − ρ(x) as ∫ ρ' over [x, y], split at the junctions so that each
    // piece is a polynomial integrated exactly
    auto rho_diff = [&](double x, double y) {
        if (x == y) return 0.0;
        const double sign = (y > x) ? 1.0 : -1.0;
        const double lo = std::min(x, y), hi = std::max(x, y);
        double cuts[4] = {lo, 0.0, 0.0, hi};
        int nc = 1;
        for (double c : {rho.delay, rho.s0})
            if (c > lo && c < hi) cuts[nc++] = c;
        cuts[nc] = hi;
        double acc = 0.0;
        for (int k = 0; k < nc; ++k) {
            const double a = cuts[k], len = cuts[k + 1] - cuts[k];
            for (int q = 0; q < 5; ++q)
                acc += 0.5 * len * gl.weights[q] * rho_eval(rho, a + 0.5 * len * (gl.nodes[q] + 1.0)).drho;
        }
        return sign * acc;
    };
    auto point = [&](double x, double va, double da, double vb, double db) {
        const double dd = 0.5 * (db - da) * (db + da);
        const double dv = 0.5 * M2 * (vb - va) * (vb + va) / (x * x);
        return (dd + dv + rho_diff(M * va * da / x, M * vb * db / x)) * x;
    };
    double total = 0.0;
    for (int q = 0; q < kLinearGaussPoints; ++q) {
        const double x = 0.5 * R[0] * (g.nodes[q] + 1.0);
        const double w = 0.5 * R[0] * g.weights[q];
        const double da = a[0] / R[0], db = b[0] / R[0];
        total += w * point(x, da * x, da, db * x, db);
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = R[i + 1] - R[i];
        const double da = (a[i + 1] - a[i]) / h, db = (b[i + 1] - b[i]) / h;
        for (int q = 0; q < kLinearGaussPoints; ++q) {
            const double t = 0.5 * (g.nodes[q] + 1.0);
            const double x = R[i] + h * t;
            const double w = 0.5 * h * g.weights[q];
            total += w * point(x, (1 - t) * a[i] + t * a[i + 1], da, (1 - t) * b[i] + t * b[i + 1], db);
        }
    }
    return kTwoPi * total;
}

std::vector<double> initial_values(int M, const std::vector<double>& R, const MinimizeInit& init) {
    const std::size_t n = R.size();
    std::vector<double> r(n);
    switch (init.kind) {
        case MinimizeInit::Kind::Identity:
            r = R;
            break;
        case MinimizeInit::Kind::PowerLaw:
            for (std::size_t i = 0; i < n; ++i) r[i] = init.s * std::pow(R[i], M);
            break;
        case MinimizeInit::Kind::Random: {
            std::mt19937_64 gen(init.seed);
            std::uniform_real_distribution<double> u(0.0, 1.0);
            for (auto& v : r) v = u(gen);
            break;
        }
        case MinimizeInit::Kind::Warm:
            if (init.values.size() != n) throw std::invalid_argument("minimize: warm start has wrong length");
            r = init.values;
            break;
    }
    for (auto& v : r) v = std::max(v, 0.0);
    r.back() = 1.0;
    return r;
}

}  // namespace

MaxItersExceeded::MaxItersExceeded(MinimizeResult last_)
    : std::runtime_error("minimize: no convergence, gradient norm " + std::to_string(last_.grad_norm)),
      last(std::move(last_)) {}

std::vector<double> discrete_gradient(const RadialProfile& p, const RhoSpec& rho) {
    const auto& R = p.grid;
    const auto& r = p.r;
    const std::size_t n = R.size();
    if (n < 2 || r.size() != n) throw std::invalid_argument("discrete_gradient: inconsistent profile");
    const int M = p.M;
    const double M2 = static_cast<double>(M) * M;
    const GaussRule g = gauss_legendre(kLinearGaussPoints);
    std::vector<double> grad(n, 0.0);

    // d/dv of [½(ṙ² + M² v²/x²) + ρ(M v ṙ / x)] x for one nodal shape (phi, dphi)
    auto term = [&](double x, double v, double dv, double phi, double dphi) {
        const double drho = rho_eval(rho, M * v * dv / x).drho;
        return (dv * dphi + M2 * v * phi / (x * x) + drho * M * (phi * dv + v * dphi) / x) * x;
    };

    for (int q = 0; q < kLinearGaussPoints; ++q) {
        const double x = 0.5 * R[0] * (g.nodes[q] + 1.0);
        const double w = 0.5 * R[0] * g.weights[q];
        const double dv = r[0] / R[0];
        grad[0] += w * term(x, dv * x, dv, x / R[0], 1.0 / R[0]);
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = R[i + 1] - R[i];
        const double dv = (r[i + 1] - r[i]) / h;
        for (int q = 0; q < kLinearGaussPoints; ++q) {
            const double t = 0.5 * (g.nodes[q] + 1.0);
            const double x = R[i] + h * t;
            const double w = 0.5 * h * g.weights[q];
            const double v = (1.0 - t) * r[i] + t * r[i + 1];
            grad[i] += w * term(x, v, dv, 1.0 - t, -1.0 / h);
            grad[i + 1] += w * term(x, v, dv, t, 1.0 / h);
        }
    }
    for (auto& v : grad) v *= kTwoPi;
    return grad;
}

// Energy differences carry rounding noise of order this times |E|.
constexpr double kRoundoffLevel = 1e-13;

MinimizeResult minimize(int M, const RhoSpec& rho, const MinimizeOptions& opts) {
    if (M < 1) throw std::invalid_argument("minimize: M must be >= 1");
    if (opts.grid_size < 16) throw std::invalid_argument("minimize: grid_size must be >= 16");
    if (!(opts.tol_grad > 0.0)) throw std::invalid_argument("minimize: tol_grad must be positive");
    if (!(opts.step0 > 0.0)) throw std::invalid_argument("minimize: step0 must be positive");

    const std::vector<double> R = geometric_grid(opts.eps0, opts.grid_size);
    const std::size_t n = R.size();
    std::vector<double> r = initial_values(M, R, opts.init);
    const Stiffness K = dirichlet_stiffness(M, R);

    MinimizeResult res;
    double E = radial_energy(make_profile(M, R, r), rho, Reconstruction::PiecewiseLinear).total;
    double last_step = 0.0;
    for (int it = 0;; ++it) {
        RadialProfile cur = make_profile(M, R, r);
        std::vector<double> g = discrete_gradient(cur, rho);
        g.back() = 0.0;
        double gn = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            // components pushing against an active bound r_i = 0 are not descent directions
            if (r[i] == 0.0 && g[i] > 0.0) continue;
            gn = std::max(gn, std::abs(g[i]));
        }
        res.log.push_back({it, E, gn, last_step});
        res.iterations = it;
        res.grad_norm = gn;
        if (gn < opts.tol_grad) {
            res.converged = true;
            break;
        }
        if (it >= opts.max_iters) break;

        const std::vector<double> dir = opts.precondition ? solve_free(K, g) : g;
        double alpha = opts.step0;
        bool accepted = false;
        double first_decrease = 0.0;
        std::vector<double> trial(n);
        while (alpha > 1e-30) {
            double decrease = 0.0;
            for (std::size_t i = 0; i + 1 < n; ++i) {
                trial[i] = std::max(0.0, r[i] - alpha * dir[i]);
                decrease += g[i] * (trial[i] - r[i]);
            }
            trial.back() = 1.0;
            if (alpha == opts.step0) first_decrease = decrease;
            const double dE = energy_difference(M, rho, R, r, trial);
            if (decrease < 0.0 && dE <= kArmijo * decrease) {
                r.swap(trial);
                E += dE;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        last_step = alpha;
        if (!accepted) {
            // the full step promises less than energy differences can resolve:
            // stationary to working precision
            if (std::abs(first_decrease) < kRoundoffLevel * std::max(1.0, std::abs(E))) {
                res.converged = true;
                res.roundoff_stop = true;
            }
            break;
        }
    }
    res.profile = make_profile(M, R, r);
    res.energy = radial_energy(res.profile, rho, Reconstruction::PiecewiseLinear);
    if (!res.converged) throw MaxItersExceeded(std::move(res));
    return res;
}

}  // namespace polyelast
