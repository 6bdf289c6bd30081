#include "polyelast/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace polyelast {

namespace {

// Legendre polynomial P_n and its derivative at x.
void legendre(int n, double x, double& p, double& dp) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    p = p1;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
}

}  // namespace

GaussRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
    if (n == 1) return {{0.0}, {2.0}};
    GaussRule g;
    g.nodes.resize(n);
    g.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double p = 0.0, dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            legendre(n, x, p, dp);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        legendre(n, x, p, dp);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        g.nodes[i] = -x;
        g.nodes[n - 1 - i] = x;
        g.weights[i] = w;
        g.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) g.nodes[n / 2] = 0.0;
    return g;
}

std::vector<double> geometric_grid(double r0, int n) {
    if (!(r0 > 0.0 && r0 < 1.0)) throw std::invalid_argument("geometric_grid: r0 must lie in (0,1)");
    if (n < 2) throw std::invalid_argument("geometric_grid: need at least two nodes");
    std::vector<double> g(n);
    const double lr = std::log(r0);
    for (int i = 0; i < n; ++i) g[i] = std::exp(lr * (1.0 - static_cast<double>(i) / (n - 1)));
    g.back() = 1.0;
    return g;
}

std::vector<double> fd_weights(double x0, const std::vector<double>& xs, int m) {
    const int n = static_cast<int>(xs.size());
    // c[j][k]: weight of xs[j] for the k-th derivative
    std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
    double c1 = 1.0;
    double c4 = xs[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = xs[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = xs[i] - xs[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (int j = 0; j < n; ++j) w[j] = c[j][m];
    return w;
}

RadialQuadrature::RadialQuadrature(int n_cells, int order, double a, double b)
    : n_cells_(n_cells), order_(order), a_(a), b_(b) {
    if (n_cells < 1 || order < 2) throw std::invalid_argument("RadialQuadrature: need >=1 cell and >=2 points");
    if (!(b > a)) throw std::invalid_argument("RadialQuadrature: empty interval");
    const GaussRule g = gauss_legendre(order);
    const double h = (b - a) / n_cells;
    nodes_.reserve(static_cast<std::size_t>(n_cells) * order);
    weights_.reserve(nodes_.capacity());
    for (int c = 0; c < n_cells; ++c) {
        const double left = a + c * h;
        for (int k = 0; k < order; ++k) {
            nodes_.push_back(left + 0.5 * h * (g.nodes[k] + 1.0));
            weights_.push_back(0.5 * h * g.weights[k]);
        }
    }
    // Lagrange differentiation on the reference nodes, barycentric form.
    std::vector<double> bw(order, 1.0);
    for (int i = 0; i < order; ++i)
        for (int j = 0; j < order; ++j)
            if (i != j) bw[i] /= (g.nodes[i] - g.nodes[j]);
    diff_.assign(static_cast<std::size_t>(order) * order, 0.0);
    for (int i = 0; i < order; ++i) {
        double diag = 0.0;
        for (int j = 0; j < order; ++j) {
            if (i == j) continue;
            const double v = (bw[j] / bw[i]) / (g.nodes[i] - g.nodes[j]);
            diff_[i * order + j] = v;
            diag -= v;
        }
        diff_[i * order + i] = diag;
    }
    // map reference derivative to physical cells
    for (double& v : diff_) v *= 2.0 / h;
}

void RadialQuadrature::differentiate_strided(const double* values, std::size_t stride, double* out,
                                             std::size_t out_stride) const {
    for (int c = 0; c < n_cells_; ++c) {
        const std::size_t base = static_cast<std::size_t>(c) * order_;
        for (int i = 0; i < order_; ++i) {
            double s = 0.0;
            for (int j = 0; j < order_; ++j) s += diff_[i * order_ + j] * values[(base + j) * stride];
            out[(base + i) * out_stride] = s;
        }
    }
}

std::vector<double> RadialQuadrature::differentiate(const std::vector<double>& values) const {
    if (values.size() != nodes_.size()) throw std::invalid_argument("differentiate: size mismatch");
    std::vector<double> out(values.size());
    differentiate_strided(values.data(), 1, out.data(), 1);
    return out;
}

PeriodicDifferentiator::PeriodicDifferentiator(int n) : n_(n), row_(n, 0.0) {
    if (n < 2) throw std::invalid_argument("PeriodicDifferentiator: need at least two samples");
    const double h = 2.0 * std::numbers::pi / n;
    for (int m = 1; m < n; ++m) {
        const double sign = (m % 2 == 0) ? 1.0 : -1.0;
        const double half = 0.5 * m * h;
        row_[m] = (n % 2 == 0) ? 0.5 * sign / std::tan(half) : 0.5 * sign / std::sin(half);
    }
}

void PeriodicDifferentiator::apply(const double* in, std::size_t in_stride, double* out,
                                   std::size_t out_stride) const {
    // out_i = sum_m row_[m] * in_{i-m}
    for (int i = 0; i < n_; ++i) {
        double s = 0.0;
        for (int m = 1; m < n_; ++m) {
            int j = i - m;
            if (j < 0) j += n_;
            s += row_[m] * in[static_cast<std::size_t>(j) * in_stride];
        }
        out[static_cast<std::size_t>(i) * out_stride] = s;
    }
}

std::vector<double> PeriodicDifferentiator::apply(const std::vector<double>& in) const {
    if (static_cast<int>(in.size()) != n_) throw std::invalid_argument("PeriodicDifferentiator: size mismatch");
    std::vector<double> out(n_);
    apply(in.data(), 1, out.data(), 1);
    return out;
}

Extrapolated ridders_derivative(const std::function<double(double)>& f, double h) {
    constexpr int kTable = 10;
    constexpr double kShrink = 1.4, kShrink2 = kShrink * kShrink;
    const double noise = std::numeric_limits<double>::epsilon() * std::abs(f(0.0));
    double a[kTable][kTable];
    Extrapolated out;
    a[0][0] = (f(h) - f(-h)) / (2.0 * h);
    for (int i = 1; i < kTable; ++i) {
        h /= kShrink;
        a[0][i] = (f(h) - f(-h)) / (2.0 * h);
        double fac = kShrink2;
        for (int j = 1; j <= i; ++j) {
            a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1.0);
            fac *= kShrink2;
            const double e = std::max({std::abs(a[j][i] - a[j - 1][i]), std::abs(a[j][i] - a[j - 1][i - 1]), noise / h});
            if (e <= out.error) out = {a[j][i], e};
        }
        if (std::abs(a[i][i] - a[i - 1][i - 1]) >= 2.0 * out.error) break;
    }
    return out;
}

}  // namespace polyelast
