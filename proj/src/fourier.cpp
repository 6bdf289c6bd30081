#include "polyelast/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <stdexcept>

namespace polyelast {

namespace {

std::vector<double> component(const std::vector<Vec2>& v, bool y) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = y ? v[i].y : v[i].x;
    return out;
}

// ∫₀¹ g(R) R dR with the mesh's radial rule.
double radial_integral(const PolarGrid& grid, const std::vector<double>& g) {
    double s = 0.0;
    for (std::size_t i = 0; i < grid.n_radial(); ++i) s += grid.radial.weights()[i] * grid.R(i) * g[i];
    return s;
}

double max_coefficient(const DiskField& f, int j) {
    double m = 0.0;
    for (std::size_t i = 0; i < f.grid.n_radial(); ++i)
        m = std::max({m, std::abs(f.A[j][i].x), std::abs(f.A[j][i].y), std::abs(f.B[j][i].x), std::abs(f.B[j][i].y)});
    return m;
}

// Modes below roundoff relative to the largest coefficient count as absent.
bool mode_present(const DiskField& f, int j) {
    double scale = 0.0;
    for (int k = 0; k <= f.Jmax; ++k) scale = std::max(scale, max_coefficient(f, k));
    const double m = max_coefficient(f, j);
    return m > 0.0 && m > 1e-12 * scale;
}

WeightedNorms norms_of(const DiskField& f, int j_lo, int j_hi) {
    const PolarGrid& g = f.grid;
    const double dth = 2.0 * std::numbers::pi / g.n_theta;
    double tn = 0.0, pn = 0.0;
    for (std::size_t i = 0; i < g.n_radial(); ++i) {
        double ring_t = 0.0, ring_p = 0.0;
        for (int k = 0; k < g.n_theta; ++k) {
            const double t = g.theta(k);
            Vec2 v, dv;
            for (int j = j_lo; j <= j_hi; ++j) {
                const double c = std::cos(j * t), s = std::sin(j * t);
                v += f.A[j][i] * c + f.B[j][i] * s;
                dv += (f.B[j][i] * c - f.A[j][i] * s) * static_cast<double>(j);
            }
            ring_t += norm2(dv);
            ring_p += norm2(v);
        }
        const double w = g.radial.weights()[i] * g.R(i) * dth / (g.R(i) * g.R(i));
        tn += w * ring_t;
        pn += w * ring_p;
    }
    return {tn, pn};
}

}  // namespace

DiskField DiskField::zeros(const PolarGrid& grid, int Jmax) {
    if (Jmax < 0) throw std::invalid_argument("DiskField: Jmax must be >= 0");
    DiskField f;
    f.grid = grid;
    f.Jmax = Jmax;
    f.A.assign(Jmax + 1, std::vector<Vec2>(grid.n_radial()));
    f.B.assign(Jmax + 1, std::vector<Vec2>(grid.n_radial()));
    f.alias_risk = 4 * Jmax > grid.n_theta;
    return f;
}

Vec2 DiskField::value(std::size_t i, double theta) const {
    Vec2 v = A[0][i] * 0.5;
    for (int j = 1; j <= Jmax; ++j) v += A[j][i] * std::cos(j * theta) + B[j][i] * std::sin(j * theta);
    return v;
}

Vec2 DiskField::d_theta(std::size_t i, double theta) const {
    Vec2 v;
    for (int j = 1; j <= Jmax; ++j) v += (B[j][i] * std::cos(j * theta) - A[j][i] * std::sin(j * theta)) * static_cast<double>(j);
    return v;
}

DiskField decompose(const PolarGrid& grid, const VectorField& samples, int Jmax) {
    if (samples.size() != grid.size()) throw std::invalid_argument("decompose: size mismatch");
    if (2 * Jmax >= grid.n_theta) throw std::invalid_argument("decompose: Jmax at or beyond the angular Nyquist limit");
    DiskField f = DiskField::zeros(grid, Jmax);
    const double scale = 2.0 / grid.n_theta;  // (1/π) · (2π / n_theta)
    for (std::size_t i = 0; i < grid.n_radial(); ++i)
        for (int j = 0; j <= Jmax; ++j) {
            Vec2 a, b;
            for (int k = 0; k < grid.n_theta; ++k) {
                const double t = grid.theta(k);
                const Vec2& v = samples[grid.index(i, k)];
                a += v * std::cos(j * t);
                if (j > 0) b += v * std::sin(j * t);
            }
            f.A[j][i] = a * scale;
            f.B[j][i] = b * scale;
        }
    return f;
}

VectorField reconstruct(const DiskField& f) {
    VectorField out(f.grid.size());
    for (std::size_t i = 0; i < f.grid.n_radial(); ++i)
        for (int k = 0; k < f.grid.n_theta; ++k) out[f.grid.index(i, k)] = f.value(i, f.grid.theta(k));
    return out;
}

WeightedNorms weighted_norms(const DiskField& f) {
    if (mode_present(f, 0)) throw std::invalid_argument("weighted_norms: the 0-mode must be stripped first");
    return norms_of(f, 1, f.Jmax);
}

DiskField strip_low_modes(const DiskField& f, int n, bool keep_zero) {
    if (n < 0) throw std::invalid_argument("strip_low_modes: n must be >= 0");
    DiskField out = f;
    for (int j = 0; j <= f.Jmax && j < n; ++j) {
        if (j == 0 && keep_zero) continue;
        std::fill(out.A[j].begin(), out.A[j].end(), Vec2{});
        std::fill(out.B[j].begin(), out.B[j].end(), Vec2{});
    }
    return out;
}

double zero_mode_det_check(const DiskField& f) {
    for (int j = 1; j <= f.Jmax; ++j)
        if (mode_present(f, j)) throw std::invalid_argument("zero_mode_det_check: field carries modes j >= 1");
    VectorField eta(f.grid.size());
    for (std::size_t i = 0; i < f.grid.n_radial(); ++i)
        for (int k = 0; k < f.grid.n_theta; ++k) eta[f.grid.index(i, k)] = f.A[0][i] * 0.5;
    double worst = 0.0;
    for (const Mat2& G : gradient(f.grid, eta)) worst = std::max(worst, std::abs(G.det()));
    return worst;
}

ParsevalCheck parseval_gradient_check(const DiskField& f) {
    const PolarGrid& g = f.grid;
    ParsevalCheck out{0.0, 0.0};
    ScalarField dens(g.size());
    const MatrixField G = gradient(g, reconstruct(f));
    for (std::size_t k = 0; k < G.size(); ++k) dens[k] = frob_dot(G[k], G[k]);
    out.lhs = integrate(g, dens);

    // per mode: ∫ over θ done in closed form, radial derivatives from the mesh
    const std::size_t nr = g.n_radial();
    for (int j = 0; j <= f.Jmax; ++j) {
        std::vector<double> integrand(nr, 0.0);
        for (bool y : {false, true}) {
            const std::vector<double> a = component(f.A[j], y), b = component(f.B[j], y);
            const std::vector<double> da = g.radial.differentiate(a), db = g.radial.differentiate(b);
            for (std::size_t i = 0; i < nr; ++i) {
                if (j == 0) {
                    integrand[i] += 2.0 * std::numbers::pi * 0.25 * da[i] * da[i];
                } else {
                    const double R = g.R(i);
                    integrand[i] += std::numbers::pi * (da[i] * da[i] + db[i] * db[i] +
                                                        j * j * (a[i] * a[i] + b[i] * b[i]) / (R * R));
                }
            }
        }
        out.rhs += radial_integral(g, integrand);
    }
    return out;
}

std::vector<ModeRow> mode_table(const DiskField& f) {
    std::vector<ModeRow> rows;
    for (int j = 1; j <= f.Jmax; ++j) {
        const WeightedNorms w = norms_of(f, j, j);
        rows.push_back({j, w.plain_norm, w.theta_norm, w.plain_norm > 0.0 ? w.theta_norm / w.plain_norm : 0.0});
    }
    return rows;
}

void write_mode_table_csv(std::ostream& os, const std::vector<ModeRow>& rows) {
    os << "j,plain_norm_j,theta_norm_j,ratio\n" << std::setprecision(17);
    for (const ModeRow& r : rows) os << r.j << ',' << r.plain_norm << ',' << r.theta_norm << ',' << r.ratio << '\n';
}

}  // namespace polyelast
