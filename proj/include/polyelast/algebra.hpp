#pragma once

#include <array>
#include <cmath>

namespace polyelast {

struct RhoSpec;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }
inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double norm2(const Vec2& v) { return dot(v, v); }

// Row-major 2x2 matrix [[a11, a12], [a21, a22]].
struct Mat2 {
    double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2 zero() { return {}; }

    Mat2 operator+(const Mat2& o) const { return {a11 + o.a11, a12 + o.a12, a21 + o.a21, a22 + o.a22}; }
    Mat2 operator-(const Mat2& o) const { return {a11 - o.a11, a12 - o.a12, a21 - o.a21, a22 - o.a22}; }
    Mat2 operator*(double s) const { return {a11 * s, a12 * s, a21 * s, a22 * s}; }
    Mat2& operator+=(const Mat2& o) { a11 += o.a11; a12 += o.a12; a21 += o.a21; a22 += o.a22; return *this; }

    Vec2 operator*(const Vec2& v) const { return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y}; }
    Mat2 transpose() const { return {a11, a21, a12, a22}; }
    double det() const { return a11 * a22 - a12 * a21; }
};

inline Mat2 operator*(double s, const Mat2& A) { return A * s; }

// Outer product a ⊗ b = a bᵀ.
inline Mat2 outer(const Vec2& a, const Vec2& b) { return {a.x * b.x, a.x * b.y, a.y * b.x, a.y * b.y}; }

// Frobenius inner product; the only matrix dot product used in the library.
double frob_dot(const Mat2& A, const Mat2& B);
double frobenius(const Mat2& A);

Mat2 cofactor(const Mat2& A);
// Classical adjugate, the transpose of the cofactor matrix.
Mat2 adjugate(const Mat2& A);

struct DetExpansion {
    double lhs;
    double rhs;
};

// det(A+B) evaluated directly and through det A + det B + cof A · B.
DetExpansion det_expansion(const Mat2& A, const Mat2& B);

// Gradient of W(ξ) = ½|ξ|² + ρ(det ξ).
Mat2 grad_W(const Mat2& A, const RhoSpec& rho);

// (∇W(A) − ∇W(B))·(A − B) − (1 − γ)|A − B|².
double monotonicity_gap(const Mat2& A, const Mat2& B, const RhoSpec& rho);

struct PolarFrame {
    int k;
    double theta;
    Vec2 e_kR;
    Vec2 e_kT;
};

PolarFrame polar_frame(int k, double theta);

inline Vec2 e_R(double angle) { return {std::cos(angle), std::sin(angle)}; }
inline Vec2 e_T(double angle) { return {-std::sin(angle), std::cos(angle)}; }

}  // namespace polyelast
