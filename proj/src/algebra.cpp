#include "polyelast/algebra.hpp"

#include <stdexcept>

#include "polyelast/rho.hpp"

namespace polyelast {

double frob_dot(const Mat2& A, const Mat2& B) {
    return A.a11 * B.a11 + A.a12 * B.a12 + A.a21 * B.a21 + A.a22 * B.a22;
}

// hypot avoids underflow and overflow in the squares
double frobenius(const Mat2& A) { return std::hypot(std::hypot(A.a11, A.a12), std::hypot(A.a21, A.a22)); }

Mat2 cofactor(const Mat2& A) { return {A.a22, -A.a21, -A.a12, A.a11}; }

Mat2 adjugate(const Mat2& A) { return cofactor(A).transpose(); }

DetExpansion det_expansion(const Mat2& A, const Mat2& B) {
    return {(A + B).det(), A.det() + B.det() + frob_dot(cofactor(A), B)};
}

Mat2 grad_W(const Mat2& A, const RhoSpec& rho) {
    return A + cofactor(A) * rho_eval(rho, A.det()).drho;
}

double monotonicity_gap(const Mat2& A, const Mat2& B, const RhoSpec& rho) {
    const Mat2 D = A - B;
    const double pairing = frob_dot(grad_W(A, rho) - grad_W(B, rho), D);
    return pairing - (1.0 - rho.gamma_slope) * frob_dot(D, D);
}

PolarFrame polar_frame(int k, double theta) {
    if (k < 0) throw std::invalid_argument("polar_frame: winding k must be non-negative");
    const double a = k * theta;
    return {k, theta, e_R(a), e_T(a)};
}

}  // namespace polyelast
