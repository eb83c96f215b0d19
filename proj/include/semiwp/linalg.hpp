#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "semiwp/errors.hpp"

namespace semiwp {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Default tolerances; headroom for double precision at d <= 10.
inline constexpr double kAdmissibilityTol = 1e-10;   // residuals of the two matrix conditions
inline constexpr double kReconstructionTol = 1e-12;  // polar reconstruction, relative
inline constexpr double kSingularRelTol = 1e-12;     // sigma_min threshold, relative to max entry
inline constexpr double kConditionCap = 1e4;         // generator rejection bound

inline double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

inline void require_square_same_dim(const ComplexMatrix& A, const ComplexMatrix& B,
                                    const char* where) {
    if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows() || A.rows() < 1)
        throw input_error(std::string(where) + ": A and B must be square with equal dimension");
}

struct AdmissibilityReport {
    bool ok = false;
    double residual1 = 0.0;  // max entry of |A*B + B*A - 2I|
    double residual2 = 0.0;  // max entry of |A^T B - B^T A|
};

/// Checks the two conditions that make a packet family well defined:
/// A*B + B*A = 2I and A^T B - B^T A = 0.
inline AdmissibilityReport check_admissible(const ComplexMatrix& A, const ComplexMatrix& B,
                                            double tol = kAdmissibilityTol) {
    require_square_same_dim(A, B, "check_admissible");
    const auto d = A.rows();
    const ComplexMatrix I = ComplexMatrix::Identity(d, d);
    AdmissibilityReport rep;
    rep.residual1 = max_abs(A.adjoint() * B + B.adjoint() * A - 2.0 * I);
    rep.residual2 = max_abs(A.transpose() * B - B.transpose() * A);
    rep.ok = rep.residual1 <= tol && rep.residual2 <= tol;
    return rep;
}

struct PolarForm {
    ComplexMatrix abs;      // |A| = sqrt(A A*), Hermitian positive definite
    ComplexMatrix unitary;  // U_A with A = |A| U_A
};

/// Polar decomposition A = |A| U_A with |A| = sqrt(A A*), computed from the SVD
/// A = W S V*  =>  |A| = W S W*,  U_A = W V*.
inline PolarForm polar_decompose(const ComplexMatrix& A) {
    if (A.rows() != A.cols() || A.rows() < 1)
        throw input_error("polar_decompose: matrix must be square");
    Eigen::JacobiSVD<ComplexMatrix> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double smin = svd.singularValues().minCoeff();
    if (!(smin > kSingularRelTol * max_abs(A)))
        throw singular_error("polar_decompose: matrix is singular or too ill-conditioned "
                             "(sigma_min = " + std::to_string(smin) + ")");
    const ComplexMatrix& W = svd.matrixU();
    PolarForm out;
    out.abs = W * svd.singularValues().asDiagonal() * W.adjoint();
    out.abs = 0.5 * (out.abs + out.abs.adjoint().eval());  // restore exact Hermitian symmetry
    out.unitary = W * svd.matrixV().adjoint();
    return out;
}

/// Ratio of extreme singular values.
inline double condition_number(const ComplexMatrix& A) {
    Eigen::JacobiSVD<ComplexMatrix> svd(A);
    const double smin = svd.singularValues().minCoeff();
    if (!(smin > 0.0)) return std::numeric_limits<double>::infinity();
    return svd.singularValues().maxCoeff() / smin;
}

/// (det A)^(-1/2) on the principal branch: the argument of det A is taken in
/// (-pi, pi], so e.g. det A = -1 maps to sqrt = i and result -i.
inline Complex inv_sqrt_det(const ComplexMatrix& A) {
    if (A.rows() != A.cols() || A.rows() < 1)
        throw input_error("inv_sqrt_det: matrix must be square");
    Complex det = A.determinant();
    if (!(std::abs(det) > 0.0)) throw singular_error("inv_sqrt_det: determinant is zero");
    // A negative real determinant with imaginary part -0.0 would fall on the
    // wrong side of the branch cut; normalize to +0.0 so arg = +pi.
    if (det.imag() == 0.0) det = Complex(det.real(), +0.0);
    return 1.0 / std::sqrt(det);
}

/// The partner matrix B = (|A|^-2 + iS) A, S real symmetric. For any A with
/// A A* real this satisfies both admissibility conditions identically, and
/// every admissible B for such an A has this form.
inline ComplexMatrix admissible_partner(const ComplexMatrix& A, const RealMatrix& S) {
    if (A.rows() != A.cols() || S.rows() != S.cols() || A.rows() != S.rows())
        throw input_error("admissible_partner: A and S must be square with equal dimension");
    const ComplexMatrix AAadj = A * A.adjoint();
    const ComplexMatrix abs2inv = AAadj.partialPivLu().solve(
        ComplexMatrix::Identity(A.rows(), A.cols()));
    return (abs2inv + Complex(0.0, 1.0) * S.cast<Complex>()) * A;
}

}  // namespace semiwp
