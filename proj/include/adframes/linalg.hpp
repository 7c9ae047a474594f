#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string>

#include "adframes/errors.hpp"

namespace adframes {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();

// Kronecker product, used to assemble multi-qubit operators.
Matrix kron(const Matrix& a, const Matrix& b);

/// Largest singular value.
double spectral_norm(const Matrix& a);

/// Sum of |eigenvalue| for a Hermitian argument.
double trace_norm_hermitian(const Matrix& a);

/// Hermitian matrix in angular-frequency units (rad/us, hbar = 1).
/// Construction enforces |A - A^dag| <= 1e-12 * max(1, |A|) in spectral norm.
class HermitianOperator {
public:
    explicit HermitianOperator(Matrix m);
    const Matrix& mat() const { return mat_; }
    Eigen::Index dim() const { return mat_.rows(); }

private:
    Matrix mat_;
};

/// |U^dag U - I| <= 1e-10 enforced on construction.
class UnitaryOperator {
public:
    explicit UnitaryOperator(Matrix m);
    const Matrix& mat() const { return mat_; }
    Eigen::Index dim() const { return mat_.rows(); }

private:
    Matrix mat_;
};

/// Normalized pure state, |psi|_2 = 1 within 1e-10.
class StateVector {
public:
    explicit StateVector(Vector v);
    const Vector& vec() const { return vec_; }
    Eigen::Index dim() const { return vec_.size(); }

private:
    Vector vec_;
};

/// Hermitian, unit trace, positive semidefinite (eigenvalues >= -1e-10).
class DensityMatrix {
public:
    explicit DensityMatrix(Matrix m);
    const Matrix& mat() const { return mat_; }
    Eigen::Index dim() const { return mat_.rows(); }
    double purity() const;

private:
    Matrix mat_;
};

struct Eigensystem {
    Eigen::VectorXd values; // ascending
    Matrix vectors;         // orthonormal columns, deterministic phase
};

/// Hermitian eigendecomposition with ascending eigenvalues and a fixed
/// eigenvector gauge: the largest-magnitude component of each column is
/// made real positive (lowest index wins ties).
Eigensystem eig_hermitian(const HermitianOperator& a);

/// exp(-i s A) for Hermitian A, computed through the eigendecomposition.
UnitaryOperator expm_skew_hermitian(const HermitianOperator& a, double s);

} // namespace adframes
