#include "adframes/linalg.hpp"

#include <cmath>
#include <sstream>

namespace adframes {

namespace {

void require_square_finite(const Matrix& m, const char* who) {
    if (m.rows() < 1 || m.rows() != m.cols()) {
        std::ostringstream os;
        os << who << ": expected a square matrix with dim >= 1, got " << m.rows() << "x"
           << m.cols();
        throw std::domain_error(os.str());
    }
    if (!m.allFinite()) {
        throw std::domain_error(std::string(who) + ": matrix has non-finite entries");
    }
}

// Deterministic per-column gauge: rotate so the largest-magnitude component
// is real positive; lowest index wins ties.
void fix_column_phases(Matrix& v) {
    for (Eigen::Index j = 0; j < v.cols(); ++j) {
        Eigen::Index imax = 0;
        double amax = -1.0;
        for (Eigen::Index i = 0; i < v.rows(); ++i) {
            const double a = std::abs(v(i, j));
            if (a > amax + 1e-15) {
                amax = a;
                imax = i;
            }
        }
        if (amax > 0.0) {
            const Complex phase = v(imax, j) / std::abs(v(imax, j));
            v.col(j) *= std::conj(phase);
        }
    }
}

} // namespace

Matrix pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Matrix pauli_y() {
    Matrix m(2, 2);
    m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return m;
}

Matrix pauli_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

double spectral_norm(const Matrix& a) {
    require_square_finite(a, "spectral_norm");
    // sqrt of the largest eigenvalue of A^dag A; robust for the small dims
    // this toolkit works with.
    Eigen::SelfAdjointEigenSolver<Matrix> es(a.adjoint() * a, Eigen::EigenvaluesOnly);
    const double lmax = es.eigenvalues().maxCoeff();
    return lmax > 0.0 ? std::sqrt(lmax) : 0.0;
}

double trace_norm_hermitian(const Matrix& a) {
    require_square_finite(a, "trace_norm_hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
}

HermitianOperator::HermitianOperator(Matrix m) : mat_(std::move(m)) {
    require_square_finite(mat_, "HermitianOperator");
    const double dev = spectral_norm(mat_ - mat_.adjoint().eval());
    const double tol = 1e-12 * std::max(1.0, spectral_norm(mat_));
    if (dev > tol) {
        std::ostringstream os;
        os << "HermitianOperator: |A - A^dag| = " << dev << " exceeds 1e-12*max(1,|A|) = "
           << tol;
        throw std::domain_error(os.str());
    }
}

UnitaryOperator::UnitaryOperator(Matrix m) : mat_(std::move(m)) {
    require_square_finite(mat_, "UnitaryOperator");
    const Matrix gram = mat_.adjoint() * mat_;
    const double dev = spectral_norm(gram - Matrix::Identity(mat_.rows(), mat_.cols()));
    if (dev > 1e-10) {
        std::ostringstream os;
        os << "UnitaryOperator: |U^dag U - I| = " << dev << " exceeds 1e-10";
        throw std::domain_error(os.str());
    }
}

StateVector::StateVector(Vector v) : vec_(std::move(v)) {
    if (vec_.size() < 1) throw std::domain_error("StateVector: dim must be >= 1");
    if (!vec_.allFinite()) throw std::domain_error("StateVector: non-finite entries");
    const double n = vec_.norm();
    if (std::abs(n - 1.0) > 1e-10) {
        std::ostringstream os;
        os << "StateVector: |psi| = " << n << ", deviates from 1 by more than 1e-10";
        throw std::domain_error(os.str());
    }
}

DensityMatrix::DensityMatrix(Matrix m) : mat_(std::move(m)) {
    require_square_finite(mat_, "DensityMatrix");
    const double hdev = spectral_norm(mat_ - mat_.adjoint().eval());
    if (hdev > 1e-10) {
        std::ostringstream os;
        os << "DensityMatrix: |rho - rho^dag| = " << hdev << " exceeds 1e-10";
        throw std::domain_error(os.str());
    }
    const double tdev = std::abs(mat_.trace() - Complex(1.0, 0.0));
    if (tdev > 1e-10) {
        std::ostringstream os;
        os << "DensityMatrix: |tr(rho) - 1| = " << tdev << " exceeds 1e-10";
        throw std::domain_error(os.str());
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(mat_, Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues().minCoeff();
    if (lmin < -1e-10) {
        std::ostringstream os;
        os << "DensityMatrix: smallest eigenvalue " << lmin << " below -1e-10";
        throw std::domain_error(os.str());
    }
}

double DensityMatrix::purity() const { return (mat_ * mat_).trace().real(); }

Eigensystem eig_hermitian(const HermitianOperator& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(a.mat());
    if (es.info() != Eigen::Success) {
        throw NumericalError("eig_hermitian: eigendecomposition failed to converge");
    }
    Eigensystem out;
    out.values = es.eigenvalues();
    out.vectors = es.eigenvectors();
    fix_column_phases(out.vectors);
    return out;
}

UnitaryOperator expm_skew_hermitian(const HermitianOperator& a, double s) {
    const Eigensystem es = eig_hermitian(a);
    Vector phases(es.values.size());
    for (Eigen::Index k = 0; k < es.values.size(); ++k) {
        phases(k) = std::exp(Complex(0.0, -s * es.values(k)));
    }
    Matrix u = es.vectors * phases.asDiagonal() * es.vectors.adjoint();
    return UnitaryOperator(std::move(u));
}

} // namespace adframes
