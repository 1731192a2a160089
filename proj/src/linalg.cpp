#include "qfc/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qfc {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::Dimension: return "dimension";
        case ErrorCode::Validation: return "validation";
        case ErrorCode::NotPsd: return "not-psd";
        case ErrorCode::Rank: return "rank";
        case ErrorCode::Degenerate: return "degenerate";
        case ErrorCode::Infeasible: return "infeasible";
        case ErrorCode::Io: return "io";
    }
    return "unknown";
}

void Tolerances::validate() const {
    if (!(zero_tol > 0.0) || !(eig_one_tol > 0.0) || !(psd_tol > 0.0)) {
        throw Error(ErrorCode::Validation, "tolerances must be strictly positive");
    }
}

double frobenius(const ComplexMatrix& a) { return a.norm(); }

bool is_hermitian(const ComplexMatrix& h, double rel_tol) {
    if (h.rows() != h.cols()) return false;
    return (h - h.adjoint()).norm() <= rel_tol * h.norm();
}

ComplexMatrix hermitian_part(const ComplexMatrix& h) { return 0.5 * (h + h.adjoint()); }

Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        std::ostringstream os;
        os << "hs_inner: shape mismatch " << a.rows() << "x" << a.cols() << " vs " << b.rows() << "x"
           << b.cols();
        throw Error(ErrorCode::Dimension, os.str());
    }
    // sum_ij conj(a_ij) b_ij
    return (a.conjugate().cwiseProduct(b)).sum();
}

ComplexVector vec(const ComplexMatrix& a) {
    return Eigen::Map<const ComplexVector>(a.data(), a.size());
}

ComplexMatrix unvec(const ComplexVector& v, Eigen::Index rows, Eigen::Index cols) {
    if (v.size() != rows * cols) {
        throw Error(ErrorCode::Dimension, "unvec: vector length does not match requested shape");
    }
    return Eigen::Map<const ComplexMatrix>(v.data(), rows, cols);
}

namespace {

void require_hermitian(const ComplexMatrix& h, const Tolerances& tol, const char* who) {
    if (h.rows() != h.cols()) {
        std::ostringstream os;
        os << who << ": matrix is not square (" << h.rows() << "x" << h.cols() << ")";
        throw Error(ErrorCode::Dimension, os.str());
    }
    if (!is_hermitian(h, tol.zero_tol)) {
        std::ostringstream os;
        os << who << ": matrix is not Hermitian (||h - h^dagger|| = " << (h - h.adjoint()).norm()
           << ")";
        throw Error(ErrorCode::Validation, os.str());
    }
}

}  // namespace

HermitianEig hermitian_eig(const ComplexMatrix& h, const Tolerances& tol) {
    require_hermitian(h, tol, "hermitian_eig");
    if (h.size() == 0) return {RealVector(0), ComplexMatrix(0, 0)};
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(h));
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::Validation, "hermitian_eig: eigensolver did not converge");
    }
    // Eigen sorts ascending
    HermitianEig out;
    out.values = solver.eigenvalues().reverse();
    out.vectors = solver.eigenvectors().rowwise().reverse();
    return out;
}

RealVector hermitian_eigenvalues(const ComplexMatrix& h, const Tolerances& tol) {
    require_hermitian(h, tol, "hermitian_eigenvalues");
    if (h.size() == 0) return RealVector(0);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(h), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::Validation, "hermitian_eigenvalues: eigensolver did not converge");
    }
    return solver.eigenvalues().reverse();
}

ComplexMatrix psd_sqrt(const ComplexMatrix& h, const Tolerances& tol) {
    HermitianEig eig = hermitian_eig(h, tol);
    RealVector root(eig.values.size());
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
        double lambda = eig.values(i);
        if (lambda < -tol.psd_tol) {
            std::ostringstream os;
            os << "psd_sqrt: eigenvalue " << lambda << " below -psd_tol";
            throw Error(ErrorCode::NotPsd, os.str());
        }
        // eigenvalues at rounding level would otherwise come back as ~1e-8
        root(i) = lambda <= tol.psd_tol ? 0.0 : std::sqrt(lambda);
    }
    ComplexMatrix r = eig.vectors * root.asDiagonal() * eig.vectors.adjoint();
    return hermitian_part(r);
}

ComplexMatrix pd_power(const ComplexMatrix& h, double power, const Tolerances& tol) {
    HermitianEig eig = hermitian_eig(h, tol);
    if (eig.values.size() == 0) return ComplexMatrix(0, 0);
    double smallest = eig.values(eig.values.size() - 1);
    if (smallest <= tol.zero_tol * eig.values.cwiseAbs().maxCoeff()) {
        std::ostringstream os;
        os << "pd_power: matrix is not positive definite (min eigenvalue " << smallest << ")";
        throw Error(ErrorCode::Rank, os.str());
    }
    RealVector powered = eig.values.array().pow(power).matrix();
    return hermitian_part(eig.vectors * powered.asDiagonal() * eig.vectors.adjoint());
}

ComplexMatrix moore_penrose(const ComplexMatrix& h, const Tolerances& tol) {
    HermitianEig eig = hermitian_eig(h, tol);
    if (eig.values.size() == 0) return ComplexMatrix(0, 0);
    double scale = eig.values.cwiseAbs().maxCoeff();
    RealVector inv(eig.values.size());
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
        double lambda = eig.values(i);
        inv(i) = std::abs(lambda) <= tol.zero_tol * scale ? 0.0 : 1.0 / lambda;
    }
    return hermitian_part(eig.vectors * inv.asDiagonal() * eig.vectors.adjoint());
}

int numeric_rank(const RealVector& eigenvalues, const Tolerances& tol) {
    if (eigenvalues.size() == 0) return 0;
    double cutoff = tol.zero_tol * std::max(1.0, eigenvalues.cwiseAbs().maxCoeff());
    int rank = 0;
    for (double lambda : eigenvalues) {
        if (std::abs(lambda) > cutoff) ++rank;
    }
    return rank;
}

int numeric_rank(const ComplexMatrix& h, const Tolerances& tol) {
    return numeric_rank(hermitian_eigenvalues(h, tol), tol);
}

double min_eigenvalue(const ComplexMatrix& h, const Tolerances& tol) {
    RealVector values = hermitian_eigenvalues(h, tol);
    if (values.size() == 0) throw Error(ErrorCode::Dimension, "min_eigenvalue: empty matrix");
    return values(values.size() - 1);
}

}  // namespace qfc
