#include "qfc/state.hpp"

#include <cmath>
#include <sstream>

namespace qfc {

DensityOperator DensityOperator::from_matrix(const ComplexMatrix& m, const Tolerances& tol) {
    if (m.rows() != m.cols() || m.rows() < 1) {
        throw Error(ErrorCode::Dimension, "density operator must be a nonempty square matrix");
    }
    if (!is_hermitian(m, tol.zero_tol)) {
        throw Error(ErrorCode::Validation, "density operator is not Hermitian");
    }
    ComplexMatrix h = hermitian_part(m);
    double trace = h.trace().real();
    if (std::abs(trace - 1.0) > 1e-10) {
        std::ostringstream os;
        os << "density operator trace " << trace << " differs from 1";
        throw Error(ErrorCode::Validation, os.str());
    }
    HermitianEig eig = hermitian_eig(h, tol);
    double lambda_min = eig.values(eig.values.size() - 1);
    if (lambda_min <= tol.psd_tol) {
        std::ostringstream os;
        os << "density operator is not positive definite (min eigenvalue " << lambda_min << ")";
        throw Error(lambda_min < -tol.psd_tol ? ErrorCode::NotPsd : ErrorCode::Rank, os.str());
    }
    return DensityOperator(std::move(h), std::move(eig));
}

DensityOperator DensityOperator::from_bloch(const Eigen::Vector3d& s) {
    if (!(s.norm() < 1.0)) {
        std::ostringstream os;
        os << "Bloch vector length " << s.norm() << " must be < 1";
        throw Error(ErrorCode::Validation, os.str());
    }
    ComplexMatrix m = ComplexMatrix::Identity(2, 2);
    for (int a = 0; a < 3; ++a) m += s(a) * pauli(a);
    return from_matrix(0.5 * m);
}

DensityOperator DensityOperator::maximally_mixed(int d) {
    if (d < 1) throw Error(ErrorCode::Dimension, "dimension must be positive");
    return from_matrix(ComplexMatrix::Identity(d, d) / static_cast<double>(d));
}

ComplexMatrix pauli(int axis) {
    ComplexMatrix p = ComplexMatrix::Zero(2, 2);
    switch (axis) {
        case 0:
            p(0, 1) = 1.0;
            p(1, 0) = 1.0;
            break;
        case 1:
            p(0, 1) = Complex(0.0, -1.0);
            p(1, 0) = Complex(0.0, 1.0);
            break;
        case 2:
            p(0, 0) = 1.0;
            p(1, 1) = -1.0;
            break;
        default: throw Error(ErrorCode::Validation, "pauli axis must be 0, 1 or 2");
    }
    return p;
}

}  // namespace qfc
