#include "qfc/superop.hpp"

#include <cmath>

namespace qfc {

const char* to_string(MultKind kind) {
    switch (kind) {
        case MultKind::Left: return "left";
        case MultKind::Right: return "right";
        case MultKind::Sym: return "sym";
    }
    return "unknown";
}

namespace {

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

double diagonal_factor(const RealVector& lambda, MultKind kind, Eigen::Index m, Eigen::Index n) {
    switch (kind) {
        case MultKind::Left: return lambda(m);
        case MultKind::Right: return lambda(n);
        case MultKind::Sym: return 0.5 * (lambda(m) + lambda(n));
    }
    return 0.0;
}

}  // namespace

ComplexMatrix mult_superop(const DensityOperator& rho, MultKind kind) {
    const int d = rho.dim();
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);
    // vec(A X B) = (B^T kron A) vec(X)
    ComplexMatrix left = kron(id, rho.matrix());
    ComplexMatrix right = kron(rho.matrix().transpose(), id);
    switch (kind) {
        case MultKind::Left: return left;
        case MultKind::Right: return right;
        case MultKind::Sym: return 0.5 * (left + right);
    }
    return {};
}

ComplexMatrix mult_superop_power(const DensityOperator& rho, MultKind kind, double power) {
    const int d = rho.dim();
    const RealVector& lambda = rho.eigenvalues();
    const ComplexMatrix& u = rho.eigenvectors();
    // |U X U^dagger>> = (conj(U) kron U) |X>>
    ComplexMatrix w = kron(u.conjugate(), u);
    RealVector diag(d * d);
    for (Eigen::Index n = 0; n < d; ++n) {
        for (Eigen::Index m = 0; m < d; ++m) {
            diag(m + n * d) = std::pow(diagonal_factor(lambda, kind, m, n), power);
        }
    }
    return hermitian_part(w * diag.asDiagonal() * w.adjoint());
}

ComplexMatrix traceless_projector(int d) {
    ComplexVector one = identity_ket(d);
    return ComplexMatrix::Identity(d * d, d * d) - ket_bra(one, one) / static_cast<double>(d);
}

ComplexVector identity_ket(int d) { return vec(ComplexMatrix::Identity(d, d)); }

ComplexMatrix ket_bra(const ComplexVector& a, const ComplexVector& b) { return a * b.adjoint(); }

}  // namespace qfc
