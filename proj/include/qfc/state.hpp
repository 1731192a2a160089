#pragma once

#include "qfc/linalg.hpp"

#include <Eigen/Dense>

namespace qfc {

/// Minimum eigenvalue below which a state is reported as near the boundary of
/// the state space. Such states are accepted; reports carry a flag.
inline constexpr double kNearBoundaryEigenvalue = 1e-6;

/// Positive definite, unit-trace Hermitian matrix. The spectral decomposition is
/// computed once at construction and reused by every superoperator routine.
class DensityOperator {
  public:
    /// Validates Hermiticity (zero_tol), unit trace (1e-10) and min eigenvalue > psd_tol.
    static DensityOperator from_matrix(const ComplexMatrix& m, const Tolerances& tol = {});

    /// Qubit state (1 + s.sigma)/2; requires |s| < 1.
    static DensityOperator from_bloch(const Eigen::Vector3d& s);

    /// Completely mixed state 1/d.
    static DensityOperator maximally_mixed(int d);

    int dim() const { return static_cast<int>(matrix_.rows()); }
    const ComplexMatrix& matrix() const { return matrix_; }
    const RealVector& eigenvalues() const { return eig_.values; }
    const ComplexMatrix& eigenvectors() const { return eig_.vectors; }
    double min_eigenvalue() const { return eig_.values(eig_.values.size() - 1); }
    bool near_boundary() const { return min_eigenvalue() < kNearBoundaryEigenvalue; }

  private:
    DensityOperator(ComplexMatrix m, HermitianEig eig) : matrix_(std::move(m)), eig_(std::move(eig)) {}

    ComplexMatrix matrix_;
    HermitianEig eig_;
};

/// Pauli matrices sigma_x, sigma_y, sigma_z.
ComplexMatrix pauli(int axis);

}  // namespace qfc
