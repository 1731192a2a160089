#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace qfc {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

enum class ErrorCode {
    Dimension,   // shape mismatch between operands
    Validation,  // input violates a documented precondition
    NotPsd,      // eigenvalue below -psd_tol
    Rank,        // singular state where a positive definite one is required
    Degenerate,  // nothing left after simplification
    Infeasible,  // generator parameters admit no instance
    Io,          // file or stream failure, malformed JSON
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

/// Numerical cutoffs used to turn exact-arithmetic predicates into floating point ones.
struct Tolerances {
    double zero_tol = 1e-10;     // scalar / eigenvalue treated as zero (relative where documented)
    double eig_one_tol = 1e-8;   // eigenvalue counted as 1
    double psd_tol = 1e-10;      // allowed negative eigenvalue in PSD validation

    /// Throws Validation unless every field is strictly positive.
    void validate() const;
};

struct HermitianEig {
    RealVector values;     // descending
    ComplexMatrix vectors; // columns, unitary
};

double frobenius(const ComplexMatrix& a);
bool is_hermitian(const ComplexMatrix& h, double rel_tol);
ComplexMatrix hermitian_part(const ComplexMatrix& h);

/// tr(a^dagger b)
Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);

/// Column-stacking vectorization |A>> and its inverse.
ComplexVector vec(const ComplexMatrix& a);
ComplexMatrix unvec(const ComplexVector& v, Eigen::Index rows, Eigen::Index cols);

/// Spectral decomposition of a Hermitian matrix, eigenvalues sorted descending.
/// Throws Validation if ||h - h^dagger|| > zero_tol * ||h||.
HermitianEig hermitian_eig(const ComplexMatrix& h, const Tolerances& tol = {});

/// Eigenvalues only, descending.
RealVector hermitian_eigenvalues(const ComplexMatrix& h, const Tolerances& tol = {});

/// Principal square root of a PSD matrix; eigenvalues in [-psd_tol, psd_tol] map to 0.
ComplexMatrix psd_sqrt(const ComplexMatrix& h, const Tolerances& tol = {});

/// h^power for a positive definite Hermitian h; throws Rank if an eigenvalue is <= zero_tol * max.
ComplexMatrix pd_power(const ComplexMatrix& h, double power, const Tolerances& tol = {});

/// Moore-Penrose inverse of a Hermitian matrix. Eigenvalues with
/// |lambda| <= zero_tol * max|lambda| map to zero.
ComplexMatrix moore_penrose(const ComplexMatrix& h, const Tolerances& tol = {});

/// Number of eigenvalues with |lambda| > zero_tol * max(1, max|lambda|).
int numeric_rank(const ComplexMatrix& h, const Tolerances& tol = {});
int numeric_rank(const RealVector& eigenvalues, const Tolerances& tol = {});

/// Smallest eigenvalue of a Hermitian matrix.
double min_eigenvalue(const ComplexMatrix& h, const Tolerances& tol = {});

}  // namespace qfc
