#pragma once

#include "qfc/linalg.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace qfc {

/// Ordered list of PSD Hermitian elements summing to a completeness target,
/// which is the identity for an ordinary POVM or a projector P_V for a POVM on
/// the subspace V. Instances only come out of validate_povm().
class Povm {
  public:
    int dim() const { return static_cast<int>(target_.rows()); }
    std::size_t size() const { return elements_.size(); }
    const std::vector<ComplexMatrix>& elements() const { return elements_; }
    const ComplexMatrix& element(std::size_t j) const { return elements_.at(j); }
    const ComplexMatrix& completeness_target() const { return target_; }
    bool has_identity_target() const;

  private:
    Povm(std::vector<ComplexMatrix> elements, ComplexMatrix target)
        : elements_(std::move(elements)), target_(std::move(target)) {}

    friend Povm validate_povm(std::vector<ComplexMatrix>, std::optional<ComplexMatrix>,
                              const Tolerances&);
    friend struct PovmBuilder;

    std::vector<ComplexMatrix> elements_;
    ComplexMatrix target_;
};

/// Checks every element is Hermitian PSD, the target is a projector and the
/// elements sum to it within 1e-9. Errors name the offending element and residual.
Povm validate_povm(std::vector<ComplexMatrix> elements,
                   std::optional<ComplexMatrix> completeness_target = std::nullopt,
                   const Tolerances& tol = {});

struct SimplifiedPovm {
    Povm povm;
    /// source element index -> index in the simplified POVM; nullopt for dropped zeros
    std::vector<std::optional<std::size_t>> merge_map;
};

/// Drops zero elements and sums positively proportional ones, giving the
/// simple POVM equivalent to the input.
SimplifiedPovm simplify_povm(const Povm& povm, const Tolerances& tol = {});

struct PovmClassification {
    bool is_simple = false;
    bool is_pvm = false;
    bool is_rank_one = false;
    std::size_t num_zero_elements = 0;
    int span_dim = 0;  // dim span(A), from the Gram matrix of vectorized elements
};

PovmClassification classify_povm(const Povm& povm, const Tolerances& tol = {});

struct ComponentDecomposition {
    /// element index -> component index; nullopt for zero elements
    std::vector<std::optional<std::size_t>> component_assignment;
    int gamma = 0;  // projective index
    std::vector<ComplexMatrix> component_projectors;
    /// max ||P_j^2 - P_j||_F; each P_j should be a projector
    double max_idempotency_residual = 0.0;
    bool projectors_idempotent = true;
};

/// Connected components of the transition graph (edge iff tr(A_j A_k) is nonzero).
ComponentDecomposition irreducible_components(const Povm& povm, const Tolerances& tol = {});

/// The finest PVM among the coarse grainings of the POVM: one projector per
/// irreducible component of the simplified POVM.
Povm finest_pvm(const Povm& povm, const Tolerances& tol = {});

/// A_j = sum_k lambda(j, k) B_k. lambda must be nonnegative with unit column sums.
Povm coarse_grain(const Povm& povm, const RealMatrix& stochastic_matrix, const Tolerances& tol = {});

/// 0/1 column-stochastic matrix grouping element k into group assignment[k].
RealMatrix grouping_matrix(std::span<const std::size_t> assignment, std::size_t num_groups);

/// Orthonormal (Hilbert-Schmidt) basis of traceless Hermitian d x d matrices.
struct TracelessBasis {
    int dim = 0;
    std::vector<ComplexMatrix> operators;

    std::size_t size() const { return operators.size(); }
    /// d^2 x g matrix whose columns are |e_a>>.
    ComplexMatrix columns() const;
};

/// Generalized Gell-Mann matrices normalized to tr(e_a e_b) = delta_ab:
/// symmetric and antisymmetric off-diagonal pairs, then the diagonal ones.
TracelessBasis gell_mann_basis(int d);

/// e'_a = sum_b O_ab e_b for a real orthogonal O.
TracelessBasis rotate_basis(const TracelessBasis& basis, const RealMatrix& orthogonal);

/// Qubit POVM {w_j (1 + r_j . sigma)}; requires sum w = 1, sum w r = 0, |r_j| <= 1.
Povm qubit_povm_from_bloch(std::span<const double> weights,
                           std::span<const Eigen::Vector3d> bloch_vectors);

/// Qubit SIC: four rank-1 elements along the regular tetrahedron containing (1,1,1)/sqrt(3).
Povm qubit_sic();

}  // namespace qfc
