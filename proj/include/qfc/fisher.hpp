#pragma once

#include "qfc/linalg.hpp"
#include "qfc/povm.hpp"
#include "qfc/state.hpp"
#include "qfc/superop.hpp"

#include <optional>
#include <span>
#include <string_view>

namespace qfc {

/// Quantum Fisher metric. The name follows the matrix side (J_S, J_R, J_L); the
/// superoperator K that enters the metric-adjusted superoperators is crossed:
///
///   Sld -> S(rho):  J_S = <<e|S^{-1}|e>>,  I_S represents Fbar_S
///   Rld -> L(rho):  J_R = <<e|L^{-1}|e>>,  I_R represents Fbar_L
///   Lld -> R(rho):  J_L = <<e|R^{-1}|e>>,  I_L represents Fbar_R
///
/// metric_superop() is the only place this pairing is spelled out.
enum class FimKind { Sld, Rld, Lld };

inline constexpr FimKind kAllFimKinds[] = {FimKind::Sld, FimKind::Rld, FimKind::Lld};

MultKind metric_superop(FimKind kind);
const char* to_string(FimKind kind);
std::optional<FimKind> fim_kind_from_string(std::string_view name);

/// p_j = tr(rho A_j), clipped to [0, 1].
RealVector outcome_probs(const DensityOperator& rho, const Povm& povm);

// Parametrizations are given by their tangents rho_{,a}: g Hermitian traceless
// matrices. TracelessBasis overloads use an orthonormal parametrization.

/// I_ab = <<rho_a| Fbar |rho_b>>, the classical Fisher information matrix.
RealMatrix classical_fim(const DensityOperator& rho, const Povm& povm,
                         std::span<const ComplexMatrix> tangents, const Tolerances& tol = {});
RealMatrix classical_fim(const DensityOperator& rho, const Povm& povm, const TracelessBasis& basis,
                         const Tolerances& tol = {});

/// Solves (rho L + L rho)/2 = x in the eigenbasis of rho.
ComplexMatrix sld_solve(const DensityOperator& rho, const ComplexMatrix& x);

/// Quantum Fisher information matrix of the given kind (Hermitian; real symmetric for Sld).
ComplexMatrix qfim(const DensityOperator& rho, std::span<const ComplexMatrix> tangents, FimKind kind);
ComplexMatrix qfim(const DensityOperator& rho, const TracelessBasis& basis, FimKind kind);

/// F = sum_j |A_j>><<A_j| / tr(rho A_j) over nonzero elements; the traceless
/// variant is Ibar F Ibar. Throws Validation on a zero-probability nonzero element.
ComplexMatrix f_superop(const DensityOperator& rho, const Povm& povm, bool traceless,
                        const Tolerances& tol = {});

/// K - |rho>><<rho|, the Moore-Penrose inverse of Ibar K^{-1} Ibar.
ComplexMatrix traceless_metric_pinv(const DensityOperator& rho, MultKind k);

/// F_K = K^{1/2} F K^{1/2}, or Fbar_K = X Fbar X with X = (K - |rho>><<rho|)^{1/2},
/// where K = metric_superop(kind).
ComplexMatrix metric_adjusted_superop(const DensityOperator& rho, const Povm& povm, FimKind kind,
                                      bool traceless, const Tolerances& tol = {});

/// Fisher eigenvalues from Fbar_K restricted to traceless operators, descending, g = d^2 - 1 values.
RealVector fisher_eigenvalues_unclipped(const DensityOperator& rho, const Povm& povm, FimKind kind,
                                        const Tolerances& tol = {});

/// As above, clipped to [0, 1].
RealVector fisher_spectrum(const DensityOperator& rho, const Povm& povm, FimKind kind,
                           const Tolerances& tol = {});

/// J^{-1/2} I J^{-1/2} in the given parametrization (g x g, Hermitian).
ComplexMatrix metric_adjusted_fim(const DensityOperator& rho, const Povm& povm,
                                  std::span<const ComplexMatrix> tangents, FimKind kind,
                                  const Tolerances& tol = {});

/// Fisher eigenvalues from the g x g matrices, descending, unclipped.
RealVector fisher_spectrum_pencil(const DensityOperator& rho, const Povm& povm,
                                  std::span<const ComplexMatrix> tangents, FimKind kind,
                                  const Tolerances& tol = {});

/// m x m Gram matrix <<A_j|K|A_k>>/sqrt(p_j p_k) over nonzero elements, K = metric_superop(kind);
/// traceless uses K - |rho>><<rho|. Its nonzero spectrum equals that of F_K (Fbar_K).
ComplexMatrix gram_matrix(const DensityOperator& rho, const Povm& povm, FimKind kind, bool traceless,
                          const Tolerances& tol = {});
RealVector gram_spectrum(const DensityOperator& rho, const Povm& povm, FimKind kind,
                         bool traceless = false, const Tolerances& tol = {});

struct SpectrumSummary {
    double purity = 0.0;             // sum lambda^2 / (d - 1)
    double gill_massar_trace = 0.0;  // sum lambda
    int sharpness_index = 0;         // multiplicity of eigenvalue 1
    bool is_fisher_sharp = false;
    int fisher_rank = 0;
};

/// Number of values within eig_one_tol of 1.
int multiplicity_of_one(const RealVector& values, const Tolerances& tol = {});

SpectrumSummary spectrum_summary(const RealVector& spectrum, int d, const Tolerances& tol = {});

/// All Fisher eigenvalues equal within eig_one_tol.
bool is_fisher_symmetric(const RealVector& spectrum, const Tolerances& tol = {});

struct FisherReport {
    FimKind kind = FimKind::Sld;
    RealVector spectrum;
    double purity = 0.0;
    double gill_massar_trace = 0.0;
    int sharpness_index = 0;
    bool is_fisher_sharp = false;
    int fisher_rank = 0;
    bool near_boundary = false;  // state has min eigenvalue below kNearBoundaryEigenvalue
};

FisherReport analyze(const DensityOperator& rho, const Povm& povm, FimKind kind,
                     const Tolerances& tol = {});

}  // namespace qfc
