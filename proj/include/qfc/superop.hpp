#pragma once

#include "qfc/linalg.hpp"
#include "qfc/state.hpp"

namespace qfc {

// Superoperators act on column-stacked vectors |A>> (see vec()). The Kronecker
// form of the convention stays inside this module.

enum class MultKind {
    Left,   // |A>> -> |rho A>>
    Right,  // |A>> -> |A rho>>
    Sym,    // (Left + Right) / 2
};

const char* to_string(MultKind kind);

/// d^2 x d^2 matrix of the multiplication superoperator, built from the Kronecker form.
ComplexMatrix mult_superop(const DensityOperator& rho, MultKind kind);

/// K^power for K = mult_superop(rho, kind), assembled from the eigenbasis of rho
/// where K is diagonal: Sym (l_m + l_n)/2, Left l_m, Right l_n on |m><n|.
/// Any real power is allowed since rho is positive definite.
ComplexMatrix mult_superop_power(const DensityOperator& rho, MultKind kind, double power);

/// Projector onto traceless operators, 1 - |1>><<1|/d.
ComplexMatrix traceless_projector(int d);

/// |1>> for the d x d identity.
ComplexVector identity_ket(int d);

/// |a>><<b|
ComplexMatrix ket_bra(const ComplexVector& a, const ComplexVector& b);

}  // namespace qfc
