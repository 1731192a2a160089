#pragma once

#include "qfc/fisher.hpp"
#include "qfc/linalg.hpp"

namespace qfc {

inline constexpr double kPrefixSumTol = 1e-8;

struct MajorizationCheck {
    bool holds = false;
    /// prefix(y)_k - prefix(x)_k over descending sorts, k = 1..n
    RealVector margins;
};

/// x is submajorized by y: every descending prefix sum of x is at most that of y
/// (plus tol). The shorter vector is zero-padded.
MajorizationCheck submajorizes(const RealVector& x, const RealVector& y, double tol = kPrefixSumTol);

/// x is majorized by y: submajorized with equal totals (within tol).
bool majorizes(const RealVector& x, const RealVector& y, double tol = kPrefixSumTol);

enum class Relation {
    SubmajorizedBy,  // x <=_w y only
    Majorizes,       // y <=_w x only
    Equivalent,      // both; the sorted vectors agree
    Incomparable,
};

const char* to_string(Relation relation);

struct OrderVerdict {
    Relation relation = Relation::Incomparable;
    RealVector partial_sum_margins;  // prefix(y) - prefix(x)
};

OrderVerdict compare_spectra(const RealVector& x, const RealVector& y, double tol = kPrefixSumTol);

/// Verdict on eig(rho, A) versus eig(rho, B). Holds at this state only; it says
/// nothing about other states.
OrderVerdict concentration_compare(const DensityOperator& rho, const Povm& a, const Povm& b,
                                   FimKind kind, const Tolerances& tol = {},
                                   double prefix_tol = kPrefixSumTol);

}  // namespace qfc
