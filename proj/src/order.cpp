#include "qfc/order.hpp"

#include <algorithm>
#include <functional>

namespace qfc {

namespace {

RealVector sorted_padded(const RealVector& v, Eigen::Index n) {
    RealVector out = RealVector::Zero(n);
    out.head(v.size()) = v;
    std::sort(out.data(), out.data() + n, std::greater<>());
    return out;
}

RealVector prefix_margins(const RealVector& x, const RealVector& y) {
    const Eigen::Index n = std::max(x.size(), y.size());
    RealVector xs = sorted_padded(x, n);
    RealVector ys = sorted_padded(y, n);
    RealVector margins(n);
    double px = 0.0, py = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        px += xs(k);
        py += ys(k);
        margins(k) = py - px;
    }
    return margins;
}

}  // namespace

MajorizationCheck submajorizes(const RealVector& x, const RealVector& y, double tol) {
    MajorizationCheck out;
    out.margins = prefix_margins(x, y);
    out.holds = out.margins.size() == 0 || out.margins.minCoeff() >= -tol;
    return out;
}

bool majorizes(const RealVector& x, const RealVector& y, double tol) {
    MajorizationCheck c = submajorizes(x, y, tol);
    if (!c.holds) return false;
    return c.margins.size() == 0 || std::abs(c.margins(c.margins.size() - 1)) <= tol;
}

const char* to_string(Relation relation) {
    switch (relation) {
        case Relation::SubmajorizedBy: return "submajorized_by";
        case Relation::Majorizes: return "majorizes";
        case Relation::Equivalent: return "equivalent";
        case Relation::Incomparable: return "incomparable";
    }
    return "unknown";
}

OrderVerdict compare_spectra(const RealVector& x, const RealVector& y, double tol) {
    OrderVerdict verdict;
    MajorizationCheck forward = submajorizes(x, y, tol);
    bool backward = submajorizes(y, x, tol).holds;
    verdict.partial_sum_margins = forward.margins;
    if (forward.holds && backward) {
        verdict.relation = Relation::Equivalent;
    } else if (forward.holds) {
        verdict.relation = Relation::SubmajorizedBy;
    } else if (backward) {
        verdict.relation = Relation::Majorizes;
    } else {
        verdict.relation = Relation::Incomparable;
    }
    return verdict;
}

OrderVerdict concentration_compare(const DensityOperator& rho, const Povm& a, const Povm& b,
                                   FimKind kind, const Tolerances& tol, double prefix_tol) {
    if (a.dim() != b.dim()) throw Error(ErrorCode::Dimension, "POVMs act on different dimensions");
    return compare_spectra(fisher_spectrum(rho, a, kind, tol), fisher_spectrum(rho, b, kind, tol),
                           prefix_tol);
}

}  // namespace qfc
