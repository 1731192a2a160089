#include "qfc/fisher.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qfc {

MultKind metric_superop(FimKind kind) {
    switch (kind) {
        case FimKind::Sld: return MultKind::Sym;
        case FimKind::Rld: return MultKind::Left;
        case FimKind::Lld: return MultKind::Right;
    }
    return MultKind::Sym;
}

const char* to_string(FimKind kind) {
    switch (kind) {
        case FimKind::Sld: return "sld";
        case FimKind::Rld: return "rld";
        case FimKind::Lld: return "lld";
    }
    return "unknown";
}

std::optional<FimKind> fim_kind_from_string(std::string_view name) {
    for (FimKind kind : kAllFimKinds) {
        if (name == to_string(kind)) return kind;
    }
    return std::nullopt;
}

namespace {

void require_same_dim(const DensityOperator& rho, const Povm& povm) {
    if (rho.dim() != povm.dim()) {
        std::ostringstream os;
        os << "state dimension " << rho.dim() << " differs from POVM dimension " << povm.dim();
        throw Error(ErrorCode::Dimension, os.str());
    }
}

ComplexMatrix tangent_columns(const DensityOperator& rho, std::span<const ComplexMatrix> tangents) {
    const int d = rho.dim();
    const std::size_t g = static_cast<std::size_t>(d) * d - 1;
    if (tangents.size() != g) {
        std::ostringstream os;
        os << "parametrization has " << tangents.size() << " tangents, expected " << g;
        throw Error(ErrorCode::Dimension, os.str());
    }
    ComplexMatrix cols(static_cast<Eigen::Index>(d) * d, g);
    for (std::size_t a = 0; a < g; ++a) {
        if (tangents[a].rows() != d || tangents[a].cols() != d) {
            throw Error(ErrorCode::Dimension, "tangent shape differs from state");
        }
        if (std::abs(tangents[a].trace()) > 1e-10 * std::max(1.0, tangents[a].norm())) {
            throw Error(ErrorCode::Validation, "tangent operators must be traceless");
        }
        cols.col(a) = vec(tangents[a]);
    }
    return cols;
}

// Nonzero elements with their outcome probabilities.
struct Support {
    std::vector<std::size_t> index;
    std::vector<double> prob;
};

Support nonzero_support(const DensityOperator& rho, const Povm& povm, const Tolerances& tol) {
    RealVector p = outcome_probs(rho, povm);
    Support s;
    for (std::size_t j = 0; j < povm.size(); ++j) {
        if (povm.element(j).norm() <= tol.zero_tol) continue;
        if (p(j) <= tol.zero_tol) {
            // impossible for a positive definite state; kept as a guard
            std::ostringstream os;
            os << "element " << j << " is nonzero but has outcome probability " << p(j);
            throw Error(ErrorCode::Validation, os.str());
        }
        s.index.push_back(j);
        s.prob.push_back(p(j));
    }
    return s;
}

RealVector descending(RealVector v) {
    std::sort(v.data(), v.data() + v.size(), std::greater<>());
    return v;
}

}  // namespace

RealVector outcome_probs(const DensityOperator& rho, const Povm& povm) {
    require_same_dim(rho, povm);
    RealVector p(povm.size());
    for (std::size_t j = 0; j < povm.size(); ++j) {
        double pj = (rho.matrix() * povm.element(j)).trace().real();
        p(j) = std::clamp(pj, 0.0, 1.0);
    }
    return p;
}

ComplexMatrix f_superop(const DensityOperator& rho, const Povm& povm, bool traceless,
                        const Tolerances& tol) {
    require_same_dim(rho, povm);
    const int d = rho.dim();
    Support support = nonzero_support(rho, povm, tol);
    ComplexMatrix f = ComplexMatrix::Zero(d * d, d * d);
    for (std::size_t i = 0; i < support.index.size(); ++i) {
        const ComplexMatrix& a = povm.element(support.index[i]);
        ComplexVector ket = traceless ? vec(a - ComplexMatrix::Identity(d, d) * (a.trace() / double(d)))
                                      : vec(a);
        f += ket * ket.adjoint() / support.prob[i];
    }
    return hermitian_part(f);
}

RealMatrix classical_fim(const DensityOperator& rho, const Povm& povm,
                         std::span<const ComplexMatrix> tangents, const Tolerances& tol) {
    ComplexMatrix t = tangent_columns(rho, tangents);
    ComplexMatrix fbar = f_superop(rho, povm, true, tol);
    return (t.adjoint() * fbar * t).real();
}

RealMatrix classical_fim(const DensityOperator& rho, const Povm& povm, const TracelessBasis& basis,
                         const Tolerances& tol) {
    return classical_fim(rho, povm, basis.operators, tol);
}

ComplexMatrix sld_solve(const DensityOperator& rho, const ComplexMatrix& x) {
    const int d = rho.dim();
    if (x.rows() != d || x.cols() != d) throw Error(ErrorCode::Dimension, "sld_solve: shape mismatch");
    const ComplexMatrix& u = rho.eigenvectors();
    const RealVector& lambda = rho.eigenvalues();
    ComplexMatrix xe = u.adjoint() * x * u;
    for (int m = 0; m < d; ++m) {
        for (int n = 0; n < d; ++n) xe(m, n) *= 2.0 / (lambda(m) + lambda(n));
    }
    return u * xe * u.adjoint();
}

ComplexMatrix qfim(const DensityOperator& rho, std::span<const ComplexMatrix> tangents, FimKind kind) {
    ComplexMatrix t = tangent_columns(rho, tangents);
    ComplexMatrix k_inv = mult_superop_power(rho, metric_superop(kind), -1.0);
    return hermitian_part(t.adjoint() * k_inv * t);
}

ComplexMatrix qfim(const DensityOperator& rho, const TracelessBasis& basis, FimKind kind) {
    return qfim(rho, basis.operators, kind);
}

ComplexMatrix traceless_metric_pinv(const DensityOperator& rho, MultKind k) {
    ComplexVector r = vec(rho.matrix());
    return hermitian_part(mult_superop(rho, k) - ket_bra(r, r));
}

ComplexMatrix metric_adjusted_superop(const DensityOperator& rho, const Povm& povm, FimKind kind,
                                      bool traceless, const Tolerances& tol) {
    ComplexMatrix f = f_superop(rho, povm, traceless, tol);
    ComplexMatrix root = traceless ? psd_sqrt(traceless_metric_pinv(rho, metric_superop(kind)), tol)
                                   : mult_superop_power(rho, metric_superop(kind), 0.5);
    return hermitian_part(root * f * root);
}

RealVector fisher_eigenvalues_unclipped(const DensityOperator& rho, const Povm& povm, FimKind kind,
                                        const Tolerances& tol) {
    // Fbar_K maps into the traceless subspace and annihilates |1>>, so its
    // restriction to an orthonormal traceless basis carries the g Fisher eigenvalues.
    ComplexMatrix b = gell_mann_basis(rho.dim()).columns();
    ComplexMatrix fbar_k = metric_adjusted_superop(rho, povm, kind, true, tol);
    return hermitian_eigenvalues(hermitian_part(b.adjoint() * fbar_k * b), tol);
}

RealVector fisher_spectrum(const DensityOperator& rho, const Povm& povm, FimKind kind,
                           const Tolerances& tol) {
    RealVector values = fisher_eigenvalues_unclipped(rho, povm, kind, tol);
    return values.cwiseMax(0.0).cwiseMin(1.0);
}

ComplexMatrix metric_adjusted_fim(const DensityOperator& rho, const Povm& povm,
                                  std::span<const ComplexMatrix> tangents, FimKind kind,
                                  const Tolerances& tol) {
    RealMatrix fim = classical_fim(rho, povm, tangents, tol);
    ComplexMatrix j_inv_sqrt = pd_power(qfim(rho, tangents, kind), -0.5, tol);
    return hermitian_part(j_inv_sqrt * fim.cast<Complex>() * j_inv_sqrt);
}

RealVector fisher_spectrum_pencil(const DensityOperator& rho, const Povm& povm,
                                  std::span<const ComplexMatrix> tangents, FimKind kind,
                                  const Tolerances& tol) {
    return hermitian_eigenvalues(metric_adjusted_fim(rho, povm, tangents, kind, tol), tol);
}

ComplexMatrix gram_matrix(const DensityOperator& rho, const Povm& povm, FimKind kind, bool traceless,
                          const Tolerances& tol) {
    require_same_dim(rho, povm);
    Support support = nonzero_support(rho, povm, tol);
    const ComplexMatrix& r = rho.matrix();
    const auto n = static_cast<Eigen::Index>(support.index.size());
    ComplexMatrix g(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const ComplexMatrix& aj = povm.element(support.index[j]);
        for (Eigen::Index k = 0; k < n; ++k) {
            const ComplexMatrix& ak = povm.element(support.index[k]);
            Complex left = (r * ak * aj).trace();   // <<A_j|L|A_k>>
            Complex right = (r * aj * ak).trace();  // <<A_j|R|A_k>>
            Complex value;
            switch (metric_superop(kind)) {
                case MultKind::Left: value = left; break;
                case MultKind::Right: value = right; break;
                case MultKind::Sym: value = 0.5 * (left + right); break;
            }
            double scale = std::sqrt(support.prob[j] * support.prob[k]);
            // <<A_j|rho>><<rho|A_k>> = p_j p_k
            if (traceless) value -= support.prob[j] * support.prob[k];
            g(j, k) = value / scale;
        }
    }
    return hermitian_part(g);
}

RealVector gram_spectrum(const DensityOperator& rho, const Povm& povm, FimKind kind, bool traceless,
                         const Tolerances& tol) {
    return hermitian_eigenvalues(gram_matrix(rho, povm, kind, traceless, tol), tol);
}

int multiplicity_of_one(const RealVector& values, const Tolerances& tol) {
    int count = 0;
    for (double v : values) {
        if (std::abs(v - 1.0) <= tol.eig_one_tol) ++count;
    }
    return count;
}

SpectrumSummary spectrum_summary(const RealVector& spectrum, int d, const Tolerances& tol) {
    if (d < 2) throw Error(ErrorCode::Dimension, "spectrum_summary needs d >= 2");
    SpectrumSummary s;
    s.gill_massar_trace = spectrum.sum();
    s.purity = spectrum.squaredNorm() / (d - 1);
    s.sharpness_index = multiplicity_of_one(spectrum, tol);
    bool all_zero_or_one = true;
    for (double v : spectrum) {
        if (std::abs(v) > tol.eig_one_tol && std::abs(v - 1.0) > tol.eig_one_tol) {
            all_zero_or_one = false;
        }
        if (v > tol.zero_tol) ++s.fisher_rank;
    }
    s.is_fisher_sharp = all_zero_or_one && s.sharpness_index >= 1;
    return s;
}

bool is_fisher_symmetric(const RealVector& spectrum, const Tolerances& tol) {
    if (spectrum.size() == 0) return false;
    return spectrum.maxCoeff() - spectrum.minCoeff() <= tol.eig_one_tol;
}

FisherReport analyze(const DensityOperator& rho, const Povm& povm, FimKind kind, const Tolerances& tol) {
    FisherReport report;
    report.kind = kind;
    report.spectrum = descending(fisher_spectrum(rho, povm, kind, tol));
    SpectrumSummary s = spectrum_summary(report.spectrum, rho.dim(), tol);
    report.purity = s.purity;
    report.gill_massar_trace = s.gill_massar_trace;
    report.sharpness_index = s.sharpness_index;
    report.is_fisher_sharp = s.is_fisher_sharp;
    report.fisher_rank = s.fisher_rank;
    report.near_boundary = rho.near_boundary();
    return report;
}

}  // namespace qfc
