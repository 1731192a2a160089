#include "qfc/povm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qfc {

namespace {

constexpr double kCompletenessTol = 1e-9;
constexpr double kIdempotencyTol = 1e-9;
constexpr double kComponentIdempotencyTol = 1e-8;

}  // namespace

struct PovmBuilder {
    static Povm make(std::vector<ComplexMatrix> elements, ComplexMatrix target) {
        return Povm(std::move(elements), std::move(target));
    }
};

bool Povm::has_identity_target() const {
    return (target_ - ComplexMatrix::Identity(dim(), dim())).norm() <= kCompletenessTol;
}

Povm validate_povm(std::vector<ComplexMatrix> elements, std::optional<ComplexMatrix> completeness_target,
                   const Tolerances& tol) {
    if (elements.empty()) throw Error(ErrorCode::Validation, "POVM has no elements");
    const Eigen::Index d = elements.front().rows();
    if (d < 1) throw Error(ErrorCode::Dimension, "POVM elements must be nonempty square matrices");

    ComplexMatrix target =
        completeness_target ? *completeness_target : ComplexMatrix::Identity(d, d);
    if (target.rows() != d || target.cols() != d) {
        throw Error(ErrorCode::Dimension, "completeness target shape differs from POVM elements");
    }
    if (!is_hermitian(target, tol.zero_tol) ||
        (target * target - target).norm() > kCompletenessTol) {
        throw Error(ErrorCode::Validation, "completeness target is not a projector");
    }
    target = hermitian_part(target);

    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    for (std::size_t j = 0; j < elements.size(); ++j) {
        ComplexMatrix& a = elements[j];
        if (a.rows() != d || a.cols() != d) {
            std::ostringstream os;
            os << "element " << j << ": shape " << a.rows() << "x" << a.cols() << ", expected " << d
               << "x" << d;
            throw Error(ErrorCode::Dimension, os.str());
        }
        if (!is_hermitian(a, tol.zero_tol)) {
            std::ostringstream os;
            os << "element " << j << ": not Hermitian";
            throw Error(ErrorCode::Validation, os.str());
        }
        a = hermitian_part(a);
        double lambda_min = min_eigenvalue(a, tol);
        if (lambda_min < -tol.psd_tol) {
            std::ostringstream os;
            os << "element " << j << ": eigenvalue " << lambda_min << " below -psd_tol";
            throw Error(ErrorCode::NotPsd, os.str());
        }
        sum += a;
    }
    double residual = (sum - target).norm();
    if (residual > kCompletenessTol) {
        std::ostringstream os;
        os << "completeness residual " << residual << " exceeds " << kCompletenessTol;
        throw Error(ErrorCode::Validation, os.str());
    }
    return Povm(std::move(elements), std::move(target));
}

SimplifiedPovm simplify_povm(const Povm& povm, const Tolerances& tol) {
    std::vector<ComplexMatrix> merged;
    std::vector<ComplexMatrix> directions;  // normalized representative of each group
    std::vector<std::optional<std::size_t>> map(povm.size());
    for (std::size_t j = 0; j < povm.size(); ++j) {
        const ComplexMatrix& a = povm.element(j);
        double norm = a.norm();
        if (norm <= tol.zero_tol) continue;
        ComplexMatrix direction = a / norm;
        for (std::size_t g = 0; g < directions.size(); ++g) {
            if ((direction - directions[g]).norm() <= tol.zero_tol) {
                map[j] = g;
                merged[g] += a;
                break;
            }
        }
        if (!map[j]) {
            map[j] = merged.size();
            merged.push_back(a);
            directions.push_back(std::move(direction));
        }
    }
    if (merged.empty()) throw Error(ErrorCode::Degenerate, "every POVM element is zero");
    return {PovmBuilder::make(std::move(merged), povm.completeness_target()), std::move(map)};
}

PovmClassification classify_povm(const Povm& povm, const Tolerances& tol) {
    PovmClassification c;
    const std::size_t m = povm.size();
    std::vector<double> norms(m);
    for (std::size_t j = 0; j < m; ++j) {
        norms[j] = povm.element(j).norm();
        if (norms[j] <= tol.zero_tol) ++c.num_zero_elements;
    }

    bool proportional_pair = false;
    for (std::size_t j = 0; j < m && !proportional_pair; ++j) {
        if (norms[j] <= tol.zero_tol) continue;
        for (std::size_t k = j + 1; k < m; ++k) {
            if (norms[k] <= tol.zero_tol) continue;
            if ((povm.element(j) / norms[j] - povm.element(k) / norms[k]).norm() <= tol.zero_tol) {
                proportional_pair = true;
                break;
            }
        }
    }
    c.is_simple = c.num_zero_elements == 0 && !proportional_pair;

    c.is_pvm = true;
    for (std::size_t j = 0; j < m && c.is_pvm; ++j) {
        const ComplexMatrix& a = povm.element(j);
        if ((a * a - a).norm() > kIdempotencyTol) c.is_pvm = false;
        for (std::size_t k = j + 1; k < m && c.is_pvm; ++k) {
            if (std::abs(hs_inner(a, povm.element(k))) > kIdempotencyTol) c.is_pvm = false;
        }
    }

    c.is_rank_one = true;
    for (std::size_t j = 0; j < m; ++j) {
        if (norms[j] <= tol.zero_tol) continue;
        if (numeric_rank(povm.element(j), tol) != 1) {
            c.is_rank_one = false;
            break;
        }
    }

    ComplexMatrix gram(m, m);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = 0; k < m; ++k) gram(j, k) = hs_inner(povm.element(j), povm.element(k));
    }
    c.span_dim = numeric_rank(hermitian_part(gram), tol);
    return c;
}

namespace {

struct DisjointSets {
    std::vector<std::size_t> parent;
    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

}  // namespace

ComponentDecomposition irreducible_components(const Povm& povm, const Tolerances& tol) {
    const std::size_t m = povm.size();
    std::vector<double> norms(m);
    for (std::size_t j = 0; j < m; ++j) norms[j] = povm.element(j).norm();

    DisjointSets sets(m);
    for (std::size_t j = 0; j < m; ++j) {
        if (norms[j] <= tol.zero_tol) continue;
        for (std::size_t k = j + 1; k < m; ++k) {
            if (norms[k] <= tol.zero_tol) continue;
            // tr(A_j A_k) >= 0 for PSD pairs and vanishes iff A_j A_k = 0
            double overlap = std::abs(hs_inner(povm.element(j), povm.element(k)));
            if (overlap > tol.zero_tol * norms[j] * norms[k]) sets.unite(j, k);
        }
    }

    ComponentDecomposition out;
    out.component_assignment.assign(m, std::nullopt);
    std::vector<std::optional<std::size_t>> root_to_component(m);
    const int d = povm.dim();
    for (std::size_t j = 0; j < m; ++j) {
        if (norms[j] <= tol.zero_tol) continue;
        std::size_t root = sets.find(j);
        if (!root_to_component[root]) {
            root_to_component[root] = out.component_projectors.size();
            out.component_projectors.push_back(ComplexMatrix::Zero(d, d));
        }
        std::size_t c = *root_to_component[root];
        out.component_assignment[j] = c;
        out.component_projectors[c] += povm.element(j);
    }
    out.gamma = static_cast<int>(out.component_projectors.size());
    for (const ComplexMatrix& p : out.component_projectors) {
        out.max_idempotency_residual = std::max(out.max_idempotency_residual, (p * p - p).norm());
    }
    out.projectors_idempotent = out.max_idempotency_residual <= kComponentIdempotencyTol;
    return out;
}

Povm finest_pvm(const Povm& povm, const Tolerances& tol) {
    SimplifiedPovm simple = simplify_povm(povm, tol);
    ComponentDecomposition comps = irreducible_components(simple.povm, tol);
    return validate_povm(std::move(comps.component_projectors), povm.completeness_target(), tol);
}

Povm coarse_grain(const Povm& povm, const RealMatrix& stochastic_matrix, const Tolerances& tol) {
    const RealMatrix& lambda = stochastic_matrix;
    if (lambda.cols() != static_cast<Eigen::Index>(povm.size()) || lambda.rows() < 1) {
        std::ostringstream os;
        os << "stochastic matrix has " << lambda.cols() << " columns, POVM has " << povm.size()
           << " elements";
        throw Error(ErrorCode::Dimension, os.str());
    }
    for (Eigen::Index k = 0; k < lambda.cols(); ++k) {
        if ((lambda.col(k).array() < 0.0).any() || !lambda.col(k).allFinite() ||
            std::abs(lambda.col(k).sum() - 1.0) > 1e-12) {
            std::ostringstream os;
            os << "stochastic matrix column " << k << " is not a probability vector (sum "
               << lambda.col(k).sum() << ")";
            throw Error(ErrorCode::Validation, os.str());
        }
    }
    const int d = povm.dim();
    std::vector<ComplexMatrix> out(lambda.rows(), ComplexMatrix::Zero(d, d));
    for (Eigen::Index j = 0; j < lambda.rows(); ++j) {
        for (Eigen::Index k = 0; k < lambda.cols(); ++k) {
            if (lambda(j, k) != 0.0) out[j] += lambda(j, k) * povm.element(k);
        }
    }
    return validate_povm(std::move(out), povm.completeness_target(), tol);
}

RealMatrix grouping_matrix(std::span<const std::size_t> assignment, std::size_t num_groups) {
    RealMatrix lambda = RealMatrix::Zero(num_groups, assignment.size());
    for (std::size_t k = 0; k < assignment.size(); ++k) {
        if (assignment[k] >= num_groups) {
            throw Error(ErrorCode::Validation, "grouping assignment out of range");
        }
        lambda(assignment[k], k) = 1.0;
    }
    return lambda;
}

ComplexMatrix TracelessBasis::columns() const {
    ComplexMatrix cols(static_cast<Eigen::Index>(dim) * dim, operators.size());
    for (std::size_t a = 0; a < operators.size(); ++a) cols.col(a) = vec(operators[a]);
    return cols;
}

TracelessBasis gell_mann_basis(int d) {
    if (d < 2) throw Error(ErrorCode::Dimension, "Gell-Mann basis needs d >= 2");
    TracelessBasis basis;
    basis.dim = d;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int j = 0; j < d; ++j) {
        for (int k = j + 1; k < d; ++k) {
            ComplexMatrix sym = ComplexMatrix::Zero(d, d);
            sym(j, k) = inv_sqrt2;
            sym(k, j) = inv_sqrt2;
            ComplexMatrix anti = ComplexMatrix::Zero(d, d);
            anti(j, k) = Complex(0.0, -inv_sqrt2);
            anti(k, j) = Complex(0.0, inv_sqrt2);
            basis.operators.push_back(std::move(sym));
            basis.operators.push_back(std::move(anti));
        }
    }
    for (int l = 1; l < d; ++l) {
        ComplexMatrix diag = ComplexMatrix::Zero(d, d);
        double norm = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
        for (int k = 0; k < l; ++k) diag(k, k) = norm;
        diag(l, l) = -l * norm;
        basis.operators.push_back(std::move(diag));
    }
    return basis;
}

TracelessBasis rotate_basis(const TracelessBasis& basis, const RealMatrix& orthogonal) {
    const auto g = static_cast<Eigen::Index>(basis.size());
    if (orthogonal.rows() != g || orthogonal.cols() != g) {
        throw Error(ErrorCode::Dimension, "rotation size differs from basis size");
    }
    if ((orthogonal.transpose() * orthogonal - RealMatrix::Identity(g, g)).norm() > 1e-10) {
        throw Error(ErrorCode::Validation, "rotation matrix is not orthogonal");
    }
    TracelessBasis out;
    out.dim = basis.dim;
    for (Eigen::Index a = 0; a < g; ++a) {
        ComplexMatrix e = ComplexMatrix::Zero(basis.dim, basis.dim);
        for (Eigen::Index b = 0; b < g; ++b) e += orthogonal(a, b) * basis.operators[b];
        out.operators.push_back(std::move(e));
    }
    return out;
}

Povm qubit_povm_from_bloch(std::span<const double> weights,
                           std::span<const Eigen::Vector3d> bloch_vectors) {
    if (weights.empty() || weights.size() != bloch_vectors.size()) {
        throw Error(ErrorCode::Dimension, "need one Bloch vector per weight");
    }
    double weight_sum = 0.0;
    Eigen::Vector3d moment = Eigen::Vector3d::Zero();
    for (std::size_t j = 0; j < weights.size(); ++j) {
        if (!(weights[j] > 0.0)) {
            std::ostringstream os;
            os << "weight " << j << " = " << weights[j] << " is not positive";
            throw Error(ErrorCode::Validation, os.str());
        }
        if (bloch_vectors[j].norm() > 1.0 + 1e-12) {
            std::ostringstream os;
            os << "Bloch vector " << j << " has length " << bloch_vectors[j].norm() << " > 1";
            throw Error(ErrorCode::Validation, os.str());
        }
        weight_sum += weights[j];
        moment += weights[j] * bloch_vectors[j];
    }
    if (std::abs(weight_sum - 1.0) > 1e-10) {
        std::ostringstream os;
        os << "weights sum to " << weight_sum << " (residual " << std::abs(weight_sum - 1.0) << ")";
        throw Error(ErrorCode::Validation, os.str());
    }
    if (moment.norm() > 1e-10) {
        std::ostringstream os;
        os << "weighted Bloch vectors do not cancel (residual " << moment.norm() << ")";
        throw Error(ErrorCode::Validation, os.str());
    }
    std::vector<ComplexMatrix> elements;
    for (std::size_t j = 0; j < weights.size(); ++j) {
        ComplexMatrix a = ComplexMatrix::Identity(2, 2);
        a(0, 0) += bloch_vectors[j](2);
        a(1, 1) -= bloch_vectors[j](2);
        a(0, 1) = Complex(bloch_vectors[j](0), -bloch_vectors[j](1));
        a(1, 0) = Complex(bloch_vectors[j](0), bloch_vectors[j](1));
        elements.push_back(weights[j] * a);
    }
    return validate_povm(std::move(elements));
}

Povm qubit_sic() {
    const double w[4] = {0.25, 0.25, 0.25, 0.25};
    const double n = 1.0 / std::sqrt(3.0);
    const Eigen::Vector3d r[4] = {Eigen::Vector3d(1, 1, 1) * n, Eigen::Vector3d(1, -1, -1) * n,
                                  Eigen::Vector3d(-1, 1, -1) * n, Eigen::Vector3d(-1, -1, 1) * n};
    return qubit_povm_from_bloch(w, r);
}

}  // namespace qfc
