#include "checks.hpp"

#include "qfc/fisher.hpp"
#include "qfc/order.hpp"
#include "qfc/povm.hpp"
#include "qfc/qubit.hpp"
#include "qfc/superop.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

namespace qfc::detail {

namespace {

constexpr int kStatesPerTrial = 5;
constexpr int kMaxScreeningAttempts = 100;
constexpr double kSaturationTol = 1e-6;
constexpr double kInequalityTol = 1e-9;
constexpr double kGillMassarTol = 1e-8;
constexpr double kDistinctTol = 1e-6;

// Screening always uses the default cutoffs so that instance selection does not
// move when a caller experiments with other tolerances.
const Tolerances kScreenTol{};

class Tally {
  public:
    void residual(double r) {
        if (std::isnan(r)) r = std::numeric_limits<double>::infinity();
        out_.residual = std::max(out_.residual, r);
    }

    void require(bool ok, const std::string& what) {
        if (!ok && out_.passed) {
            out_.passed = false;
            out_.note = what;
        }
    }

    // value <= bound, residual is the excess
    void at_most(double value, double bound, const std::string& what) {
        residual(std::max(0.0, value - bound));
        std::ostringstream os;
        os << what << ": " << value << " > " << bound;
        require(value <= bound, os.str());
    }

    // |a - b| <= tol, residual is the distance
    void close(double distance, double tol, const std::string& what) {
        residual(distance);
        std::ostringstream os;
        os << what << ": distance " << distance << " > " << tol;
        require(distance <= tol, os.str());
    }

    TrialOutcome take() { return std::move(out_); }
    bool passed() const { return out_.passed; }

  private:
    TrialOutcome out_;
};

RealVector sorted_desc(RealVector v) {
    std::sort(v.data(), v.data() + v.size(), std::greater<>());
    return v;
}

double max_abs_diff(const RealVector& a, const RealVector& b) {
    const Eigen::Index n = std::max(a.size(), b.size());
    RealVector pa = RealVector::Zero(n), pb = RealVector::Zero(n);
    pa.head(a.size()) = sorted_desc(a);
    pb.head(b.size()) = sorted_desc(b);
    return n == 0 ? 0.0 : (pa - pb).cwiseAbs().maxCoeff();
}

// Largest distance from a value counted as 1 to 1.
double one_residual(const RealVector& values, const Tolerances& tol) {
    double r = 0.0;
    for (double v : values) {
        if (std::abs(v - 1.0) <= tol.eig_one_tol) r = std::max(r, std::abs(v - 1.0));
    }
    return r;
}

// Distance of the spectrum from {0, 1}.
double projector_distance(const RealVector& values) {
    double r = 0.0;
    for (double v : values) r = std::max(r, std::min(std::abs(v), std::abs(v - 1.0)));
    return r;
}

double relative(double distance, double scale) { return distance / std::max(1.0, scale); }

std::string kind_label(const char* what, FimKind kind) {
    return std::string(what) + " [" + to_string(kind) + "]";
}

struct Instance {
    Povm povm;
    std::vector<DensityOperator> states;
};

enum class PvmRequirement { Any, Pvm, NonPvm };

struct InstanceOptions {
    bool near_boundary_state = false;  // last state drawn near the boundary
    PvmRequirement pvm = PvmRequirement::Any;
    bool subspace = false;             // POVM on a random proper subspace
};

std::vector<DensityOperator> make_states(std::uint64_t seed, int d, bool near_boundary) {
    std::vector<DensityOperator> states;
    for (int i = 0; i < kStatesPerTrial; ++i) {
        Flavor f = near_boundary && i == kStatesPerTrial - 1 ? Flavor::NearBoundaryState
                                                            : Flavor::FullRankState;
        states.push_back(random_state(derive_seed(seed, 1000 + i), d, f));
    }
    return states;
}

// No eigenvalue of F_K with gap to 1 in (1e-3, 100) * eig_one_tol. The structural
// eigenvalues 1 come out exact to ~1e-15, while near the boundary other
// eigenvalues approach 1 at a rate set by the smallest eigenvalue of rho and can
// land inside the counting band itself.
bool clear_of_one(const Povm& povm, const std::vector<DensityOperator>& states) {
    const double hi = 1.0 - 1e-3 * kScreenTol.eig_one_tol;
    const double lo = 1.0 - 100.0 * kScreenTol.eig_one_tol;
    for (const DensityOperator& rho : states) {
        for (FimKind kind : kAllFimKinds) {
            RealVector values =
                hermitian_eigenvalues(metric_adjusted_superop(rho, povm, kind, false, kScreenTol));
            for (double v : values) {
                if (v > lo && v < hi) return false;
            }
        }
    }
    return true;
}

// Each attempt redraws the POVM and the states.
std::optional<Instance> generate(const CaseSpec& spec, const InstanceOptions& options) {
    for (int attempt = 0; attempt < kMaxScreeningAttempts; ++attempt) {
        std::uint64_t seed = derive_seed(spec.seed, attempt);
        Povm povm = options.subspace ? random_subspace_povm(seed, spec.d, spec.m)
                                     : random_povm(seed, spec.d, spec.m, spec.flavor);
        PovmClassification c = classify_povm(povm, kScreenTol);
        if (!c.is_simple) continue;
        if (options.pvm == PvmRequirement::Pvm && !c.is_pvm) continue;
        if (options.pvm == PvmRequirement::NonPvm && c.is_pvm) continue;
        std::vector<DensityOperator> states =
            make_states(derive_seed(seed, 0x5eed), spec.d, options.near_boundary_state);
        if (!clear_of_one(povm, states)) continue;
        return Instance{std::move(povm), std::move(states)};
    }
    return std::nullopt;
}

TrialOutcome exhausted() {
    TrialOutcome out;
    out.passed = false;
    out.note = "screening exhausted after 100 attempts";
    out.residual = std::numeric_limits<double>::infinity();
    return out;
}

#define QFC_GENERATE(inst, spec, ...)                      \
    auto inst##_opt = generate(spec, InstanceOptions{__VA_ARGS__}); \
    if (!inst##_opt) return exhausted();                  \
    Instance& inst = *inst##_opt

bool next_partition(std::vector<std::size_t>& rgs) {
    for (std::size_t i = rgs.size(); i-- > 1;) {
        if (rgs[i] <= *std::max_element(rgs.begin(), rgs.begin() + static_cast<std::ptrdiff_t>(i))) {
            ++rgs[i];
            std::fill(rgs.begin() + static_cast<std::ptrdiff_t>(i) + 1, rgs.end(), 0);
            return true;
        }
    }
    return false;
}

bool is_rank_one_pvm(const PovmClassification& c) { return c.is_pvm && c.is_rank_one; }

std::vector<ComplexMatrix> basis_ops(int d) { return gell_mann_basis(d).operators; }

// ---------------------------------------------------------------------------

TrialOutcome check_prop1(const CaseSpec& spec, const Tolerances& tol) {
    QFC_GENERATE(inst, spec);
    const Povm& a = inst.povm;
    const std::size_t m = a.size();
    Tally t;

    ComponentDecomposition comps = irreducible_components(a, tol);
    Povm p = finest_pvm(a, tol);
    PovmClassification pc = classify_povm(p, tol);
    PovmClassification ac = classify_povm(a, tol);
    t.require(pc.is_pvm, "finest PVM is not a PVM");
    t.require(static_cast<int>(p.size()) == comps.gamma, "finest PVM size differs from gamma");
    t.require(irreducible_components(p, tol).gamma == comps.gamma, "gamma(P(A)) != gamma(A)");
    t.require(comps.gamma <= spec.d, "gamma exceeds d");
    t.require((comps.gamma == spec.d) == is_rank_one_pvm(ac),
              "gamma = d does not match rank-1 PVM classification");
    t.residual(comps.max_idempotency_residual);

    // grouping by component reproduces P(A)
    std::vector<std::size_t> assignment(m);
    for (std::size_t j = 0; j < m; ++j) assignment[j] = comps.component_assignment[j].value();
    Povm grouped = coarse_grain(a, grouping_matrix(assignment, comps.gamma), tol);
    for (std::size_t c = 0; c < grouped.size(); ++c) {
        t.close((grouped.element(c) - p.element(c)).norm(), 1e-12, "component grouping vs P(A)");
    }

    // every set partition of the outcomes, as restricted growth strings
    std::vector<std::size_t> rgs(m, 0);
    do {
        std::size_t blocks = *std::max_element(rgs.begin(), rgs.end()) + 1;
        Povm b = coarse_grain(a, grouping_matrix(rgs, blocks), tol);
        bool pvm = classify_povm(b, tol).is_pvm;
        bool groups_components = true;
        std::vector<std::optional<std::size_t>> block_of(comps.gamma);
        for (std::size_t j = 0; j < m; ++j) {
            auto& slot = block_of[assignment[j]];
            if (!slot) slot = rgs[j];
            else if (*slot != rgs[j]) groups_components = false;
        }
        t.require(pvm == groups_components,
                  pvm ? "PVM coarse graining that is not a grouping of P(A)"
                      : "grouping of P(A) that is not a PVM");
        if (pvm) {
            for (const ComplexMatrix& e : b.elements()) t.residual((e * e - e).norm());
        }
    } while (next_partition(rgs));

    // fractional stochastic matrices never give a PVM
    Rng rng(derive_seed(spec.seed, 5000));
    for (int trial = 0; trial < 3; ++trial) {
        const int rows = std::uniform_int_distribution<int>(2, static_cast<int>(m) + 1)(rng);
        RealMatrix lambda = RealMatrix::Zero(rows, m);
        std::uniform_int_distribution<int> pick_row(0, rows - 1);
        for (std::size_t k = 0; k < m; ++k) lambda(pick_row(rng), k) = 1.0;
        std::size_t col = std::uniform_int_distribution<std::size_t>(0, m - 1)(rng);
        int r1 = pick_row(rng);
        int r2 = (r1 + std::uniform_int_distribution<int>(1, rows - 1)(rng)) % rows;
        double w = std::uniform_real_distribution<double>(0.1, 0.9)(rng);
        lambda.col(col).setZero();
        lambda(r1, col) = w;
        lambda(r2, col) = 1.0 - w;
        t.require(!classify_povm(coarse_grain(a, lambda, tol), tol).is_pvm,
                  "fractional coarse graining produced a PVM");
    }
    return t.take();
}

TrialOutcome check_prop2(const CaseSpec& spec, const Tolerances& tol) {
    QFC_GENERATE(inst, spec, .pvm = PvmRequirement::Pvm);
    const Povm& a = inst.povm;
    Tally t;
    Rng rng(derive_seed(spec.seed, 6000));
    std::vector<std::size_t> perm(a.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<ComplexMatrix> permuted;
    for (std::size_t j : perm) permuted.push_back(a.element(j));
    Povm b = validate_povm(std::move(permuted));
    Povm c = random_povm(derive_seed(spec.seed, 6001), spec.d, static_cast<int>(a.size()),
                         Flavor::RandomPvm);
    const auto basis = basis_ops(spec.d);
    for (const DensityOperator& rho : inst.states) {
        ComplexMatrix fa = f_superop(rho, a, false, tol);
        RealMatrix ia = classical_fim(rho, a, basis, tol);
        t.close((fa - f_superop(rho, b, false, tol)).norm(), 1e-10, "F differs under permutation");
        t.close((ia - classical_fim(rho, b, basis, tol)).norm(), 1e-10, "I differs under permutation");
        double df = (fa - f_superop(rho, c, false, tol)).norm();
        double di = (ia - classical_fim(rho, c, basis, tol)).norm();
        t.require(df > kDistinctTol, "distinct PVMs share F");
        t.require(di > kDistinctTol, "distinct PVMs share I");
    }
    return t.take();
}

TrialOutcome check_thm1(const CaseSpec& spec, const Tolerances& tol) {
    QFC_GENERATE(inst, spec, .near_boundary_state = true);
    Tally t;
    const int gamma = irreducible_components(inst.povm, tol).gamma;
    const bool rank_one_pvm = is_rank_one_pvm(classify_povm(inst.povm, tol));
    for (const DensityOperator& rho : inst.states) {
        RealVector spectrum = fisher_eigenvalues_unclipped(rho, inst.povm, FimKind::Sld, tol);
        int zeta = multiplicity_of_one(spectrum, tol);
        t.residual(one_residual(spectrum, tol));
        t.require(zeta == gamma - 1, "zeta != gamma - 1");
        t.require(zeta <= spec.d - 1, "zeta exceeds d - 1");
        t.require((zeta == spec.d - 1) == rank_one_pvm, "zeta = d - 1 does not match rank-1 PVM");
    }
    return t.take();
}

TrialOutcome check_thm2(const CaseSpec& spec, const Tolerances& tol) {
    const bool want_pvm = spec.variant % 2 == 0;
    QFC_GENERATE(inst, spec, .near_boundary_state = true,
                 .pvm = want_pvm ? PvmRequirement::Pvm : PvmRequirement::NonPvm);
    Tally t;
    for (const DensityOperator& rho : inst.states) {
        RealVector spectrum = fisher_eigenvalues_unclipped(rho, inst.povm, FimKind::Sld, tol);
        bool sharp = spectrum_summary(spectrum, spec.d, tol).is_fisher_sharp;
        if (want_pvm) {
            t.residual(projector_distance(spectrum));
            t.require(sharp, "PVM is not Fisher sharp");
        } else {
            t.require(!sharp, "non-projective POVM is Fisher sharp");
        }
    }
    return t.take();
}

TrialOutcome check_thm3(const CaseSpec& spec, const Tolerances& tol) {
    QFC_GENERATE(inst, spec, .near_boundary_state = true);
    Tally t;
    const int gamma = irreducible_components(inst.povm, tol).gamma;
    const auto basis = basis_ops(spec.d);
    for (const DensityOperator& rho : inst.states) {
        for (FimKind kind : kAllFimKinds) {
            RealVector full = hermitian_eigenvalues(
                metric_adjusted_superop(rho, inst.povm, kind, false, tol), tol);
            RealVector fisher = fisher_eigenvalues_unclipped(rho, inst.povm, kind, tol);
            RealVector pencil = fisher_spectrum_pencil(rho, inst.povm, basis, kind, tol);
            t.residual(one_residual(full, tol));
            t.residual(one_residual(fisher, tol));
            t.residual(one_residual(pencil, tol));
            t.require(multiplicity_of_one(full, tol) == gamma, kind_label("mu(F_K) != gamma", kind));
            t.require(multiplicity_of_one(fisher, tol) == gamma - 1,
                      kind_label("mu(Fbar_K) != gamma - 1", kind));
            t.require(multiplicity_of_one(pencil, tol) == gamma - 1,
                      kind_label("mu(I_K) != gamma - 1", kind));
        }
    }
    return t.take();
}

TrialOutcome check_thm4(const CaseSpec& spec, const Tolerances& tol) {
    const bool want_pvm = spec.variant % 2 == 0;
    QFC_GENERATE(inst, spec, .near_boundary_state = true,
                 .pvm = want_pvm ? PvmRequirement::Pvm : PvmRequirement::NonPvm);
    Tally t;
    const auto basis = basis_ops(spec.d);
    for (const DensityOperator& rho : inst.states) {
        for (FimKind kind : kAllFimKinds) {
            const RealVector spectra[] = {
                fisher_spectrum_pencil(rho, inst.povm, basis, kind, tol),
                hermitian_eigenvalues(metric_adjusted_superop(rho, inst.povm, kind, true, tol), tol),
                hermitian_eigenvalues(metric_adjusted_superop(rho, inst.povm, kind, false, tol), tol),
            };
            const char* names[] = {"I_K", "Fbar_K", "F_K"};
            for (int i = 0; i < 3; ++i) {
                double dist = projector_distance(spectra[i]);
                bool projector = dist <= tol.eig_one_tol;
                if (want_pvm) {
                    t.residual(dist);
                    t.require(projector, kind_label(names[i], kind) + " of a PVM is not a projector");
                } else {
                    t.require(!projector, kind_label(names[i], kind) + " of a non-PVM is a projector");
                }
            }
        }
    }
    return t.take();
}

TrialOutcome check_cor1(const CaseSpec& spec, const Tolerances& tol) {
    QFC_GENERATE(inst, spec);
    Tally t;
    PovmClassification c = classify_povm(inst.povm, tol);
    const double r = c.span_dim;
    for (const DensityOperator& rho : inst.states) {
        RealVector spectrum = fisher_spectrum(rho, inst.povm, FimKind::Sld, tol);
        for (double p : {1.0, 1.5, 2.0, 3.0}) {
            double sum = spectrum.array().pow(p).sum();
            t.at_most(sum, r - 1.0 + kGillMassarTol, "tr I_S^p > dim span - 1");
            t.at_most(sum, spec.d - 1.0 + kGillMassarTol, "tr I_S^p > d - 1");
            bool first_saturated = std::abs(sum - (r - 1.0)) <= kSaturationTol;
            t.require(first_saturated == c.is_pvm, "dim span - 1 saturation does not match PVM");
            if (c.is_pvm) t.residual(std::abs(sum - (r - 1.0)));
            if (p > 1.0) {
                bool second_saturated = std::abs(sum - (spec.d - 1.0)) <= kSaturationTol;
                t.require(second_saturated == is_rank_one_pvm(c),
                          "d - 1 saturation does not match rank-1 PVM");
            }
        }
    }
    return t.take();
}

TrialOutcome check_cor2(const CaseSpec& spec, const Tolerances& tol) {
    QFC_GENERATE(inst, spec);
    Tally t;
    const bool rank_one_pvm = is_rank_one_pvm(classify_povm(inst.povm, tol));
    for (const DensityOperator& rho : inst.states) {
        double purity = analyze(rho, inst.povm, FimKind::Sld, tol).purity;
        t.at_most(purity, 1.0 + kGillMassarTol, "purity exceeds 1");
        bool maximal = std::abs(purity - 1.0) <= kSaturationTol;
        if (rank_one_pvm) t.residual(std::abs(purity - 1.0));
        t.require(maximal == rank_one_pvm, "purity 1 does not match rank-1 PVM");
    }
    return t.take();
}

TrialOutcome check_lem1(const CaseSpec& spec, const Tolerances& tol) {
    QFC_GENERATE(inst, spec);
    Tally t;
    const int span = classify_povm(inst.povm, tol).span_dim;
    const auto basis = basis_ops(spec.d);
    for (const DensityOperator& rho : inst.states) {
        t.require(numeric_rank(f_superop(rho, inst.povm, false, tol), tol) == span, "rk F != dim span");
        t.require(numeric_rank(f_superop(rho, inst.povm, true, tol), tol) == span - 1,
                  "rk Fbar != dim span - 1");
        RealMatrix fim = classical_fim(rho, inst.povm, basis, tol);
        t.require(numeric_rank(ComplexMatrix(fim.cast<Complex>()), tol) == span - 1,
                  "rk I != dim span - 1");
        for (FimKind kind : kAllFimKinds) {
            RealVector spectrum = fisher_spectrum(rho, inst.povm, kind, tol);
            t.require(spectrum_summary(spectrum, spec.d, tol).fisher_rank == span - 1,
                      kind_label("Fisher rank != dim span - 1", kind));
            t.require(numeric_rank(fisher_spectrum_pencil(rho, inst.povm, basis, kind, tol), tol) ==
                          span - 1,
                      kind_label("rk I_K != dim span - 1", kind));
        }
    }
    return t.take();
}

TrialOutcome check_lem2(const CaseSpec& spec, const Tolerances& tol) {
    QFC_GENERATE(inst, spec);
    const Povm& a = inst.povm;
    Tally t;
    Rng rng(derive_seed(spec.seed, 7000));
    std::vector<ComplexMatrix> elements = a.elements();
    switch (spec.variant % 3) {
        case 0: std::shuffle(elements.begin(), elements.end(), rng); break;
        case 1: {
            int zeros = std::uniform_int_distribution<int>(1, 2)(rng);
            for (int z = 0; z < zeros; ++z) {
                std::size_t pos = std::uniform_int_distribution<std::size_t>(0, elements.size())(rng);
                elements.insert(elements.begin() + static_cast<std::ptrdiff_t>(pos),
                                ComplexMatrix::Zero(spec.d, spec.d));
            }
            break;
        }
        default: {
            std::size_t j = std::uniform_int_distribution<std::size_t>(0, elements.size() - 1)(rng);
            double w = std::uniform_real_distribution<double>(0.1, 0.9)(rng);
            ComplexMatrix piece = (1.0 - w) * elements[j];
            elements[j] *= w;
            elements.push_back(piece);
            break;
        }
    }
    Povm b = validate_povm(std::move(elements));
    Povm c = random_povm(derive_seed(spec.seed, 7001), spec.d, spec.m, spec.flavor);
    const auto basis = basis_ops(spec.d);

    struct Objects {
        ComplexMatrix f, fbar, fim, fim_s;
    };
    auto objects = [&](const DensityOperator& rho, const Povm& p) {
        return Objects{f_superop(rho, p, false, tol), f_superop(rho, p, true, tol),
                       ComplexMatrix(classical_fim(rho, p, basis, tol).cast<Complex>()),
                       metric_adjusted_fim(rho, p, basis, FimKind::Sld, tol)};
    };
    for (const DensityOperator& rho : inst.states) {
        Objects oa = objects(rho, a), ob = objects(rho, b), oc = objects(rho, c);
        const std::pair<const char*, std::array<const ComplexMatrix*, 3>> rows[] = {
            {"F", {&oa.f, &ob.f, &oc.f}},
            {"Fbar", {&oa.fbar, &ob.fbar, &oc.fbar}},
            {"I", {&oa.fim, &ob.fim, &oc.fim}},
            {"I_S", {&oa.fim_s, &ob.fim_s, &oc.fim_s}},
        };
        for (const auto& [name, m] : rows) {
            double scale = m[0]->norm();
            t.close(relative((*m[0] - *m[1]).norm(), scale), 1e-9,
                    std::string(name) + " differs for equivalent POVMs");
            t.require((*m[0] - *m[2]).norm() > kDistinctTol,
                      std::string(name) + " coincides for unrelated POVMs");
        }
    }
    return t.take();
}

TrialOutcome check_lem3(const CaseSpec& spec, const Tolerances& tol) {
    Tally t;
    const ComplexMatrix ibar = traceless_projector(spec.d);
    for (const DensityOperator& rho : make_states(spec.seed, spec.d, true)) {
        for (MultKind k : {MultKind::Sym, MultKind::Left, MultKind::Right}) {
            ComplexMatrix jbar = ibar * mult_superop_power(rho, k, -1.0) * ibar;
            ComplexMatrix expected = traceless_metric_pinv(rho, k);
            ComplexMatrix pinv = moore_penrose(hermitian_part(jbar), tol);
            t.close(relative((pinv - expected).norm(), expected.norm()), 1e-8,
                    std::string("pinv(Jbar) != K - |rho>><<rho| for ") + to_string(k));
        }
    }
    return t.take();
}

TrialOutcome check_lem4(const CaseSpec& spec, const Tolerances& tol) {
    QFC_GENERATE(inst, spec);
    Tally t;
    PovmClassification c = classify_povm(inst.povm, tol);
    const int m = static_cast<int>(inst.povm.size() - c.num_zero_elements);
    const double bound = std::min(m, spec.d);
    const bool saturating = (m <= spec.d && c.is_pvm) || (m >= spec.d && c.is_rank_one);
    const auto basis = basis_ops(spec.d);
    for (const DensityOperator& rho : inst.states) {
        RealVector p = outcome_probs(rho, inst.povm);
        double direct = 0.0;
        for (std::size_t j = 0; j < inst.povm.size(); ++j) {
            const ComplexMatrix& a = inst.povm.element(j);
            if (a.norm() <= tol.zero_tol) continue;
            direct += (rho.matrix() * a * a).trace().real() / p(j);
        }
        t.at_most(direct, bound + kInequalityTol, "sum tr(rho A^2)/tr(rho A) > min(m, d)");
        bool saturated = std::abs(direct - bound) <= kSaturationTol;
        if (saturating) t.residual(std::abs(direct - bound));
        t.require(saturated == saturating, "min(m, d) saturation does not match classification");
        for (FimKind kind : kAllFimKinds) {
            double trace_fk =
                metric_adjusted_superop(rho, inst.povm, kind, false, tol).trace().real();
            double trace_ik =
                metric_adjusted_fim(rho, inst.povm, basis, kind, tol).trace().real() + 1.0;
            double trace_fbar =
                metric_adjusted_superop(rho, inst.povm, kind, true, tol).trace().real() + 1.0;
            t.close(std::abs(trace_fk - direct), 1e-9, kind_label("tr F_K != sum formula", kind));
            t.close(std::abs(trace_ik - direct), 1e-9, kind_label("tr I_K + 1 != sum formula", kind));
            t.close(std::abs(trace_fbar - direct), 1e-9,
                    kind_label("tr Fbar_K + 1 != sum formula", kind));
        }
    }
    return t.take();
}

TrialOutcome check_lem5(const CaseSpec& spec, const Tolerances& tol) {
    QFC_GENERATE(inst, spec, .subspace = spec.variant % 4 == 3);
    Tally t;
    for (const DensityOperator& rho : inst.states) {
        for (bool traceless : {false, true}) {
            RealVector s = hermitian_eigenvalues(
                metric_adjusted_superop(rho, inst.povm, FimKind::Sld, traceless, tol), tol);
            RealVector l = hermitian_eigenvalues(
                metric_adjusted_superop(rho, inst.povm, FimKind::Rld, traceless, tol), tol);
            RealVector r = hermitian_eigenvalues(
                metric_adjusted_superop(rho, inst.povm, FimKind::Lld, traceless, tol), tol);
            MajorizationCheck mc = submajorizes(s, l, kPrefixSumTol);
            t.residual(std::max(0.0, -mc.margins.minCoeff()));
            t.require(majorizes(s, l, kPrefixSumTol), "eig(F_S) is not majorized by eig(F_L)");
            t.close(max_abs_diff(l, r), 1e-9, "F_L and F_R spectra differ");
        }
        ComplexMatrix gl = gram_matrix(rho, inst.povm, FimKind::Rld, false, tol);
        ComplexMatrix gr = gram_matrix(rho, inst.povm, FimKind::Lld, false, tol);
        t.close(relative((gr - gl.transpose()).norm(), gl.norm()), 1e-12, "G_R != G_L^T");
        t.close(relative((gr - gl.conjugate()).norm(), gl.norm()), 1e-12, "G_R != conj(G_L)");
        for (FimKind kind : kAllFimKinds) {
            RealVector f = hermitian_eigenvalues(
                metric_adjusted_superop(rho, inst.povm, kind, false, tol), tol);
            t.close(max_abs_diff(f, gram_spectrum(rho, inst.povm, kind, false, tol)), 1e-9,
                    kind_label("Gram and F_K spectra differ", kind));
        }
    }
    return t.take();
}

TrialOutcome check_lem6(const CaseSpec& spec, const Tolerances& tol) {
    QFC_GENERATE(inst, spec, .subspace = spec.variant % 4 == 3);
    Tally t;
    const bool irreducible = irreducible_components(inst.povm, tol).gamma == 1;
    for (const DensityOperator& rho : inst.states) {
        ComplexMatrix f = f_superop(rho, inst.povm, false, tol);
        for (FimKind kind : kAllFimKinds) {
            RealVector values = hermitian_eigenvalues(
                metric_adjusted_superop(rho, inst.povm, kind, false, tol), tol);
            t.close(std::abs(values(0) - 1.0), 1e-9, kind_label("||F_K|| != 1", kind));
            if (irreducible && values.size() > 1) {
                t.at_most(values(1), 1.0 - 10.0 * tol.eig_one_tol,
                          kind_label("eigenvalue 1 of F_K is degenerate for irreducible POVM", kind));
            }
            ComplexMatrix j = mult_superop_power(rho, metric_superop(kind), -1.0);
            double lowest = min_eigenvalue(hermitian_part(j - f), tol);
            t.at_most(-lowest / std::max(1.0, j.norm()), kInequalityTol,
                      kind_label("F <= J_K violated", kind));
        }
    }
    return t.take();
}

TrialOutcome check_lem7(const CaseSpec& spec, const Tolerances& tol) {
    QFC_GENERATE(inst, spec);
    Tally t;
    for (const DensityOperator& rho : inst.states) {
        for (FimKind kind : kAllFimKinds) {
            RealVector full = hermitian_eigenvalues(
                metric_adjusted_superop(rho, inst.povm, kind, false, tol), tol);
            RealVector bar = hermitian_eigenvalues(
                metric_adjusted_superop(rho, inst.povm, kind, true, tol), tol);
            // remove one eigenvalue 1, add one 0
            Eigen::Index closest = 0;
            (full.array() - 1.0).abs().minCoeff(&closest);
            t.require(std::abs(full(closest) - 1.0) <= tol.eig_one_tol,
                      kind_label("F_K has no eigenvalue 1", kind));
            RealVector predicted = full;
            predicted(closest) = 0.0;
            t.close(max_abs_diff(predicted, bar), 1e-8,
                    kind_label("Fbar_K spectrum not predicted from F_K", kind));
        }
    }
    return t.take();
}

TrialOutcome check_sld_bound(const CaseSpec& spec, const Tolerances& tol) {
    QFC_GENERATE(inst, spec, .near_boundary_state = true);
    Tally t;
    const auto basis = basis_ops(spec.d);
    for (const DensityOperator& rho : inst.states) {
        ComplexMatrix js = qfim(rho, basis, FimKind::Sld);
        RealMatrix fim = classical_fim(rho, inst.povm, basis, tol);
        double lowest = min_eigenvalue(hermitian_part(js - fim.cast<Complex>()), tol);
        t.at_most(-lowest / std::max(1.0, js.norm()), kInequalityTol, "J_S - I is not PSD");
        for (FimKind kind : kAllFimKinds) {
            RealVector values = fisher_eigenvalues_unclipped(rho, inst.povm, kind, tol);
            t.at_most(values.maxCoeff(), 1.0 + kInequalityTol, kind_label("Fisher eigenvalue > 1", kind));
            t.at_most(-values.minCoeff(), kInequalityTol, kind_label("Fisher eigenvalue < 0", kind));
        }
    }
    return t.take();
}

TrialOutcome check_gill_massar(const CaseSpec& spec, const Tolerances& tol) {
    QFC_GENERATE(inst, spec);
    Tally t;
    const bool rank_one = classify_povm(inst.povm, tol).is_rank_one;
    const auto basis = basis_ops(spec.d);
    for (const DensityOperator& rho : inst.states) {
        ComplexMatrix js = qfim(rho, basis, FimKind::Sld);
        RealMatrix fim = classical_fim(rho, inst.povm, basis, tol);
        double trace = (js.inverse() * fim.cast<Complex>()).trace().real();
        t.at_most(trace, spec.d - 1.0 + kGillMassarTol, "tr(J_S^{-1} I) > d - 1");
        bool saturated = std::abs(trace - (spec.d - 1.0)) <= kSaturationTol;
        if (rank_one) t.residual(std::abs(trace - (spec.d - 1.0)));
        t.require(saturated == rank_one, "Gill-Massar saturation does not match rank-1");

        if (spec.d == 2) {
            Eigen::Vector3d s;
            for (int a = 0; a < 3; ++a) s(a) = (rho.matrix() * pauli(a)).trace().real();
            std::vector<double> w;
            std::vector<Eigen::Vector3d> r;
            for (const ComplexMatrix& e : inst.povm.elements()) {
                double wj = 0.5 * e.trace().real();
                Eigen::Vector3d rj;
                for (int a = 0; a < 3; ++a) rj(a) = 0.5 * (e * pauli(a)).trace().real() / wj;
                w.push_back(wj);
                r.push_back(rj);
            }
            QubitClosedForms closed = qubit_closed_forms(s, w, r);
            t.close(std::abs(closed.gill_massar_trace - trace), 1e-9, "qubit closed form differs");
            if (rank_one) t.close(std::abs(closed.gill_massar_trace - 1.0), 1e-9, "rank-1 qubit trace != 1");
        }
    }
    return t.take();
}

TrialOutcome check_appc_transpose(const CaseSpec& spec, const Tolerances& tol) {
    QFC_GENERATE(inst, spec);
    Tally t;
    const auto basis = basis_ops(spec.d);
    for (const DensityOperator& rho : inst.states) {
        ComplexMatrix jr = qfim(rho, basis, FimKind::Rld);
        ComplexMatrix jl = qfim(rho, basis, FimKind::Lld);
        t.close(relative((jl - jr.transpose()).norm(), jr.norm()), 1e-10, "J_L != J_R^T");
        t.close(relative((jl - jr.conjugate()).norm(), jr.norm()), 1e-10, "J_L != conj(J_R)");
        t.close(max_abs_diff(fisher_spectrum_pencil(rho, inst.povm, basis, FimKind::Lld, tol),
                             fisher_spectrum_pencil(rho, inst.povm, basis, FimKind::Rld, tol)),
                1e-9, "I_L and I_R spectra differ");
    }
    return t.take();
}

TrialOutcome check_appc_convexity(const CaseSpec& spec, const Tolerances& tol) {
    Tally t;
    const auto basis = basis_ops(spec.d);
    for (const DensityOperator& rho : make_states(spec.seed, spec.d, true)) {
        ComplexMatrix js = qfim(rho, basis, FimKind::Sld);
        ComplexMatrix gap = 0.5 * (qfim(rho, basis, FimKind::Rld) + qfim(rho, basis, FimKind::Lld)) - js;
        double lowest = min_eigenvalue(hermitian_part(gap), tol);
        t.at_most(-lowest / std::max(1.0, js.norm()), kInequalityTol, "(J_R + J_L)/2 - J_S is not PSD");
    }
    return t.take();
}

TrialOutcome check_sic_oracle(const CaseSpec& spec, const Tolerances& tol) {
    Tally t;
    const auto direction = static_cast<SicDirection>(spec.variant % 3);
    const double s = 0.1 * ((spec.variant / 3) % 10) + 0.01 * ((spec.variant / 30) % 10);
    const DensityOperator rho = DensityOperator::from_bloch(s * unit_vector(direction));
    const Povm sic = qubit_sic();
    SicAnalytic expected = sic_analytic(direction, s);
    RealVector numeric = fisher_eigenvalues_unclipped(rho, sic, FimKind::Sld, tol);
    for (int i = 0; i < 3; ++i) {
        t.close(std::abs(numeric(i) - expected.eigenvalues[i]), 1e-9, "SIC eigenvalue mismatch");
    }
    t.close(std::abs(spectrum_summary(numeric, 2, tol).purity - expected.purity), 1e-9,
            "SIC purity mismatch");

    std::vector<double> w(4, 0.25);
    std::vector<Eigen::Vector3d> r;
    for (const ComplexMatrix& e : sic.elements()) {
        Eigen::Vector3d rj;
        for (int a = 0; a < 3; ++a) rj(a) = 2.0 * (e * pauli(a)).trace().real();
        r.push_back(rj);
    }
    QubitClosedForms closed = qubit_closed_forms(s * unit_vector(direction), w, r);
    t.close(std::abs(closed.purity - expected.purity), 1e-9, "closed-form purity mismatch");
    return t.take();
}

TrialOutcome check_two_path(const CaseSpec& spec, const Tolerances& tol) {
    QFC_GENERATE(inst, spec);
    Tally t;
    const auto basis = basis_ops(spec.d);
    for (const DensityOperator& rho : inst.states) {
        for (FimKind kind : kAllFimKinds) {
            RealVector superop = fisher_eigenvalues_unclipped(rho, inst.povm, kind, tol);
            RealVector pencil = fisher_spectrum_pencil(rho, inst.povm, basis, kind, tol);
            RealVector gram = gram_spectrum(rho, inst.povm, kind, true, tol);
            t.close(max_abs_diff(superop, pencil), 1e-9, kind_label("pencil vs superoperator", kind));
            t.close(max_abs_diff(superop, gram), 1e-9, kind_label("Gram vs superoperator", kind));
        }
    }
    return t.take();
}

TrialOutcome check_param_independence(const CaseSpec& spec, const Tolerances& tol) {
    QFC_GENERATE(inst, spec);
    Tally t;
    const TracelessBasis gm = gell_mann_basis(spec.d);
    const int g = static_cast<int>(gm.size());
    Rng rng(derive_seed(spec.seed, 8000));
    const TracelessBasis rotated = rotate_basis(gm, haar_orthogonal(rng, g));
    // a non-orthonormal parametrization with bounded condition number
    RealVector stretch(g);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int a = 0; a < g; ++a) stretch(a) = std::exp(u(rng));
    RealMatrix mix = haar_orthogonal(rng, g) * stretch.asDiagonal() * haar_orthogonal(rng, g);
    std::vector<ComplexMatrix> skewed;
    for (int a = 0; a < g; ++a) {
        ComplexMatrix e = ComplexMatrix::Zero(spec.d, spec.d);
        for (int b = 0; b < g; ++b) e += mix(a, b) * gm.operators[b];
        skewed.push_back(std::move(e));
    }
    for (const DensityOperator& rho : inst.states) {
        for (FimKind kind : kAllFimKinds) {
            RealVector ref = fisher_spectrum_pencil(rho, inst.povm, gm.operators, kind, tol);
            t.close(max_abs_diff(ref, fisher_spectrum_pencil(rho, inst.povm, rotated.operators, kind, tol)),
                    1e-9, kind_label("spectrum changes under basis rotation", kind));
            t.close(max_abs_diff(ref, fisher_spectrum_pencil(rho, inst.povm, skewed, kind, tol)), 1e-9,
                    kind_label("spectrum changes under reparametrization", kind));
        }
    }
    return t.take();
}

#undef QFC_GENERATE

}  // namespace

const std::array<CheckFn, kAllChecks.size()>& check_table() {
    static const std::array<CheckFn, kAllChecks.size()> table = [] {
        std::array<CheckFn, kAllChecks.size()> tbl{};
        auto set = [&](CheckId id, CheckFn fn) { tbl[static_cast<std::size_t>(id)] = fn; };
        set(CheckId::Prop1, check_prop1);
        set(CheckId::Prop2, check_prop2);
        set(CheckId::Thm1, check_thm1);
        set(CheckId::Thm2, check_thm2);
        set(CheckId::Thm3, check_thm3);
        set(CheckId::Thm4, check_thm4);
        set(CheckId::Cor1, check_cor1);
        set(CheckId::Cor2, check_cor2);
        set(CheckId::Lem1, check_lem1);
        set(CheckId::Lem2, check_lem2);
        set(CheckId::Lem3, check_lem3);
        set(CheckId::Lem4, check_lem4);
        set(CheckId::Lem5, check_lem5);
        set(CheckId::Lem6, check_lem6);
        set(CheckId::Lem7, check_lem7);
        set(CheckId::SldBound, check_sld_bound);
        set(CheckId::GillMassar, check_gill_massar);
        set(CheckId::AppC_Transpose, check_appc_transpose);
        set(CheckId::AppC_ConvexityBound, check_appc_convexity);
        set(CheckId::SicAnalyticOracle, check_sic_oracle);
        set(CheckId::TwoPathAgreement, check_two_path);
        set(CheckId::ParamIndependence, check_param_independence);
        return tbl;
    }();
    return table;
}

CaseMix case_mix(CheckId check) {
    using F = Flavor;
    const std::vector<Flavor> all = {F::HaarPovm, F::RandomPvm, F::RankOnePovm, F::BlockPovm, F::NoisyPvm};
    switch (check) {
        case CheckId::Prop1: return {all, 6, false};
        case CheckId::Prop2: return {{F::RandomPvm}, 0, false};
        case CheckId::Thm1:
        case CheckId::Thm3:
        case CheckId::SldBound: return {all, 0, false, true};
        case CheckId::Thm2:
        case CheckId::Thm4: return {all, 0, true, true};
        case CheckId::Lem3:
        case CheckId::AppC_ConvexityBound: return {{F::FullRankState}, 0, false};
        case CheckId::SicAnalyticOracle: return {{F::RankOnePovm}, 0, false};
        default: return {all, 0, false};
    }
}

}  // namespace qfc::detail
