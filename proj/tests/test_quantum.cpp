#include "oracles.hpp"
#include "qfc/generators.hpp"
#include "qfc/povm.hpp"
#include "qfc/state.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace qfc;

namespace {

ComplexMatrix diag(std::initializer_list<double> v) {
    RealVector d(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) d(i++) = x;
    return d.cast<Complex>().asDiagonal();
}

Povm computational(int d) {
    std::vector<ComplexMatrix> e;
    for (int i = 0; i < d; ++i) {
        ComplexMatrix p = ComplexMatrix::Zero(d, d);
        p(i, i) = 1;
        e.push_back(p);
    }
    return validate_povm(e);
}

Povm trine() {
    std::vector<double> w(3, 1.0 / 3.0);
    std::vector<Eigen::Vector3d> r;
    for (int k = 0; k < 3; ++k) {
        double phi = 2 * std::numbers::pi * k / 3;
        r.emplace_back(std::cos(phi), std::sin(phi), 0.0);
    }
    return qubit_povm_from_bloch(w, r);
}

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::Io;
}

}  // namespace

TEST_CASE("density operator validation") {
    CHECK_NOTHROW(DensityOperator::from_matrix(diag({0.75, 0.25})));
    CHECK(code_of([] { DensityOperator::from_matrix(diag({0.75, 0.5})); }) == ErrorCode::Validation);
    CHECK(code_of([] { DensityOperator::from_matrix(diag({1.0, 0.0})); }) == ErrorCode::Rank);
    CHECK(code_of([] { DensityOperator::from_matrix(diag({1.2, -0.2})); }) == ErrorCode::NotPsd);
    CHECK_THROWS_AS(DensityOperator::from_bloch({0, 0, 1.0}), Error);

    DensityOperator rho = DensityOperator::from_bloch({0.1, 0.2, 0.3});
    CHECK((rho.matrix() - oracle::bloch_state(0.1, 0.2, 0.3)).norm() < 1e-15);
    DensityOperator near = DensityOperator::from_matrix(diag({1 - 1e-8, 1e-8}));
    CHECK(near.near_boundary());
    CHECK_FALSE(rho.near_boundary());
}

TEST_CASE("validate_povm examples") {
    Povm pvm = validate_povm({diag({1, 0}), diag({0, 1})});
    CHECK(classify_povm(pvm).is_pvm);
    Povm soft = validate_povm({diag({0.6, 0}), diag({0.4, 1})});
    CHECK_FALSE(classify_povm(soft).is_pvm);

    try {
        validate_povm({diag({1, 0}), diag({0.1, 1})});
        FAIL("expected completeness error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Validation);
        CHECK(std::string(e.what()).find("residual 0.1") != std::string::npos);
    }
    try {
        validate_povm({diag({1.5, 0}), diag({-0.5, 1})});
        FAIL("expected a PSD error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotPsd);
        CHECK(std::string(e.what()).find("element 1") != std::string::npos);
    }
    CHECK(code_of([] { validate_povm({diag({1, 0}), diag({0, 1, 0})}); }) == ErrorCode::Dimension);
}

TEST_CASE("simplify_povm examples") {
    ComplexMatrix p = diag({1, 0});
    ComplexMatrix q = diag({0, 1});
    SimplifiedPovm s = simplify_povm(validate_povm({0.3 * p, 0.7 * p, q}));
    REQUIRE(s.povm.size() == 2);
    CHECK((s.povm.element(0) - p).norm() < 1e-15);
    CHECK((s.povm.element(1) - q).norm() < 1e-15);
    CHECK(s.merge_map[0] == 0u);
    CHECK(s.merge_map[1] == 0u);
    CHECK(s.merge_map[2] == 1u);

    SimplifiedPovm same = simplify_povm(computational(3));
    CHECK(same.povm.size() == 3);
    for (std::size_t j = 0; j < 3; ++j) CHECK(same.merge_map[j] == j);

    SimplifiedPovm dropped = simplify_povm(validate_povm({p, ComplexMatrix::Zero(2, 2), q}));
    CHECK(dropped.povm.size() == 2);
    CHECK_FALSE(dropped.merge_map[1].has_value());
}

TEST_CASE("classify_povm examples") {
    PovmClassification c = classify_povm(computational(2));
    CHECK(c.is_pvm);
    CHECK(c.is_rank_one);
    CHECK(c.span_dim == 2);

    PovmClassification sic = classify_povm(qubit_sic());
    CHECK_FALSE(sic.is_pvm);
    CHECK(sic.is_rank_one);
    CHECK(sic.span_dim == 4);

    ComplexMatrix half = 0.5 * ComplexMatrix::Identity(2, 2);
    CHECK_FALSE(classify_povm(validate_povm({half, half})).is_simple);
}

TEST_CASE("irreducible_components examples") {
    CHECK(irreducible_components(computational(3)).gamma == 3);
    CHECK(irreducible_components(trine()).gamma == 1);

    // trine on span(e0, e1) plus the projector onto e2
    std::vector<ComplexMatrix> block;
    Povm t = trine();
    for (const ComplexMatrix& e : t.elements()) {
        ComplexMatrix big = ComplexMatrix::Zero(3, 3);
        big.topLeftCorner(2, 2) = e;
        block.push_back(big);
    }
    block.push_back(diag({0, 0, 1}));
    ComponentDecomposition c = irreducible_components(validate_povm(block));
    CHECK(c.gamma == 2);
    CHECK(c.component_assignment[0] == c.component_assignment[2]);
    CHECK(c.component_assignment[0] != c.component_assignment[3]);
    CHECK(c.projectors_idempotent);
}

TEST_CASE("finest_pvm examples") {
    Povm pvm = computational(3);
    Povm f = finest_pvm(pvm);
    REQUIRE(f.size() == 3);
    for (std::size_t j = 0; j < 3; ++j) CHECK((f.element(j) - pvm.element(j)).norm() < 1e-14);

    Povm sic_f = finest_pvm(qubit_sic());
    REQUIRE(sic_f.size() == 1);
    CHECK((sic_f.element(0) - ComplexMatrix::Identity(2, 2)).norm() < 1e-14);
}

TEST_CASE("coarse_grain examples") {
    Povm sic = qubit_sic();
    Povm same = coarse_grain(sic, RealMatrix::Identity(4, 4));
    for (std::size_t j = 0; j < 4; ++j) CHECK((same.element(j) - sic.element(j)).norm() == 0.0);

    Povm trivial = coarse_grain(sic, RealMatrix::Ones(1, 4));
    REQUIRE(trivial.size() == 1);
    CHECK((trivial.element(0) - ComplexMatrix::Identity(2, 2)).norm() < 1e-14);

    RealMatrix bad = RealMatrix::Identity(4, 4);
    bad(0, 0) = 0.5;
    CHECK(code_of([&] { coarse_grain(sic, bad); }) == ErrorCode::Validation);
    CHECK(code_of([&] { coarse_grain(sic, RealMatrix::Identity(3, 3)); }) == ErrorCode::Dimension);
}

TEST_CASE("grouping by components gives the finest PVM on random POVMs") {
    for (int t = 0; t < 40; ++t) {
        int d = 2 + t % 3;
        Povm a = random_povm(derive_seed(31, t), d, d + 1, Flavor::BlockPovm);
        ComponentDecomposition c = irreducible_components(a);
        std::vector<std::size_t> assignment;
        for (const auto& slot : c.component_assignment) assignment.push_back(slot.value());
        Povm grouped = coarse_grain(a, grouping_matrix(assignment, c.gamma));
        Povm f = finest_pvm(a);
        REQUIRE(grouped.size() == f.size());
        for (std::size_t j = 0; j < f.size(); ++j) CHECK((grouped.element(j) - f.element(j)).norm() < 1e-12);
        CHECK(classify_povm(f).is_pvm);
        CHECK(irreducible_components(f).gamma == c.gamma);
        CHECK(c.gamma <= d);
    }
}

TEST_CASE("gamma = d exactly for rank-1 PVMs") {
    for (int t = 0; t < 60; ++t) {
        int d = 2 + t % 4;
        Flavor f = std::array{Flavor::RandomPvm, Flavor::HaarPovm, Flavor::RankOnePovm}[t % 3];
        int m = f == Flavor::RandomPvm ? (t % 2 ? d : 2) : d + 1;
        Povm a = random_povm(derive_seed(41, t), d, m, f);
        PovmClassification c = classify_povm(simplify_povm(a).povm);
        int gamma = irreducible_components(a).gamma;
        CHECK(gamma <= d);
        CHECK((gamma == d) == (c.is_pvm && c.is_rank_one));
    }
}

TEST_CASE("simplify is idempotent and permutations permute exactly") {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 30; ++t) {
        int d = 2 + t % 3;
        Povm a = random_povm(derive_seed(51, t), d, 2 * d, Flavor::HaarPovm);
        std::vector<ComplexMatrix> padded = a.elements();
        padded.push_back(0.25 * padded[0]);
        padded[0] *= 0.75;
        padded.push_back(ComplexMatrix::Zero(d, d));
        SimplifiedPovm once = simplify_povm(validate_povm(padded));
        SimplifiedPovm twice = simplify_povm(once.povm);
        REQUIRE(twice.povm.size() == once.povm.size());
        for (std::size_t j = 0; j < once.povm.size(); ++j) {
            CHECK((twice.povm.element(j) - once.povm.element(j)).norm() == 0.0);
        }
        CHECK(once.povm.size() == a.size());

        std::vector<int> perm(a.size());
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        RealMatrix lambda = RealMatrix::Zero(a.size(), a.size());
        for (std::size_t k = 0; k < a.size(); ++k) lambda(perm[k], k) = 1.0;
        Povm b = coarse_grain(a, lambda);
        for (std::size_t k = 0; k < a.size(); ++k) CHECK(b.element(perm[k]) == a.element(k));
    }
}

TEST_CASE("component projectors are idempotent on random POVMs") {
    const Flavor flavors[] = {Flavor::HaarPovm, Flavor::RankOnePovm, Flavor::BlockPovm, Flavor::RandomPvm};
    int count = 0;
    for (int t = 0; count < 200; ++t) {
        int d = 2 + t % 3;
        Flavor f = flavors[t % 4];
        int m = f == Flavor::RandomPvm ? d : std::min(8, f == Flavor::RankOnePovm ? d + 1 + t % 3 : 2 + t % 7);
        ComponentDecomposition c = irreducible_components(random_povm(derive_seed(61, t), d, m, f));
        CHECK(c.projectors_idempotent);
        CHECK(c.max_idempotency_residual < 1e-8);
        ++count;
    }
}

TEST_CASE("gell_mann_basis") {
    TracelessBasis b2 = gell_mann_basis(2);
    REQUIRE(b2.size() == 3);
    for (int a = 0; a < 3; ++a) {
        CHECK((b2.operators[a] - oracle::pauli(a) / std::sqrt(2.0)).norm() < 1e-15);
    }
    for (int d = 2; d <= 5; ++d) {
        TracelessBasis b = gell_mann_basis(d);
        REQUIRE(static_cast<int>(b.size()) == d * d - 1);
        ComplexMatrix gram = b.columns().adjoint() * b.columns();
        CHECK((gram - ComplexMatrix::Identity(d * d - 1, d * d - 1)).norm() < 1e-13);
        for (const ComplexMatrix& e : b.operators) {
            CHECK(std::abs(e.trace()) < 1e-12);
            CHECK((e - e.adjoint()).norm() == 0.0);
        }
    }
}

TEST_CASE("qubit_povm_from_bloch examples") {
    std::vector<double> half{0.5, 0.5};
    std::vector<Eigen::Vector3d> z{{0, 0, 1}, {0, 0, -1}};
    Povm pvm = qubit_povm_from_bloch(half, z);
    CHECK((pvm.element(0) - diag({1, 0})).norm() < 1e-15);
    CHECK((pvm.element(1) - diag({0, 1})).norm() < 1e-15);

    std::vector<double> quarter(4, 0.25);
    std::vector<Eigen::Vector3d> tetra;
    for (auto v : {Eigen::Vector3d(1, 1, 1), Eigen::Vector3d(1, -1, -1), Eigen::Vector3d(-1, 1, -1),
                   Eigen::Vector3d(-1, -1, 1)}) {
        tetra.push_back(v.normalized());
    }
    Povm sic = qubit_povm_from_bloch(quarter, tetra);
    Povm ref = qubit_sic();
    for (std::size_t j = 0; j < 4; ++j) CHECK((sic.element(j) - ref.element(j)).norm() < 1e-15);

    Povm t = trine();
    CHECK(t.size() == 3);
    CHECK(classify_povm(t).is_rank_one);

    std::vector<Eigen::Vector3d> unbalanced{{0, 0, 1}, {0, 0, 0.5}};
    CHECK_THROWS_AS(qubit_povm_from_bloch(half, unbalanced), Error);
}

TEST_CASE("random_instance examples") {
    auto pvm = random_instance(1, 2, 2, Flavor::RandomPvm);
    REQUIRE(std::holds_alternative<Povm>(pvm));
    CHECK(classify_povm(std::get<Povm>(pvm)).is_pvm);

    auto state = random_instance(7, 3, 0, Flavor::FullRankState);
    REQUIRE(std::holds_alternative<DensityOperator>(state));
    CHECK(std::get<DensityOperator>(state).min_eigenvalue() > 1e-4);

    for (Flavor f : {Flavor::HaarPovm, Flavor::RankOnePovm, Flavor::BlockPovm, Flavor::NoisyPvm}) {
        Povm a = random_povm(99, 3, 3, f);
        Povm b = random_povm(99, 3, 3, f);
        for (std::size_t j = 0; j < a.size(); ++j) CHECK(a.element(j) == b.element(j));
    }
    CHECK(random_state(5, 4, Flavor::NearBoundaryState).matrix() ==
          random_state(5, 4, Flavor::NearBoundaryState).matrix());
    CHECK(random_state(5, 4, Flavor::NearBoundaryState).near_boundary());

    CHECK(code_of([] { random_povm(1, 3, 4, Flavor::RandomPvm); }) == ErrorCode::Infeasible);
    CHECK(code_of([] { random_povm(1, 3, 2, Flavor::RankOnePovm); }) == ErrorCode::Infeasible);
}
