#include "oracles.hpp"
#include "qfc/fisher.hpp"
#include "qfc/generators.hpp"
#include "qfc/qubit.hpp"

#include <doctest.h>

#include <cmath>

using namespace qfc;

namespace {

ComplexMatrix diag(std::initializer_list<double> v) {
    RealVector d(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) d(i++) = x;
    return d.cast<Complex>().asDiagonal();
}

Povm z_pvm() { return validate_povm({diag({1, 0}), diag({0, 1})}); }
Povm trivial(int d) { return validate_povm({ComplexMatrix::Identity(d, d)}); }

DensityOperator bloch(double x, double y, double z) { return DensityOperator::from_bloch({x, y, z}); }

RealVector vec3(double a, double b, double c) { return Eigen::Vector3d(a, b, c); }

// Random instances shared by the property tests below.
struct Instance {
    DensityOperator rho;
    Povm povm;
};

std::vector<Instance> instances(int count, std::uint64_t seed) {
    const Flavor flavors[] = {Flavor::HaarPovm, Flavor::RandomPvm, Flavor::RankOnePovm, Flavor::BlockPovm,
                              Flavor::NoisyPvm};
    std::vector<Instance> out;
    for (int t = 0; t < count; ++t) {
        int d = 2 + t % 3;
        Flavor f = flavors[t % 5];
        int m = (f == Flavor::RandomPvm || f == Flavor::NoisyPvm) ? d : d + 1;
        out.push_back({random_state(derive_seed(seed, 2 * t), d, Flavor::FullRankState),
                       random_povm(derive_seed(seed, 2 * t + 1), d, m, f)});
    }
    return out;
}

}  // namespace

TEST_CASE("outcome_probs examples") {
    DensityOperator rho = DensityOperator::from_matrix(diag({0.75, 0.25}));
    RealVector p = outcome_probs(rho, z_pvm());
    CHECK(p(0) == doctest::Approx(0.75));
    CHECK(p(1) == doctest::Approx(0.25));
    RealVector q = outcome_probs(DensityOperator::maximally_mixed(2), qubit_sic());
    for (double v : q) CHECK(v == doctest::Approx(0.25));
    CHECK(outcome_probs(rho, trivial(2))(0) == doctest::Approx(1.0));
}

TEST_CASE("classical_fim examples") {
    std::vector<ComplexMatrix> t = oracle::bloch_tangents();
    RealMatrix fim = classical_fim(bloch(0, 0, 0.5), z_pvm(), t);
    RealMatrix expected = RealMatrix::Zero(3, 3);
    expected(2, 2) = 4.0 / 3.0;
    CHECK((fim - expected).norm() < 1e-14);
    // sigma/sqrt2 tangents are sqrt2 times the Bloch ones
    RealMatrix gm = classical_fim(bloch(0, 0, 0.5), z_pvm(), gell_mann_basis(2));
    CHECK(gm(2, 2) == doctest::Approx(8.0 / 3.0).epsilon(1e-14));

    CHECK(classical_fim(bloch(0.1, 0.2, 0.3), trivial(2), t).norm() < 1e-14);

    RealMatrix sic = classical_fim(DensityOperator::maximally_mixed(2), qubit_sic(), t);
    CHECK((sic - RealMatrix::Identity(3, 3) / 3.0).norm() < 1e-14);
}

TEST_CASE("classical_fim agrees with finite differences of the probabilities") {
    for (const Instance& in : instances(30, 101)) {
        TracelessBasis b = gell_mann_basis(in.rho.dim());
        RealMatrix fim = classical_fim(in.rho, in.povm, b);
        RealMatrix ref = oracle::fim_by_differences(in.rho.matrix(), in.povm, b.operators);
        CHECK((fim - ref).norm() < 1e-7 * std::max(1.0, ref.norm()));
    }
}

TEST_CASE("sld_solve examples and LU oracle") {
    DensityOperator rho = DensityOperator::from_matrix(diag({0.75, 0.25}));
    CHECK((sld_solve(rho, diag({0.5, -0.5})) - diag({2.0 / 3.0, -2.0})).norm() < 1e-14);
    CHECK(sld_solve(rho, ComplexMatrix::Zero(2, 2)).norm() == 0.0);
    ComplexMatrix x = oracle::pauli(0) + 0.3 * oracle::pauli(1);
    CHECK((sld_solve(DensityOperator::maximally_mixed(2), x) - 2.0 * x).norm() < 1e-14);

    std::mt19937_64 rng(4);
    for (int t = 0; t < 20; ++t) {
        int d = 2 + t % 4;
        ComplexMatrix r = oracle::random_density(rng, d);
        DensityOperator state = DensityOperator::from_matrix(r);
        for (const ComplexMatrix& e : gell_mann_basis(d).operators) {
            CHECK((sld_solve(state, e) - oracle::sld_by_lu(r, e)).norm() < 1e-10);
        }
    }
}

TEST_CASE("qfim examples") {
    std::vector<ComplexMatrix> t = oracle::bloch_tangents();
    Eigen::Vector3d s(0.3, -0.2, 0.5);
    ComplexMatrix js = qfim(bloch(s(0), s(1), s(2)), t, FimKind::Sld);
    RealMatrix expected_inv = RealMatrix::Identity(3, 3) - s * s.transpose();
    CHECK((js.inverse().real() - expected_inv).norm() < 1e-13);
    CHECK(js.imag().norm() < 1e-14);

    for (int d = 2; d <= 4; ++d) {
        ComplexMatrix j = qfim(DensityOperator::maximally_mixed(d), gell_mann_basis(d), FimKind::Sld);
        CHECK((j - d * ComplexMatrix::Identity(d * d - 1, d * d - 1)).norm() < 1e-12);
    }
}

TEST_CASE("qfim matches independent constructions") {
    std::mt19937_64 rng(6);
    for (int t = 0; t < 20; ++t) {
        int d = 2 + t % 4;
        ComplexMatrix r = oracle::random_density(rng, d);
        DensityOperator rho = DensityOperator::from_matrix(r);
        std::vector<ComplexMatrix> e = gell_mann_basis(d).operators;
        ComplexMatrix js = qfim(rho, e, FimKind::Sld);
        ComplexMatrix jr = qfim(rho, e, FimKind::Rld);
        ComplexMatrix jl = qfim(rho, e, FimKind::Lld);
        RealMatrix js_ref = oracle::sld_qfim(r, e);
        ComplexMatrix jr_ref = oracle::rld_qfim(r, e);
        CHECK((js.real() - js_ref).norm() < 1e-9 * js_ref.norm());
        CHECK((jr - jr_ref).norm() < 1e-9 * jr_ref.norm());
        CHECK((jl - jr_ref.transpose()).norm() < 1e-9 * jr_ref.norm());
        ComplexMatrix gap = 0.5 * (jr + jl) - js;
        CHECK(hermitian_eigenvalues(0.5 * (gap + gap.adjoint()), Tolerances{.zero_tol = 1e-8}).minCoeff() >
              -1e-9 * js.norm());
    }
}

TEST_CASE("f_superop examples and identities") {
    ComplexMatrix f = f_superop(DensityOperator::maximally_mixed(2), z_pvm(), false);
    ComplexVector e1 = vec(diag({1, 0})), e2 = vec(diag({0, 1}));
    CHECK((f - 2.0 * (e1 * e1.adjoint() + e2 * e2.adjoint())).norm() < 1e-14);

    for (const Instance& in : instances(30, 202)) {
        int d = in.rho.dim();
        ComplexMatrix full = f_superop(in.rho, in.povm, false);
        CHECK((full * vec(in.rho.matrix()) - identity_ket(d)).norm() < 1e-10);
        int span = classify_povm(in.povm).span_dim;
        CHECK(numeric_rank(full) == span);
        CHECK(numeric_rank(f_superop(in.rho, in.povm, true)) == span - 1);
        ComplexMatrix ibar = traceless_projector(d);
        CHECK((f_superop(in.rho, in.povm, true) - ibar * full * ibar).norm() < 1e-10 * full.norm());
    }
}

TEST_CASE("metric-adjusted superoperators") {
    for (const Instance& in : instances(30, 303)) {
        RealVector p = outcome_probs(in.rho, in.povm);
        double sum = 0.0;
        for (std::size_t j = 0; j < in.povm.size(); ++j) {
            const ComplexMatrix& a = in.povm.element(j);
            sum += (in.rho.matrix() * a * a).trace().real() / p(j);
        }
        for (FimKind kind : kAllFimKinds) {
            ComplexMatrix fk = metric_adjusted_superop(in.rho, in.povm, kind, false);
            RealVector full = hermitian_eigenvalues(fk);
            CHECK(full(0) == doctest::Approx(1.0).epsilon(1e-10));
            CHECK(fk.trace().real() == doctest::Approx(sum).epsilon(1e-10));
            // Fbar_K: one eigenvalue 1 of F_K becomes 0
            RealVector bar = hermitian_eigenvalues(metric_adjusted_superop(in.rho, in.povm, kind, true));
            RealVector predicted = full;
            predicted(0) = 0.0;
            std::sort(predicted.data(), predicted.data() + predicted.size(), std::greater<>());
            CHECK(oracle::max_abs_diff(predicted, bar) < 1e-9);
        }
    }
}

TEST_CASE("fisher_spectrum examples") {
    for (int t = 0; t < 5; ++t) {
        DensityOperator rho = random_state(derive_seed(405, t), 2, Flavor::FullRankState);
        Povm pvm = random_povm(derive_seed(406, t), 2, 2, Flavor::RandomPvm);
        for (FimKind kind : kAllFimKinds) {
            RealVector s = fisher_spectrum(rho, pvm, kind);
            CHECK(oracle::max_abs_diff(s, vec3(1, 0, 0)) < 1e-10);
        }
    }
    RealVector sic0 = fisher_spectrum(DensityOperator::maximally_mixed(2), qubit_sic(), FimKind::Sld);
    CHECK(oracle::max_abs_diff(sic0, vec3(1.0 / 3, 1.0 / 3, 1.0 / 3)) < 1e-12);
    double c = 0.5 / std::sqrt(3.0);
    RealVector sic5 = fisher_spectrum(bloch(c, c, c), qubit_sic(), FimKind::Sld);
    CHECK(oracle::max_abs_diff(sic5, vec3(0.4, 0.4, 0.2)) < 1e-12);
}

TEST_CASE("fisher spectrum matches a generalized eigensolver on oracle matrices") {
    for (const Instance& in : instances(30, 505)) {
        ComplexMatrix r = in.rho.matrix();
        std::vector<ComplexMatrix> e = gell_mann_basis(in.rho.dim()).operators;
        ComplexMatrix fim = oracle::fim_by_differences(r, in.povm, e).cast<Complex>();
        RealVector s = oracle::pencil_eigenvalues(fim, oracle::sld_qfim(r, e).cast<Complex>());
        CHECK(oracle::max_abs_diff(fisher_eigenvalues_unclipped(in.rho, in.povm, FimKind::Sld), s) < 1e-7);
        ComplexMatrix jr = oracle::rld_qfim(r, e);
        RealVector sr = oracle::pencil_eigenvalues(fim, jr);
        CHECK(oracle::max_abs_diff(fisher_eigenvalues_unclipped(in.rho, in.povm, FimKind::Rld), sr) < 1e-7);
        RealVector sl = oracle::pencil_eigenvalues(fim, jr.transpose());
        CHECK(oracle::max_abs_diff(fisher_eigenvalues_unclipped(in.rho, in.povm, FimKind::Lld), sl) < 1e-7);
    }
}

TEST_CASE("quantum and Gill-Massar bounds on oracle matrices") {
    for (const Instance& in : instances(40, 606)) {
        int d = in.rho.dim();
        ComplexMatrix r = in.rho.matrix();
        std::vector<ComplexMatrix> e = gell_mann_basis(d).operators;
        RealMatrix fim = oracle::fim_by_differences(r, in.povm, e);
        RealMatrix js = oracle::sld_qfim(r, e);
        Eigen::SelfAdjointEigenSolver<RealMatrix> gap(js - fim);
        CHECK(gap.eigenvalues().minCoeff() > -1e-7 * js.norm());
        double gm = (js.inverse() * fim).trace();
        CHECK(gm <= d - 1 + 1e-8);
        if (classify_povm(in.povm).is_rank_one) CHECK(gm == doctest::Approx(d - 1).epsilon(1e-7));
    }
}

TEST_CASE("spectrum_summary examples") {
    SpectrumSummary pvm = spectrum_summary(vec3(1, 0, 0), 2);
    CHECK(pvm.purity == doctest::Approx(1.0));
    CHECK(pvm.gill_massar_trace == doctest::Approx(1.0));
    CHECK(pvm.sharpness_index == 1);
    CHECK(pvm.is_fisher_sharp);
    CHECK(pvm.fisher_rank == 1);

    SpectrumSummary sic = spectrum_summary(vec3(1.0 / 3, 1.0 / 3, 1.0 / 3), 2);
    CHECK(sic.purity == doctest::Approx(1.0 / 3));
    CHECK(sic.gill_massar_trace == doctest::Approx(1.0));
    CHECK(sic.sharpness_index == 0);
    CHECK_FALSE(sic.is_fisher_sharp);

    SpectrumSummary zero = spectrum_summary(RealVector::Zero(3), 2);
    CHECK(zero.purity == 0.0);
    CHECK(zero.sharpness_index == 0);
    CHECK_FALSE(zero.is_fisher_sharp);

    // {1}: every eigenvalue is 0, and sharpness requires zeta >= 1
    FisherReport t = analyze(bloch(0.1, 0.1, 0.1), trivial(2), FimKind::Sld);
    CHECK_FALSE(t.is_fisher_sharp);
    CHECK(t.fisher_rank == 0);

    CHECK(is_fisher_symmetric(vec3(0.3, 0.3, 0.3)));
    CHECK_FALSE(is_fisher_symmetric(vec3(0.4, 0.4, 0.2)));
}

TEST_CASE("gram matrices") {
    ComplexMatrix g = gram_matrix(DensityOperator::maximally_mixed(2), z_pvm(), FimKind::Sld, false);
    CHECK((g - ComplexMatrix::Identity(2, 2)).norm() < 1e-14);

    for (const Instance& in : instances(30, 707)) {
        ComplexMatrix gl = gram_matrix(in.rho, in.povm, FimKind::Rld, false);
        ComplexMatrix gr = gram_matrix(in.rho, in.povm, FimKind::Lld, false);
        CHECK((gr - gl.transpose()).norm() < 1e-12);
        for (FimKind kind : kAllFimKinds) {
            for (bool traceless : {false, true}) {
                RealVector gs = gram_spectrum(in.rho, in.povm, kind, traceless);
                RealVector fs =
                    hermitian_eigenvalues(metric_adjusted_superop(in.rho, in.povm, kind, traceless));
                // nonzero spectra agree; the rest are zeros
                Eigen::Index n = std::min(gs.size(), fs.size());
                CHECK(oracle::max_abs_diff(gs.head(n), fs.head(n)) < 1e-9);
                if (gs.size() > n) CHECK(gs.tail(gs.size() - n).cwiseAbs().maxCoeff() < 1e-9);
                if (fs.size() > n) CHECK(fs.tail(fs.size() - n).cwiseAbs().maxCoeff() < 1e-9);
            }
        }
    }
}

TEST_CASE("SIC closed forms") {
    for (SicDirection dir : {SicDirection::X, SicDirection::XY, SicDirection::XYZ}) {
        SicAnalytic zero = sic_analytic(dir, 0.0);
        for (double v : zero.eigenvalues) CHECK(v == doctest::Approx(1.0 / 3));
        CHECK(zero.purity == doctest::Approx(1.0 / 3));
    }
    SicAnalytic half = sic_analytic(SicDirection::XYZ, 0.5);
    CHECK(half.eigenvalues[0] == doctest::Approx(0.4));
    CHECK(half.eigenvalues[1] == doctest::Approx(0.4));
    CHECK(half.eigenvalues[2] == doctest::Approx(0.2));
    CHECK(half.purity == doctest::Approx(0.36));
    CHECK_THROWS_AS(sic_analytic(SicDirection::X, 1.0), Error);

    std::mt19937_64 rng(8);
    std::normal_distribution<double> n;
    std::uniform_real_distribution<double> u(0.0, 0.95);
    for (int t = 0; t < 50; ++t) {
        Eigen::Vector3d s(n(rng), n(rng), n(rng));
        s = s.normalized() * u(rng);
        RealVector lam = fisher_spectrum(DensityOperator::from_bloch(s), qubit_sic(), FimKind::Sld);
        CHECK(sic_purity(s) == doctest::Approx(spectrum_summary(lam, 2).purity).epsilon(1e-10));
    }
}

TEST_CASE("qubit closed forms") {
    std::vector<double> w{0.5, 0.5};
    std::vector<Eigen::Vector3d> z{{0, 0, 1}, {0, 0, -1}};
    QubitClosedForms pvm = qubit_closed_forms({0, 0, 0.5}, w, z);
    CHECK(pvm.fim(2, 2) == doctest::Approx(4.0 / 3.0));
    CHECK(pvm.fim(0, 0) == 0.0);
    CHECK(pvm.fim(1, 1) == 0.0);
    CHECK(pvm.gill_massar_trace == doctest::Approx(1.0));

    std::vector<double> one{1.0};
    std::vector<Eigen::Vector3d> origin{{0, 0, 0}};
    QubitClosedForms triv = qubit_closed_forms({0.2, 0, 0}, one, origin);
    CHECK(triv.fim.norm() == 0.0);
    CHECK(triv.gill_massar_trace == 0.0);

    std::vector<ComplexMatrix> t = oracle::bloch_tangents();
    for (int k = 0; k < 20; ++k) {
        DensityOperator rho = random_state(derive_seed(808, k), 2, Flavor::FullRankState);
        Flavor f = k % 2 ? Flavor::RankOnePovm : Flavor::HaarPovm;
        Povm a = random_povm(derive_seed(809, k), 2, 3 + k % 3, f);
        Eigen::Vector3d s;
        for (int i = 0; i < 3; ++i) s(i) = (rho.matrix() * oracle::pauli(i)).trace().real();
        std::vector<double> wj;
        std::vector<Eigen::Vector3d> rj;
        for (const ComplexMatrix& e : a.elements()) {
            double ww = 0.5 * e.trace().real();
            Eigen::Vector3d r;
            for (int i = 0; i < 3; ++i) r(i) = (e * oracle::pauli(i)).trace().real() / (2 * ww);
            wj.push_back(ww);
            rj.push_back(r);
        }
        QubitClosedForms c = qubit_closed_forms(s, wj, rj);
        RealMatrix fim = oracle::fim_by_differences(rho.matrix(), a, t);
        CHECK((c.fim - fim).norm() < 1e-7);
        RealMatrix js_inv = RealMatrix::Identity(3, 3) - s * s.transpose();
        CHECK((c.metric_adjusted - js_inv * fim).norm() < 1e-7);
        if (f == Flavor::RankOnePovm) CHECK(c.gill_massar_trace == doctest::Approx(1.0).epsilon(1e-12));
        else CHECK(c.gill_massar_trace < 1.0 - 1e-6);
    }
}
