#include "qfc/generators.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qfc {

namespace {

constexpr std::array<std::pair<Flavor, std::string_view>, 7> kFlavorNames{{
    {Flavor::HaarPovm, "HaarPovm"},
    {Flavor::RandomPvm, "RandomPvm"},
    {Flavor::RankOnePovm, "RankOnePovm"},
    {Flavor::BlockPovm, "BlockPovm"},
    {Flavor::NoisyPvm, "NoisyPvm"},
    {Flavor::FullRankState, "FullRankState"},
    {Flavor::NearBoundaryState, "NearBoundaryState"},
}};

[[noreturn]] void infeasible(std::string_view flavor, int d, int m) {
    std::ostringstream os;
    os << flavor << ": infeasible (d=" << d
       << ", m=" << m << ")";
    throw Error(ErrorCode::Infeasible, os.str());
}

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

double uniform_real(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Random composition of n into k positive parts.
std::vector<int> random_composition(Rng& rng, int n, int k) {
    std::vector<int> cuts(n - 1);
    std::iota(cuts.begin(), cuts.end(), 1);
    std::shuffle(cuts.begin(), cuts.end(), rng);
    cuts.resize(k - 1);
    std::sort(cuts.begin(), cuts.end());
    std::vector<int> parts;
    int prev = 0;
    for (int c : cuts) {
        parts.push_back(c - prev);
        prev = c;
    }
    parts.push_back(n - prev);
    return parts;
}

ComplexMatrix inverse_sqrt_pd(const ComplexMatrix& s) {
    HermitianEig eig = hermitian_eig(s);
    RealVector inv = eig.values.cwiseSqrt().cwiseInverse();
    return eig.vectors * inv.asDiagonal() * eig.vectors.adjoint();
}

// Rescale PSD matrices b_k so that they sum to the identity.
std::vector<ComplexMatrix> normalize_to_identity(std::vector<ComplexMatrix> b) {
    ComplexMatrix s = ComplexMatrix::Zero(b.front().rows(), b.front().cols());
    for (const auto& x : b) s += x;
    ComplexMatrix t = inverse_sqrt_pd(hermitian_part(s));
    for (auto& x : b) x = hermitian_part(t * x * t);
    return b;
}

// POVM with n elements on C^k; element ranks drawn from [1, k], raised to full
// rank when they would not span the space.
std::vector<ComplexMatrix> haar_povm_local(Rng& rng, int k, int n, bool full_rank, bool rank_one) {
    std::vector<int> ranks(n, k);
    if (rank_one) {
        std::fill(ranks.begin(), ranks.end(), 1);
    } else if (!full_rank) {
        for (int& r : ranks) r = uniform_int(rng, 1, k);
        if (std::accumulate(ranks.begin(), ranks.end(), 0) < k) std::fill(ranks.begin(), ranks.end(), k);
    }
    std::vector<ComplexMatrix> b;
    for (int r : ranks) {
        ComplexMatrix g = ginibre(rng, k, r);
        ComplexMatrix w = g * g.adjoint();
        b.push_back(w / w.trace().real());
    }
    return normalize_to_identity(std::move(b));
}

std::vector<ComplexMatrix> pvm_from_blocks(const ComplexMatrix& u, const std::vector<int>& sizes) {
    std::vector<ComplexMatrix> out;
    int offset = 0;
    for (int size : sizes) {
        ComplexMatrix v = u.middleCols(offset, size);
        out.push_back(hermitian_part(v * v.adjoint()));
        offset += size;
    }
    return out;
}

Povm block_povm(Rng& rng, int d, int m) {
    if (m < 1) infeasible("BlockPovm", d, m);
    int max_blocks = m > d ? d - 1 : m;
    if (max_blocks < 1) infeasible("BlockPovm", d, m);
    int blocks = uniform_int(rng, 1, max_blocks);
    std::vector<int> sizes = random_composition(rng, d, blocks);
    std::vector<int> counts(blocks, 1);
    std::vector<int> hosts;
    for (int b = 0; b < blocks; ++b) {
        if (sizes[b] >= 2) hosts.push_back(b);
    }
    for (int extra = m - blocks; extra > 0; --extra) {
        counts[hosts[uniform_int(rng, 0, static_cast<int>(hosts.size()) - 1)]] += 1;
    }
    ComplexMatrix u = haar_unitary(rng, d);
    std::vector<ComplexMatrix> elements;
    int offset = 0;
    for (int b = 0; b < blocks; ++b) {
        ComplexMatrix v = u.middleCols(offset, sizes[b]);
        offset += sizes[b];
        if (counts[b] == 1) {
            elements.push_back(hermitian_part(v * v.adjoint()));
            continue;
        }
        for (const ComplexMatrix& a : haar_povm_local(rng, sizes[b], counts[b], false, false)) {
            elements.push_back(hermitian_part(v * a * v.adjoint()));
        }
    }
    std::shuffle(elements.begin(), elements.end(), rng);
    return validate_povm(std::move(elements));
}

}  // namespace

std::string_view to_string(Flavor flavor) {
    for (const auto& [f, name] : kFlavorNames) {
        if (f == flavor) return name;
    }
    return "unknown";
}

std::optional<Flavor> flavor_from_string(std::string_view name) {
    for (const auto& [f, n] : kFlavorNames) {
        if (n == name) return f;
    }
    return std::nullopt;
}

bool is_povm_flavor(Flavor flavor) {
    return flavor != Flavor::FullRankState && flavor != Flavor::NearBoundaryState;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    // splitmix64 over the pair
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

ComplexMatrix ginibre(Rng& rng, int rows, int cols) {
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    ComplexMatrix g(rows, cols);
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
        for (Eigen::Index i = 0; i < g.rows(); ++i) {
            double re = normal(rng);
            double im = normal(rng);
            g(i, j) = Complex(re, im);
        }
    }
    return g;
}

ComplexMatrix haar_unitary(Rng& rng, int d) {
    ComplexMatrix g = ginibre(rng, d, d);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ();
    ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // fix column phases so the distribution is Haar
    for (int j = 0; j < d; ++j) {
        double mag = std::abs(r(j, j));
        if (mag > 0.0) q.col(j) *= r(j, j) / mag;
    }
    return q;
}

RealMatrix haar_orthogonal(Rng& rng, int n) {
    std::normal_distribution<double> normal(0.0, 1.0);
    RealMatrix g(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) g(i, j) = normal(rng);
    }
    Eigen::HouseholderQR<RealMatrix> qr(g);
    RealMatrix q = qr.householderQ();
    RealMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
        if (r(j, j) < 0.0) q.col(j) *= -1.0;
    }
    return q;
}

Povm random_povm(std::uint64_t seed, int d, int m, Flavor flavor) {
    if (d < 2) throw Error(ErrorCode::Infeasible, "POVM generators need d >= 2");
    Rng rng(seed);
    switch (flavor) {
        case Flavor::HaarPovm:
            if (m < 2) infeasible("HaarPovm", d, m);
            return validate_povm(haar_povm_local(rng, d, m, true, false));
        case Flavor::RankOnePovm:
            if (m < d) infeasible("RankOnePovm", d, m);
            return validate_povm(haar_povm_local(rng, d, m, false, true));
        case Flavor::RandomPvm: {
            if (m < 2 || m > d) infeasible("RandomPvm", d, m);
            std::vector<int> sizes = random_composition(rng, d, m);
            return validate_povm(pvm_from_blocks(haar_unitary(rng, d), sizes));
        }
        case Flavor::BlockPovm:
            if (m < 2) infeasible("BlockPovm", d, m);
            return block_povm(rng, d, m);
        case Flavor::NoisyPvm: {
            if (m < 2 || m > d) infeasible("NoisyPvm", d, m);
            std::vector<int> sizes = random_composition(rng, d, m);
            std::vector<ComplexMatrix> pvm = pvm_from_blocks(haar_unitary(rng, d), sizes);
            std::vector<ComplexMatrix> noise = haar_povm_local(rng, d, m, true, false);
            // log-uniform blur strength so that Fisher eigenvalues land at all distances from 1
            double eps = std::pow(10.0, uniform_real(rng, -4.0, -0.5));
            std::vector<ComplexMatrix> elements;
            for (int j = 0; j < m; ++j) elements.push_back((1.0 - eps) * pvm[j] + eps * noise[j]);
            return validate_povm(std::move(elements));
        }
        default: break;
    }
    throw Error(ErrorCode::Infeasible, std::string(to_string(flavor)) + " is not a POVM flavor");
}

DensityOperator random_state(std::uint64_t seed, int d, Flavor flavor) {
    if (d < 1) throw Error(ErrorCode::Infeasible, "state generators need d >= 1");
    Rng rng(seed);
    switch (flavor) {
        case Flavor::FullRankState: {
            constexpr double eps = 1e-3;
            ComplexMatrix g = ginibre(rng, d, d);
            ComplexMatrix w = g * g.adjoint();
            w /= w.trace().real();
            ComplexMatrix rho = (w + eps * ComplexMatrix::Identity(d, d)) / (1.0 + d * eps);
            rho /= rho.trace().real();
            return DensityOperator::from_matrix(hermitian_part(rho));
        }
        case Flavor::NearBoundaryState: {
            ComplexMatrix u = haar_unitary(rng, d);
            RealVector lambda(d);
            for (int i = 0; i < d; ++i) lambda(i) = uniform_real(rng, 0.05, 1.0);
            double floor_value = std::pow(10.0, uniform_real(rng, -7.0, -6.0));
            lambda(d - 1) = 0.0;
            lambda *= (1.0 - floor_value) / lambda.sum();
            lambda(d - 1) = floor_value;
            ComplexMatrix rho = u * lambda.asDiagonal() * u.adjoint();
            rho /= rho.trace().real();
            return DensityOperator::from_matrix(hermitian_part(rho));
        }
        default: break;
    }
    throw Error(ErrorCode::Infeasible, std::string(to_string(flavor)) + " is not a state flavor");
}

Povm random_subspace_povm(std::uint64_t seed, int d, int m) {
    if (d < 2 || m < 1) throw Error(ErrorCode::Infeasible, "subspace POVM needs d >= 2, m >= 1");
    Rng rng(seed);
    int k = uniform_int(rng, 1, d - 1);
    if (k == 1) m = 1;
    ComplexMatrix v = haar_unitary(rng, d).leftCols(k);
    ComplexMatrix target = hermitian_part(v * v.adjoint());
    std::vector<ComplexMatrix> elements;
    if (m == 1) {
        elements.push_back(target);
    } else {
        for (const ComplexMatrix& a : haar_povm_local(rng, k, m, false, false)) {
            elements.push_back(hermitian_part(v * a * v.adjoint()));
        }
    }
    return validate_povm(std::move(elements), target);
}

std::variant<Povm, DensityOperator> random_instance(std::uint64_t seed, int d, int m, Flavor flavor) {
    if (is_povm_flavor(flavor)) return random_povm(seed, d, m, flavor);
    return random_state(seed, d, flavor);
}

}  // namespace qfc
