#pragma once

#include "qfc/linalg.hpp"
#include "qfc/povm.hpp"
#include "qfc/state.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <variant>

namespace qfc {

// Seeded instance generators. Every function is a pure function of its
// arguments; the same seed always yields the same bytes.

enum class Flavor {
    HaarPovm,           // S^{-1/2} B_k S^{-1/2} with B_k full-rank Wishart matrices
    RandomPvm,          // projectors onto blocks of a Haar-random basis
    RankOnePovm,        // S^{-1/2} |v_k><v_k| S^{-1/2}, m >= d
    BlockPovm,          // random PVM whose blocks are refined by random subspace POVMs
    NoisyPvm,           // (1 - eps) P_j + eps H_j, a PVM blurred by a Haar POVM
    FullRankState,      // (G G^dagger / tr + eps 1) / (1 + d eps), eps = 1e-3
    NearBoundaryState,  // random spectrum with smallest eigenvalue in [1e-7, 1e-6)
};

std::string_view to_string(Flavor flavor);
std::optional<Flavor> flavor_from_string(std::string_view name);
bool is_povm_flavor(Flavor flavor);

using Rng = std::mt19937_64;

/// Independent stream for (seed, index); used to give every trial its own generator.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

ComplexMatrix ginibre(Rng& rng, int rows, int cols);
ComplexMatrix haar_unitary(Rng& rng, int d);
/// Haar-random real orthogonal matrix.
RealMatrix haar_orthogonal(Rng& rng, int n);

/// Throws Infeasible when (d, m) admits no instance of the flavor.
Povm random_povm(std::uint64_t seed, int d, int m, Flavor flavor);
DensityOperator random_state(std::uint64_t seed, int d, Flavor flavor);

/// POVM on a random proper subspace V (completeness target P_V, rank in [1, d-1]).
/// When the subspace is one-dimensional the POVM is {P_V}.
Povm random_subspace_povm(std::uint64_t seed, int d, int m);

std::variant<Povm, DensityOperator> random_instance(std::uint64_t seed, int d, int m, Flavor flavor);

}  // namespace qfc
