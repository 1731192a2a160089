#pragma once

#include "qfc/generators.hpp"
#include "qfc/linalg.hpp"

#include <array>
#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qfc {

/// One randomized check per claim about Fisher concentration.
enum class CheckId {
    Prop1,                // PVM coarse grainings are exactly the groupings of the finest PVM
    Prop2,                // PVM -> F is injective up to permutation
    Thm1,                 // zeta = gamma - 1, saturated iff rank-1 PVM
    Thm2,                 // Fisher sharp iff PVM
    Thm3,                 // mu(F_K) = gamma, zeta_K = gamma - 1 for all kinds
    Thm4,                 // all metric-adjusted objects are projectors iff PVM
    Cor1,                 // tr I_S^p bounds and saturation
    Cor2,                 // purity 1 iff rank-1 PVM
    Lem1,                 // rank identities
    Lem2,                 // F, Fbar, I, I_S equalities coincide
    Lem3,                 // pseudoinverse of Jbar_K is K - |rho>><<rho|
    Lem4,                 // tr F_K = sum tr(rho A^2)/tr(rho A) <= min(m, d)
    Lem5,                 // F_S majorized by F_L, F_L and F_R isospectral, Gram spectra
    Lem6,                 // ||F_K|| = 1, F <= J_K, simple top eigenvalue when irreducible
    Lem7,                 // spectrum of Fbar_K from that of F_K
    SldBound,             // I <= J_S, Fisher eigenvalues in [0, 1]
    GillMassar,           // tr(J_S^{-1} I) <= d - 1, saturated iff rank 1
    AppC_Transpose,       // J_L = J_R^T = conj(J_R), I_L and I_R isospectral
    AppC_ConvexityBound,  // J_S <= (J_R + J_L)/2
    SicAnalyticOracle,    // qubit SIC closed forms
    TwoPathAgreement,     // g x g pencil vs superoperator vs Gram spectra
    ParamIndependence,    // spectrum invariant under reparametrization
};

inline constexpr std::array kAllChecks{
    CheckId::Prop1,      CheckId::Prop2,          CheckId::Thm1,
    CheckId::Thm2,       CheckId::Thm3,           CheckId::Thm4,
    CheckId::Cor1,       CheckId::Cor2,           CheckId::Lem1,
    CheckId::Lem2,       CheckId::Lem3,           CheckId::Lem4,
    CheckId::Lem5,       CheckId::Lem6,           CheckId::Lem7,
    CheckId::SldBound,   CheckId::GillMassar,     CheckId::AppC_Transpose,
    CheckId::AppC_ConvexityBound, CheckId::SicAnalyticOracle, CheckId::TwoPathAgreement,
    CheckId::ParamIndependence,
};
static_assert(kAllChecks.size() == static_cast<std::size_t>(CheckId::ParamIndependence) + 1);

std::string_view to_string(CheckId check);
std::optional<CheckId> check_from_string(std::string_view name);

/// Everything needed to regenerate one trial.
struct CaseSpec {
    std::uint64_t seed = 0;
    int d = 2;
    int m = 2;
    Flavor flavor = Flavor::HaarPovm;
    int variant = 0;  // check-specific selector: PVM parity, construction, grid point

    bool operator==(const CaseSpec&) const = default;
};

struct TrialOutcome {
    bool passed = true;
    double residual = 0.0;
    std::string note;  // reason for a failure
};

struct CheckReport {
    CheckId check = CheckId::Prop1;
    int trials = 0;
    int failures = 0;
    double worst_residual = 0.0;
    CaseSpec worst_case;  // first failing case, else the one with the largest residual
    std::string first_failure;
    std::chrono::duration<double> elapsed{0.0};

    bool passed() const { return failures == 0; }
};

/// Runs one trial. Pure function of its arguments.
TrialOutcome run_case(CheckId check, const CaseSpec& spec, const Tolerances& tol = {});

/// Case of trial `index` of `check` under `seed`.
CaseSpec make_case(CheckId check, std::uint64_t seed, int index, std::span<const int> dims);

/// Deterministic in (check, seed, trials, dims, tol); threads only change wall time.
CheckReport run_check(CheckId check, std::uint64_t seed, int trials, std::span<const int> dims,
                      const Tolerances& tol = {}, unsigned threads = 1);

enum class Profile { Quick, Full };

const char* to_string(Profile profile);
std::optional<Profile> profile_from_string(std::string_view name);

struct ProfileSettings {
    int trials;
    std::vector<int> dims;
};

ProfileSettings settings_for(Profile profile);

struct SuiteReport {
    std::uint64_t seed = 0;
    Profile profile = Profile::Quick;
    std::vector<CheckReport> checks;

    bool passed() const;
    int failed_checks() const;
};

SuiteReport run_suite(std::uint64_t seed, Profile profile, const Tolerances& tol = {},
                      unsigned threads = 1);

}  // namespace qfc
