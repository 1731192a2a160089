#include "qfc/verify.hpp"

#include "checks.hpp"

#include <algorithm>
#include <future>
#include <random>
#include <sstream>

namespace qfc {

namespace {

constexpr const char* kCheckNames[] = {
    "Prop1", "Prop2", "Thm1", "Thm2", "Thm3", "Thm4", "Cor1", "Cor2",
    "Lem1", "Lem2", "Lem3", "Lem4", "Lem5", "Lem6", "Lem7", "SldBound",
    "GillMassar", "AppC_Transpose", "AppC_ConvexityBound", "SicAnalyticOracle",
    "TwoPathAgreement", "ParamIndependence",
};
static_assert(std::size(kCheckNames) == kAllChecks.size());

std::size_t index_of(CheckId check) { return static_cast<std::size_t>(check); }

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// Outcome count for a flavor at dimension d. A rank-one POVM with d outcomes is
// a PVM, so non-PVM cases need at least d + 1. With exactly d + 1 outcomes the
// RLD/LLD superoperators have an eigenvalue within O(lambda_min) of 1 at
// near-boundary states, below what eig_one_tol can resolve, so those cases skip
// to d + 2.
int pick_m(Rng& rng, Flavor flavor, int d, int cap, bool non_pvm, bool near_boundary) {
    int lo = 2, hi = 2 * d;
    switch (flavor) {
        case Flavor::RankOnePovm: lo = non_pvm ? d + 1 : d; break;
        case Flavor::RandomPvm:
            if (uniform(rng, 0, 1) == 0) return d;
            hi = d;
            break;
        case Flavor::NoisyPvm: hi = d; break;
        default: break;
    }
    if (cap > 0) hi = std::max(lo, std::min(hi, cap));
    int m = uniform(rng, lo, hi);
    if (near_boundary && flavor == Flavor::RankOnePovm && m == d + 1) m = d + 2;
    return m;
}

struct Indexed {
    int index;
    CaseSpec spec;
    TrialOutcome outcome;
};

std::vector<Indexed> run_range(CheckId check, std::uint64_t seed, int begin, int end,
                               std::span<const int> dims, const Tolerances& tol) {
    std::vector<Indexed> out;
    for (int i = begin; i < end; ++i) {
        CaseSpec spec = make_case(check, seed, i, dims);
        out.push_back({i, spec, run_case(check, spec, tol)});
    }
    return out;
}

}  // namespace

std::string_view to_string(CheckId check) { return kCheckNames[index_of(check)]; }

std::optional<CheckId> check_from_string(std::string_view name) {
    for (CheckId check : kAllChecks) {
        if (to_string(check) == name) return check;
    }
    return std::nullopt;
}

TrialOutcome run_case(CheckId check, const CaseSpec& spec, const Tolerances& tol) {
    try {
        tol.validate();
        return detail::check_table()[index_of(check)](spec, tol);
    } catch (const Error& e) {
        TrialOutcome out;
        out.passed = false;
        out.residual = std::numeric_limits<double>::infinity();
        out.note = std::string("error[") + to_string(e.code()) + "]: " + e.what();
        return out;
    }
}

CaseSpec make_case(CheckId check, std::uint64_t seed, int index, std::span<const int> dims) {
    if (dims.empty()) throw Error(ErrorCode::Validation, "make_case: empty dimension list");
    CaseSpec spec;
    spec.seed = derive_seed(derive_seed(seed, index_of(check)), static_cast<std::uint64_t>(index));
    spec.d = dims[static_cast<std::size_t>(index) % dims.size()];
    spec.variant = index;
    Rng rng(spec.seed);

    if (check == CheckId::SicAnalyticOracle) {
        spec.d = 2;
        spec.m = 4;
        spec.flavor = Flavor::RankOnePovm;
        return spec;
    }
    detail::CaseMix mix = detail::case_mix(check);
    if (mix.flavors.size() == 1 && !is_povm_flavor(mix.flavors.front())) {
        spec.flavor = mix.flavors.front();
        spec.m = spec.d;
        return spec;
    }
    std::vector<Flavor> pool = mix.flavors;
    if (mix.alternate_pvm) {
        if (index % 2 == 0) {
            pool = {Flavor::RandomPvm};
        } else {
            std::erase(pool, Flavor::RandomPvm);
        }
    }
    spec.flavor = pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
    spec.m = pick_m(rng, spec.flavor, spec.d, mix.m_cap, mix.alternate_pvm && index % 2 == 1,
                    mix.near_boundary);
    return spec;
}

CheckReport run_check(CheckId check, std::uint64_t seed, int trials, std::span<const int> dims,
                      const Tolerances& tol, unsigned threads) {
    if (trials < 0) throw Error(ErrorCode::Validation, "trials must be nonnegative");
    const auto start = std::chrono::steady_clock::now();

    std::vector<Indexed> results;
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(trials)));
    if (workers <= 1) {
        results = run_range(check, seed, 0, trials, dims, tol);
    } else {
        std::vector<std::future<std::vector<Indexed>>> parts;
        const int chunk = (trials + static_cast<int>(workers) - 1) / static_cast<int>(workers);
        for (int begin = 0; begin < trials; begin += chunk) {
            int end = std::min(trials, begin + chunk);
            parts.push_back(std::async(std::launch::async, run_range, check, seed, begin, end, dims,
                                       std::cref(tol)));
        }
        for (auto& part : parts) {
            for (Indexed& r : part.get()) results.push_back(std::move(r));
        }
    }

    CheckReport report;
    report.check = check;
    report.trials = trials;
    bool have_worst = false;
    for (const Indexed& r : results) {
        if (!r.outcome.passed) {
            if (report.failures == 0) {
                std::ostringstream os;
                os << "trial " << r.index << ": " << r.outcome.note;
                report.first_failure = os.str();
                report.worst_case = r.spec;
            }
            ++report.failures;
        }
        if (!have_worst || r.outcome.residual > report.worst_residual) {
            report.worst_residual = r.outcome.residual;
            if (report.failures == 0) report.worst_case = r.spec;
            have_worst = true;
        }
    }
    report.elapsed = std::chrono::steady_clock::now() - start;
    return report;
}

const char* to_string(Profile profile) { return profile == Profile::Quick ? "quick" : "full"; }

std::optional<Profile> profile_from_string(std::string_view name) {
    if (name == "quick") return Profile::Quick;
    if (name == "full") return Profile::Full;
    return std::nullopt;
}

ProfileSettings settings_for(Profile profile) {
    if (profile == Profile::Quick) return {20, {2, 3}};
    return {200, {2, 3, 4, 5}};
}

bool SuiteReport::passed() const { return failed_checks() == 0; }

int SuiteReport::failed_checks() const {
    return static_cast<int>(
        std::count_if(checks.begin(), checks.end(), [](const CheckReport& c) { return !c.passed(); }));
}

SuiteReport run_suite(std::uint64_t seed, Profile profile, const Tolerances& tol, unsigned threads) {
    tol.validate();
    ProfileSettings settings = settings_for(profile);
    SuiteReport report;
    report.seed = seed;
    report.profile = profile;
    for (CheckId check : kAllChecks) {
        report.checks.push_back(run_check(check, seed, settings.trials, settings.dims, tol, threads));
    }
    return report;
}

}  // namespace qfc
