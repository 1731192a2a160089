#pragma once

#include "qfc/verify.hpp"

#include <array>
#include <vector>

namespace qfc::detail {

using CheckFn = TrialOutcome (*)(const CaseSpec&, const Tolerances&);

/// Indexed by CheckId.
const std::array<CheckFn, kAllChecks.size()>& check_table();

struct CaseMix {
    std::vector<Flavor> flavors;
    int m_cap = 0;               // 0: no cap beyond the flavor's range
    bool alternate_pvm = false;  // even variants PVM, odd variants non-PVM
    bool near_boundary = false;  // one of the states is drawn near the boundary
};

CaseMix case_mix(CheckId check);

}  // namespace qfc::detail
