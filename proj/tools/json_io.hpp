#pragma once

#include "qfc/fisher.hpp"
#include "qfc/povm.hpp"
#include "qfc/state.hpp"
#include "qfc/verify.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace qfc::io {

using Json = nlohmann::json;

/// Reads and parses a JSON file. Unreadable files and syntax errors throw Io.
Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

// Schema errors throw Validation (or the library's own code) naming the field,
// e.g. "elements[2][0][1]: expected [re, im] pair".

ComplexMatrix matrix_from_json(const Json& j, int dim, const std::string& where);
Json matrix_to_json(const ComplexMatrix& m);

/// {dim, elements: [d x d of [re, im]], completeness_target?}
Povm povm_from_json(const Json& j, const Tolerances& tol = {});
Json povm_to_json(const Povm& povm);

/// {dim, matrix} or, for dim 2, {dim, bloch: [x, y, z]}
DensityOperator state_from_json(const Json& j, const Tolerances& tol = {});
Json state_to_json(const DensityOperator& rho);

/// Row-major real matrix [[...], ...].
RealMatrix real_matrix_from_json(const Json& j, const std::string& where);

Json report_to_json(const FisherReport& report, int gamma, const Tolerances& tol);

Json case_to_json(const CaseSpec& spec);
CaseSpec case_from_json(const Json& j, const std::string& where);

/// Seed, profile, pass flag and per-check counts. Wall time is left out so the
/// report is a function of the inputs only.
Json suite_to_json(const SuiteReport& report);

}  // namespace qfc::io
