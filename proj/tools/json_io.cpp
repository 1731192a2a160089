#include "json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace qfc::io {

namespace {

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
    throw Error(ErrorCode::Validation, where + ": " + what);
}

const Json& field(const Json& j, const char* name, const std::string& where) {
    if (!j.is_object()) schema_error(where, "expected an object");
    auto it = j.find(name);
    if (it == j.end()) schema_error(where, std::string("missing field '") + name + "'");
    return *it;
}

int dim_from_json(const Json& j) {
    const Json& d = field(j, "dim", "<root>");
    if (!d.is_number_integer() || d.get<long long>() < 1 || d.get<long long>() > 64) {
        schema_error("dim", "expected an integer in [1, 64]");
    }
    return d.get<int>();
}

double number(const Json& j, const std::string& where) {
    if (!j.is_number()) schema_error(where, "expected a number");
    double v = j.get<double>();
    if (!std::isfinite(v)) schema_error(where, "expected a finite number");
    return v;
}

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, path.string() + ": cannot open file");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw Error(ErrorCode::Io, path.string() + ": " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, path.string() + ": cannot open for writing");
    out << text;
    if (!out) throw Error(ErrorCode::Io, path.string() + ": write failed");
}

ComplexMatrix matrix_from_json(const Json& j, int dim, const std::string& where) {
    if (!j.is_array() || j.size() != static_cast<std::size_t>(dim)) {
        std::ostringstream os;
        os << "expected " << dim << " rows";
        throw Error(ErrorCode::Dimension, where + ": " + os.str());
    }
    ComplexMatrix m(dim, dim);
    for (int r = 0; r < dim; ++r) {
        const Json& row = j[r];
        std::string rw = where + "[" + std::to_string(r) + "]";
        if (!row.is_array() || row.size() != static_cast<std::size_t>(dim)) {
            std::ostringstream os;
            os << "expected " << dim << " entries";
            throw Error(ErrorCode::Dimension, rw + ": " + os.str());
        }
        for (int c = 0; c < dim; ++c) {
            const Json& e = row[c];
            std::string ew = rw + "[" + std::to_string(c) + "]";
            if (!e.is_array() || e.size() != 2) schema_error(ew, "expected [re, im] pair");
            m(r, c) = Complex(number(e[0], ew + "[0]"), number(e[1], ew + "[1]"));
        }
    }
    return m;
}

Json matrix_to_json(const ComplexMatrix& m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

Povm povm_from_json(const Json& j, const Tolerances& tol) {
    const int d = dim_from_json(j);
    const Json& elements = field(j, "elements", "<root>");
    if (!elements.is_array() || elements.empty()) schema_error("elements", "expected a nonempty array");
    std::vector<ComplexMatrix> ops;
    for (std::size_t k = 0; k < elements.size(); ++k) {
        ops.push_back(matrix_from_json(elements[k], d, "elements[" + std::to_string(k) + "]"));
    }
    std::optional<ComplexMatrix> target;
    if (j.contains("completeness_target") && !j["completeness_target"].is_null()) {
        target = matrix_from_json(j["completeness_target"], d, "completeness_target");
    }
    return validate_povm(std::move(ops), target, tol);
}

Json povm_to_json(const Povm& povm) {
    Json j;
    j["dim"] = povm.dim();
    Json elements = Json::array();
    for (const ComplexMatrix& e : povm.elements()) elements.push_back(matrix_to_json(e));
    j["elements"] = std::move(elements);
    if (!povm.has_identity_target()) j["completeness_target"] = matrix_to_json(povm.completeness_target());
    return j;
}

DensityOperator state_from_json(const Json& j, const Tolerances& tol) {
    const int d = dim_from_json(j);
    if (j.contains("bloch")) {
        if (d != 2) schema_error("bloch", "Bloch form requires dim 2");
        const Json& b = j["bloch"];
        if (!b.is_array() || b.size() != 3) schema_error("bloch", "expected [x, y, z]");
        Eigen::Vector3d s;
        for (int a = 0; a < 3; ++a) s(a) = number(b[a], "bloch[" + std::to_string(a) + "]");
        return DensityOperator::from_bloch(s);
    }
    return DensityOperator::from_matrix(matrix_from_json(field(j, "matrix", "<root>"), d, "matrix"), tol);
}

Json state_to_json(const DensityOperator& rho) {
    return Json{{"dim", rho.dim()}, {"matrix", matrix_to_json(rho.matrix())}};
}

RealMatrix real_matrix_from_json(const Json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) schema_error(where, "expected a nonempty array of rows");
    const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
    if (cols == 0) schema_error(where + "[0]", "expected a nonempty row");
    RealMatrix m(j.size(), cols);
    for (std::size_t r = 0; r < j.size(); ++r) {
        std::string rw = where + "[" + std::to_string(r) + "]";
        if (!j[r].is_array() || j[r].size() != cols) {
            throw Error(ErrorCode::Dimension, rw + ": expected " + std::to_string(cols) + " entries");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            m(r, c) = number(j[r][c], rw + "[" + std::to_string(c) + "]");
        }
    }
    return m;
}

Json report_to_json(const FisherReport& report, int gamma, const Tolerances& tol) {
    Json j;
    j["kind"] = to_string(report.kind);
    j["spectrum"] = std::vector<double>(report.spectrum.data(), report.spectrum.data() + report.spectrum.size());
    j["purity"] = report.purity;
    j["gill_massar_trace"] = report.gill_massar_trace;
    j["zeta"] = report.sharpness_index;
    j["sharp"] = report.is_fisher_sharp;
    j["symmetric"] = is_fisher_symmetric(report.spectrum, tol);
    j["fisher_rank"] = report.fisher_rank;
    j["gamma"] = gamma;
    j["near_boundary"] = report.near_boundary;
    return j;
}

Json case_to_json(const CaseSpec& spec) {
    return Json{{"seed", spec.seed},
                {"d", spec.d},
                {"m", spec.m},
                {"flavor", std::string(to_string(spec.flavor))},
                {"variant", spec.variant}};
}

CaseSpec case_from_json(const Json& j, const std::string& where) {
    CaseSpec spec;
    const Json& seed = field(j, "seed", where);
    if (!seed.is_number_unsigned()) schema_error(where + ".seed", "expected an unsigned integer");
    spec.seed = seed.get<std::uint64_t>();
    for (auto [name, slot] : {std::pair{"d", &spec.d}, {"m", &spec.m}, {"variant", &spec.variant}}) {
        const Json& v = field(j, name, where);
        if (!v.is_number_integer()) schema_error(where + "." + name, "expected an integer");
        *slot = v.get<int>();
    }
    const Json& flavor = field(j, "flavor", where);
    auto parsed = flavor.is_string() ? flavor_from_string(flavor.get<std::string>()) : std::nullopt;
    if (!parsed) schema_error(where + ".flavor", "unknown flavor");
    spec.flavor = *parsed;
    return spec;
}

Json suite_to_json(const SuiteReport& report) {
    Json checks = Json::array();
    for (const CheckReport& c : report.checks) {
        Json entry{{"check", std::string(to_string(c.check))},
                   {"trials", c.trials},
                   {"failures", c.failures},
                   {"worst_residual", finite_or_null(c.worst_residual)},
                   {"worst_case", case_to_json(c.worst_case)}};
        if (!c.first_failure.empty()) entry["first_failure"] = c.first_failure;
        checks.push_back(std::move(entry));
    }
    return Json{{"seed", report.seed},
                {"profile", to_string(report.profile)},
                {"passed", report.passed()},
                {"failed_checks", report.failed_checks()},
                {"checks", std::move(checks)}};
}

}  // namespace qfc::io
