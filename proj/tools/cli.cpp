#include "cli.hpp"

#include "json_io.hpp"
#include "qfc/fisher.hpp"
#include "qfc/povm.hpp"
#include "qfc/qubit.hpp"
#include "qfc/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace qfc::cli {

namespace {

constexpr double kSweepTol = 1e-9;

struct Common {
    std::string kind = "sld";
    double zero_tol = Tolerances{}.zero_tol;
    double eig_one_tol = Tolerances{}.eig_one_tol;
    std::string format;
    std::uint64_t seed = 42;

    Tolerances tolerances() const {
        Tolerances tol;
        tol.zero_tol = zero_tol;
        tol.eig_one_tol = eig_one_tol;
        tol.validate();
        return tol;
    }

    FimKind fim_kind() const {
        auto k = fim_kind_from_string(kind);
        if (!k) throw Error(ErrorCode::Validation, "unknown kind '" + kind + "'");
        return *k;
    }
};

void add_common(CLI::App* sub, Common& c, std::vector<std::string> formats) {
    sub->add_option("--kind", c.kind, "Fisher metric: sld, rld or lld")
        ->check(CLI::IsMember({"sld", "rld", "lld"}));
    sub->add_option("--tol", c.zero_tol, "Zero tolerance");
    sub->add_option("--eig-one-tol", c.eig_one_tol, "Tolerance for counting eigenvalues equal to 1");
    c.format = formats.front();
    sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember(formats));
    sub->add_option("--seed", c.seed, "Random seed");
}

std::string fmt(double v, int precision = 17) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    return buf;
}

std::string one_line(std::string s) {
    std::replace(s.begin(), s.end(), '\n', ' ');
    std::replace(s.begin(), s.end(), '\r', ' ');
    return s;
}

void emit(const io::Json& j, const std::string& output, std::ostream& out) {
    std::string text = j.dump(2) + "\n";
    if (output.empty()) out << text;
    else io::write_text_file(output, text);
}

// ---------------------------------------------------------------------------

struct AnalyzeArgs {
    Common common;
    std::string state, povm;
};

int analyze(const AnalyzeArgs& a, std::ostream& out) {
    Tolerances tol = a.common.tolerances();
    FimKind kind = a.common.fim_kind();
    DensityOperator rho = io::state_from_json(io::read_json_file(a.state), tol);
    Povm povm = io::povm_from_json(io::read_json_file(a.povm), tol);
    FisherReport report = analyze(rho, povm, kind, tol);
    int gamma = irreducible_components(povm, tol).gamma;
    io::Json j = io::report_to_json(report, gamma, tol);
    if (a.common.format == "json") {
        out << j.dump(2) << "\n";
        return kOk;
    }
    std::ostringstream spectrum;
    for (Eigen::Index i = 0; i < report.spectrum.size(); ++i) {
        spectrum << (i ? " " : "") << fmt(report.spectrum(i), 10);
    }
    out << std::left;
    out << std::setw(18) << "kind" << to_string(report.kind) << "\n";
    out << std::setw(18) << "spectrum" << spectrum.str() << "\n";
    out << std::setw(18) << "purity" << fmt(report.purity, 10) << "\n";
    out << std::setw(18) << "gill_massar_trace" << fmt(report.gill_massar_trace, 10) << "\n";
    out << std::setw(18) << "zeta" << report.sharpness_index << "\n";
    out << std::setw(18) << "sharp" << (report.is_fisher_sharp ? "true" : "false") << "\n";
    out << std::setw(18) << "symmetric" << (j["symmetric"].get<bool>() ? "true" : "false") << "\n";
    out << std::setw(18) << "fisher_rank" << report.fisher_rank << "\n";
    out << std::setw(18) << "gamma" << gamma << "\n";
    out << std::setw(18) << "near_boundary" << (report.near_boundary ? "true" : "false") << "\n";
    return kOk;
}

// ---------------------------------------------------------------------------

struct SweepArgs {
    Common common;
    std::string direction = "x";
    double s_max = 0.99;
    double s_step = 0.01;
};

int sweep_sic(const SweepArgs& a, std::ostream& out, std::ostream& err) {
    Tolerances tol = a.common.tolerances();
    SicDirection direction = *sic_direction_from_string(a.direction);
    if (!(a.s_step > 0.0) || !(a.s_max >= 0.0) || !(a.s_max < 1.0)) {
        throw Error(ErrorCode::Validation, "s-grid needs step > 0 and 0 <= s-max < 1");
    }
    const Povm sic = qubit_sic();
    const int points = static_cast<int>(std::floor(a.s_max / a.s_step + 1e-9)) + 1;
    double worst = 0.0;
    io::Json rows = io::Json::array();
    if (a.common.format == "csv") {
        out << "s,lam1,lam2,lam3,purity,lam1_analytic,lam2_analytic,lam3_analytic,purity_analytic\n";
    }
    for (int i = 0; i < points; ++i) {
        const double s = i * a.s_step;
        DensityOperator rho = DensityOperator::from_bloch(s * unit_vector(direction));
        RealVector lam = fisher_eigenvalues_unclipped(rho, sic, FimKind::Sld, tol);
        double purity = spectrum_summary(lam, 2, tol).purity;
        SicAnalytic exact = sic_analytic(direction, s);
        for (int k = 0; k < 3; ++k) worst = std::max(worst, std::abs(lam(k) - exact.eigenvalues[k]));
        worst = std::max(worst, std::abs(purity - exact.purity));
        if (a.common.format == "csv") {
            out << fmt(s, 12);
            for (int k = 0; k < 3; ++k) out << "," << fmt(lam(k));
            out << "," << fmt(purity);
            for (int k = 0; k < 3; ++k) out << "," << fmt(exact.eigenvalues[k]);
            out << "," << fmt(exact.purity) << "\n";
        } else {
            rows.push_back({{"s", s},
                            {"numeric", {lam(0), lam(1), lam(2)}},
                            {"purity", purity},
                            {"analytic", exact.eigenvalues},
                            {"purity_analytic", exact.purity}});
        }
    }
    if (a.common.format == "json") {
        out << io::Json{{"direction", a.direction}, {"max_abs_diff", worst}, {"points", rows}}.dump(2)
            << "\n";
    }
    if (worst > kSweepTol) {
        err << "error[check]: numeric and analytic SIC columns differ by " << fmt(worst, 6) << "\n";
        return kCheckFailure;
    }
    return kOk;
}

// ---------------------------------------------------------------------------

struct PovmArgs {
    Common common;
    std::string povm, lambda, output;
};

int finest_pvm_cmd(const PovmArgs& a, std::ostream& out) {
    Tolerances tol = a.common.tolerances();
    Povm povm = io::povm_from_json(io::read_json_file(a.povm), tol);
    Povm p = finest_pvm(povm, tol);
    io::Json j = io::povm_to_json(p);
    j["gamma"] = p.size();
    emit(j, a.output, out);
    return kOk;
}

int coarse_grain_cmd(const PovmArgs& a, std::ostream& out) {
    Tolerances tol = a.common.tolerances();
    Povm povm = io::povm_from_json(io::read_json_file(a.povm), tol);
    RealMatrix lambda = io::real_matrix_from_json(io::read_json_file(a.lambda), "lambda");
    emit(io::povm_to_json(coarse_grain(povm, lambda, tol)), a.output, out);
    return kOk;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
    Common common;
    std::string profile = "quick";
    unsigned threads = 1;
    std::vector<std::string> checks;
    std::string output;
    std::string replay;
    bool timing = false;
};

void print_check(const CheckReport& c, bool timing, std::ostream& out) {
    out << (c.passed() ? "PASS " : "FAIL ") << std::left << std::setw(20) << to_string(c.check)
        << " trials=" << c.trials << " failures=" << c.failures
        << " worst_residual=" << fmt(c.worst_residual, 3);
    if (timing) out << " elapsed=" << fmt(c.elapsed.count(), 3) << "s";
    if (!c.passed()) {
        out << " first_failure=\"" << one_line(c.first_failure) << "\" case="
            << io::case_to_json(c.worst_case).dump();
    }
    out << "\n";
}

int replay(const VerifyArgs& a, std::ostream& out) {
    Tolerances tol = a.common.tolerances();
    io::Json report = io::read_json_file(a.replay);
    if (!report.is_object() || !report.contains("checks") || !report["checks"].is_array()) {
        throw Error(ErrorCode::Validation, "checks: expected an array of check reports");
    }
    int failed = 0;
    for (std::size_t i = 0; i < report["checks"].size(); ++i) {
        const io::Json& entry = report["checks"][i];
        std::string where = "checks[" + std::to_string(i) + "]";
        auto id = entry.contains("check") && entry["check"].is_string()
                      ? check_from_string(entry["check"].get<std::string>())
                      : std::nullopt;
        if (!id) throw Error(ErrorCode::Validation, where + ".check: unknown check");
        if (!entry.contains("worst_case")) {
            throw Error(ErrorCode::Validation, where + ": missing field 'worst_case'");
        }
        CaseSpec spec = io::case_from_json(entry["worst_case"], where + ".worst_case");
        TrialOutcome outcome = run_case(*id, spec, tol);
        if (!outcome.passed) ++failed;
        out << (outcome.passed ? "PASS " : "FAIL ") << std::left << std::setw(20) << to_string(*id)
            << " residual=" << fmt(outcome.residual, 3) << " case=" << io::case_to_json(spec).dump();
        if (!outcome.passed) out << " note=\"" << one_line(outcome.note) << "\"";
        out << "\n";
    }
    return failed == 0 ? kOk : kCheckFailure;
}

int verify(const VerifyArgs& a, std::ostream& out) {
    if (!a.replay.empty()) return replay(a, out);
    Tolerances tol = a.common.tolerances();
    Profile profile = *profile_from_string(a.profile);
    SuiteReport report;
    if (a.checks.empty()) {
        report = run_suite(a.common.seed, profile, tol, a.threads);
    } else {
        ProfileSettings settings = settings_for(profile);
        report.seed = a.common.seed;
        report.profile = profile;
        for (const std::string& name : a.checks) {
            auto id = check_from_string(name);
            if (!id) throw Error(ErrorCode::Validation, "unknown check '" + name + "'");
            report.checks.push_back(
                run_check(*id, a.common.seed, settings.trials, settings.dims, tol, a.threads));
        }
    }
    io::Json j = io::suite_to_json(report);
    if (!a.output.empty()) io::write_text_file(a.output, j.dump(2) + "\n");
    if (a.common.format == "json") {
        out << j.dump(2) << "\n";
    } else {
        for (const CheckReport& c : report.checks) print_check(c, a.timing, out);
        out << "summary: " << report.checks.size() - report.failed_checks() << "/" << report.checks.size()
            << " checks passed (profile " << to_string(profile) << ", seed " << report.seed << ")\n";
    }
    return report.passed() ? kOk : kCheckFailure;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fisher spectrum analysis of quantum measurements", "qfc"};
    app.require_subcommand(1);

    AnalyzeArgs analyze_args;
    CLI::App* analyze_cmd = app.add_subcommand("analyze", "Fisher spectrum of a POVM at a state");
    add_common(analyze_cmd, analyze_args.common, {"table", "json"});
    analyze_cmd->add_option("--state", analyze_args.state, "State file")->required();
    analyze_cmd->add_option("--povm", analyze_args.povm, "POVM file")->required();

    SweepArgs sweep_args;
    CLI::App* sweep_cmd = app.add_subcommand("sweep-sic", "Qubit SIC spectrum along a Bloch direction");
    add_common(sweep_cmd, sweep_args.common, {"csv", "json"});
    sweep_cmd->add_option("--direction", sweep_args.direction, "x, xy or xyz")
        ->check(CLI::IsMember({"x", "xy", "xyz"}));
    sweep_cmd->add_option("--s-max", sweep_args.s_max, "Largest Bloch radius");
    sweep_cmd->add_option("--s-step", sweep_args.s_step, "Grid step");

    PovmArgs finest_args;
    CLI::App* finest_cmd = app.add_subcommand("finest-pvm", "Finest PVM coarse graining P(A)");
    add_common(finest_cmd, finest_args.common, {"json"});
    finest_cmd->add_option("--povm", finest_args.povm, "POVM file")->required();
    finest_cmd->add_option("--output,-o", finest_args.output, "Write to file instead of stdout");

    PovmArgs coarse_args;
    CLI::App* coarse_cmd = app.add_subcommand("coarse-grain", "Apply a column-stochastic matrix");
    add_common(coarse_cmd, coarse_args.common, {"json"});
    coarse_cmd->add_option("--povm", coarse_args.povm, "POVM file")->required();
    coarse_cmd->add_option("--lambda", coarse_args.lambda, "Row-major stochastic matrix file")->required();
    coarse_cmd->add_option("--output,-o", coarse_args.output, "Write to file instead of stdout");

    VerifyArgs verify_args;
    CLI::App* verify_cmd = app.add_subcommand("verify", "Run the randomized check suite");
    add_common(verify_cmd, verify_args.common, {"table", "json"});
    verify_cmd->add_option("--profile", verify_args.profile, "quick or full")
        ->check(CLI::IsMember({"quick", "full"}));
    verify_cmd->add_option("--threads", verify_args.threads, "Worker threads per check");
    verify_cmd->add_option("--check", verify_args.checks, "Run only these checks");
    verify_cmd->add_option("--output,-o", verify_args.output, "Also write the JSON report to a file");
    verify_cmd->add_option("--replay", verify_args.replay, "Re-run the worst cases of a JSON report");
    verify_cmd->add_flag("--timing", verify_args.timing, "Show wall time per check");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error[usage]: " << one_line(e.what()) << "\n";
        return kValidationError;
    }

    try {
        if (analyze_cmd->parsed()) return analyze(analyze_args, out);
        if (sweep_cmd->parsed()) return sweep_sic(sweep_args, out, err);
        if (finest_cmd->parsed()) return finest_pvm_cmd(finest_args, out);
        if (coarse_cmd->parsed()) return coarse_grain_cmd(coarse_args, out);
        return verify(verify_args, out);
    } catch (const Error& e) {
        err << "error[" << to_string(e.code()) << "]: " << one_line(e.what()) << "\n";
        return e.code() == ErrorCode::Io ? kIoError : kValidationError;
    } catch (const io::Json::exception& e) {
        err << "error[validation]: " << one_line(e.what()) << "\n";
        return kValidationError;
    }
}

}  // namespace qfc::cli
