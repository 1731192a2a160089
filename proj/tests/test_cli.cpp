#include "cli.hpp"
#include "json_io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using qfc::io::Json;

namespace {

struct Result {
    int rc;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int rc = qfc::cli::run_cli(args, out, err);
    return {rc, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(QFC_TEST_DATA) + "/" + name; }

fs::path scratch(const std::string& name, const std::string& text) {
    fs::path dir = fs::temp_directory_path() / "qfc_test_cli";
    fs::create_directories(dir);
    fs::path p = dir / name;
    std::ofstream(p) << text;
    return p;
}

int lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("analyze examples") {
    Result sic = run({"analyze", "--state", data("mixed2.json"), "--povm", data("sic.json"), "--format", "json"});
    REQUIRE(sic.rc == 0);
    Json j = Json::parse(sic.out);
    for (double v : j["spectrum"]) CHECK(v == doctest::Approx(1.0 / 3));
    CHECK(j["purity"].get<double>() == doctest::Approx(1.0 / 3));
    CHECK(j["zeta"] == 0);
    CHECK(j["gamma"] == 1);
    CHECK(j["sharp"] == false);
    CHECK(j["symmetric"] == true);

    Result pvm = run({"analyze", "--state", data("z05.json"), "--povm", data("zpvm.json"), "--format", "json"});
    REQUIRE(pvm.rc == 0);
    Json p = Json::parse(pvm.out);
    CHECK(p["zeta"] == 1);
    CHECK(p["gamma"] == 2);
    CHECK(p["sharp"] == true);
    CHECK(p["purity"].get<double>() == doctest::Approx(1.0));

    for (const char* kind : {"rld", "lld"}) {
        Result k = run({"analyze", "--state", data("z05.json"), "--povm", data("zpvm.json"), "--kind", kind});
        CHECK(k.rc == 0);
        CHECK(k.out.find("sharp             true") != std::string::npos);
    }
}

TEST_CASE("sweep-sic csv") {
    Result r = run({"sweep-sic", "--direction", "xyz", "--s-max", "0.9", "--s-step", "0.1"});
    REQUIRE(r.rc == 0);
    std::istringstream in(r.out);
    std::string header;
    std::getline(in, header);
    CHECK(header == "s,lam1,lam2,lam3,purity,lam1_analytic,lam2_analytic,lam3_analytic,purity_analytic");
    int rows = 0;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<double> v;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) v.push_back(std::stod(cell));
        REQUIRE(v.size() == 9);
        for (int k = 1; k <= 4; ++k) CHECK(std::abs(v[k] - v[k + 4]) < 1e-9);
        if (std::abs(v[0] - 0.5) < 1e-12) {
            CHECK(v[1] == doctest::Approx(0.4));
            CHECK(v[3] == doctest::Approx(0.2));
        }
        ++rows;
    }
    CHECK(rows == 10);
}

TEST_CASE("finest-pvm and coarse-grain") {
    Result sic = run({"finest-pvm", "--povm", data("sic.json")});
    REQUIRE(sic.rc == 0);
    Json j = Json::parse(sic.out);
    CHECK(j["gamma"] == 1);
    CHECK(j["elements"].size() == 1);

    Result pvm = run({"finest-pvm", "--povm", data("zpvm.json")});
    CHECK(Json::parse(pvm.out)["gamma"] == 2);

    fs::path id = scratch("id.json", "[[1, 0], [0, 1]]");
    Result same = run({"coarse-grain", "--povm", data("zpvm.json"), "--lambda", id.string()});
    REQUIRE(same.rc == 0);
    Json z = Json::parse(same.out);
    Json expected = qfc::io::read_json_file(data("zpvm.json"));
    CHECK(z["elements"].size() == 2);
    CHECK(z["elements"] == expected["elements"]);

    fs::path ones = scratch("ones.json", "[[1, 1]]");
    Result triv = run({"coarse-grain", "--povm", data("zpvm.json"), "--lambda", ones.string()});
    REQUIRE(triv.rc == 0);
    CHECK(Json::parse(triv.out)["elements"].size() == 1);

    fs::path bad = scratch("bad_lambda.json", "[[0.5, 1], [0.4, 0]]");
    Result r = run({"coarse-grain", "--povm", data("zpvm.json"), "--lambda", bad.string()});
    CHECK(r.rc == 1);
    CHECK(lines(r.err) == 1);
}

TEST_CASE("POVM JSON round trip is exact") {
    Result first = run({"finest-pvm", "--povm", data("sic.json")});
    fs::path out = scratch("roundtrip.json", first.out);
    Result again = run({"finest-pvm", "--povm", out.string()});
    CHECK(first.out == again.out);

    qfc::Povm sic = qfc::io::povm_from_json(qfc::io::read_json_file(data("sic.json")));
    Json dumped = qfc::io::povm_to_json(sic);
    qfc::Povm back = qfc::io::povm_from_json(Json::parse(dumped.dump()));
    for (std::size_t k = 0; k < sic.size(); ++k) CHECK(back.element(k) == sic.element(k));
}

TEST_CASE("malformed input gives one-line errors and the documented exit codes") {
    fs::path broken = scratch("broken.json", "{\"dim\": 2, \"elements\": [");
    Result io = run({"analyze", "--state", data("mixed2.json"), "--povm", broken.string()});
    CHECK(io.rc == 3);
    CHECK(lines(io.err) == 1);
    CHECK(io.err.rfind("error[io]", 0) == 0);

    Result missing = run({"analyze", "--state", data("mixed2.json"), "--povm", "/nonexistent/x.json"});
    CHECK(missing.rc == 3);
    CHECK(lines(missing.err) == 1);

    fs::path wrong_dim = scratch("wrong_dim.json", "{\"dim\": 2, \"elements\": [[[[1, 0]]]]}");
    Result dim = run({"analyze", "--state", data("mixed2.json"), "--povm", wrong_dim.string()});
    CHECK(dim.rc == 1);
    CHECK(lines(dim.err) == 1);

    fs::path incomplete = scratch("incomplete.json",
                                  "{\"dim\": 2, \"elements\": [[[[1, 0], [0, 0]], [[0, 0], [0.5, 0]]]]}");
    Result val = run({"analyze", "--state", data("mixed2.json"), "--povm", incomplete.string()});
    CHECK(val.rc == 1);
    CHECK(lines(val.err) == 1);
    CHECK(val.err.rfind("error[validation]", 0) == 0);

    fs::path bad_state = scratch("bad_state.json", "{\"dim\": 2, \"bloch\": [0, 0, 1.5]}");
    CHECK(run({"analyze", "--state", bad_state.string(), "--povm", data("zpvm.json")}).rc == 1);

    Result usage = run({"analyze", "--bogus"});
    CHECK(usage.rc == 1);
    CHECK(lines(usage.err) == 1);
    CHECK(run({"verify", "--check", "NoSuchCheck"}).rc == 1);
}

TEST_CASE("verify quick") {
    Result a = run({"verify", "--profile", "quick", "--seed", "42"});
    Result b = run({"verify", "--profile", "quick", "--seed", "42"});
    CHECK(a.rc == 0);
    CHECK(a.out == b.out);
    std::istringstream in(a.out);
    std::string line;
    int pass = 0;
    while (std::getline(in, line)) pass += line.rfind("PASS ", 0) == 0;
    CHECK(pass == 22);

    Result json = run({"verify", "--check", "Lem7", "--format", "json"});
    REQUIRE(json.rc == 0);
    Json j = Json::parse(json.out);
    CHECK(j["passed"] == true);
    CHECK(j["checks"].size() == 1);

    fs::path report = scratch("report.json", json.out);
    Result replay = run({"verify", "--replay", report.string()});
    CHECK(replay.rc == 0);
    CHECK(replay.out.rfind("PASS Lem7", 0) == 0);
}
