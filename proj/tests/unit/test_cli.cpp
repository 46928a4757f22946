#include <doctest.h>

#include "levyspde_cli/cli.hpp"
#include "levyspde_cli/config.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace levyspde;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "levyspde");
    std::vector<char*> argv;
    for (auto& a : args) {
        argv.push_back(a.data());
    }
    std::ostringstream out, err;
    auto* o = std::cout.rdbuf(out.rdbuf());
    auto* e = std::cerr.rdbuf(err.rdbuf());
    const int code = cli::run(static_cast<int>(argv.size()), argv.data());
    std::cout.rdbuf(o);
    std::cerr.rdbuf(e);
    return {code, out.str(), err.str()};
}

const std::filesystem::path kDir = std::filesystem::temp_directory_path() / "levyspde_test_cli";

std::string write_config(const std::string& name, const std::string& body) {
    std::filesystem::create_directories(kDir);
    const auto p = kDir / name;
    std::ofstream(p) << body;
    return p.string();
}

const char* kBase = R"({
  "schema_version": 1,
  "name": "tiny",
  "equation": {"kind": "heat"},
  "axis": "spatial",
  "beta": 0.75,
  "horizon": 1.0,
  "ladder": {"dyadic_from": 2, "dyadic_to": 6},
  "modes": 256
})";

std::string with(const std::string& key_value) {
    std::string s = kBase;
    s.insert(s.rfind('}'), ",\n  " + key_value + "\n");
    return s;
}

double value_after(const std::string& text, const std::string& key) {
    const auto pos = text.find(key + " ");
    REQUIRE(pos != std::string::npos);
    return std::stod(text.substr(pos + key.size() + 1));
}

}  // namespace

TEST_CASE("config parsing is strict") {
    CHECK_NOTHROW(cli::parse_study_config(kBase));
    const auto c = cli::parse_study_config(kBase);
    CHECK(c.ladder.size() == 5);
    CHECK(c.ladder.front() == 0.25);
    CHECK(c.output == "tiny.csv");

    CHECK_THROWS_AS(cli::parse_study_config(with(R"("colour": 1)")), cli::ConfigError);
    CHECK_THROWS_AS(cli::parse_study_config("{"), cli::ConfigError);
    CHECK_THROWS_AS(cli::parse_study_config(R"({"name": "x"})"), cli::ConfigError);

    std::string v2 = kBase;
    v2.replace(v2.find("\"schema_version\": 1"), 19, "\"schema_version\": 2");
    CHECK_THROWS_AS(cli::parse_study_config(v2), cli::ConfigError);

    std::string bad_eq = kBase;
    bad_eq.replace(bad_eq.find("\"heat\""), 6, "\"burgers\"");
    CHECK_THROWS_AS(cli::parse_study_config(bad_eq), cli::ConfigError);

    CHECK_THROWS_AS(cli::parse_study_config(with(R"("noise": {"law": "compound_poisson", "nu": 1})")),
                    cli::ConfigError);
    CHECK_THROWS_AS(cli::parse_study_config(with(R"("quadrature": {"nodes": 5})")), cli::ConfigError);
    CHECK_THROWS_AS(cli::parse_study_config(with(R"("initial": {"first": [1, "a"]})")), cli::ConfigError);
    CHECK_THROWS_AS(cli::parse_study_config(with(R"("monte_carlo": {"paths": 10, "seed": -1})")),
                    cli::ConfigError);

    const auto spatial = cli::parse_study_config(
        R"({"schema_version": 1, "name": "s", "equation": {"kind": "wave"}, "axis": "spatial",
            "beta": 0.75, "horizon": 0.75, "ladder": {"dyadic_from": 2, "dyadic_to": 5}})");
    CHECK(spatial.ladder.front() == 0.25);
    CHECK(spatial.kind.scheme == WaveScheme::crank_nicolson);
}

TEST_CASE("output directory resolution") {
    auto c = cli::parse_study_config(kBase);
    ::setenv(cli::kOutputDirEnv, "/tmp/from_env", 1);
    CHECK(cli::resolve_output(c, "") == std::filesystem::path("/tmp/from_env/tiny.csv"));
    CHECK(cli::resolve_output(c, "/tmp/flag") == std::filesystem::path("/tmp/flag/tiny.csv"));
    ::unsetenv(cli::kOutputDirEnv);
    CHECK(cli::resolve_output(c, "") == std::filesystem::path("tiny.csv"));
    c.output = "/abs/out.csv";
    CHECK(cli::resolve_output(c, "/tmp/flag") == std::filesystem::path("/abs/out.csv"));
}

TEST_CASE("study exit codes") {
    const auto ok = invoke({"study", write_config("ok.json", kBase), "--out-dir", kDir.string()});
    CHECK(ok.code == cli::kOk);
    CHECK(std::filesystem::exists(kDir / "tiny.csv"));
    CHECK(ok.out.find("strong slope") != std::string::npos);

    const auto div = invoke({"study", write_config("div.json", with(R"("covariance": {"decay": 0.2})")),
                             "--out-dir", kDir.string()});
    CHECK(div.code == cli::kConfigError);
    CHECK(div.err.find("exponent 2(s + 1/rho - beta) = 0.8999") != std::string::npos);

    std::string bad_eq = kBase;
    bad_eq.replace(bad_eq.find("\"heat\""), 6, "\"burgers\"");
    CHECK(invoke({"study", write_config("bad.json", bad_eq)}).code == cli::kConfigError);
    CHECK(invoke({"study", (kDir / "nope.json").string()}).code == cli::kConfigError);
    CHECK(invoke({"study"}).code == cli::kConfigError);
    CHECK(invoke({"frobnicate"}).code == cli::kConfigError);

    // weak slope far off the expected value for a deliberately wrong beta claim
    const auto fail = invoke({"study",
                              write_config("fail.json", with(R"("covariance": {"decay": 3.0})")),
                              "--out-dir", kDir.string()});
    CHECK(fail.code == cli::kAcceptanceFailure);
}

TEST_CASE("shipped heat-spatial preset passes") {
    const auto r = invoke({"study", std::string(LEVYSPDE_PRESET_DIR) + "/heat-spatial.json", "--out-dir",
                           kDir.string()});
    CHECK(r.code == cli::kOk);
}

TEST_CASE("check-condition") {
    const auto r = invoke({"check-condition", "--equation", "heat", "--beta", "1", "--s", "0.55", "--K", "4096"});
    CHECK(r.code == cli::kOk);
    CHECK(r.out.find("hs_flag converges") != std::string::npos);
    CHECK(r.out.find("weqii_equals_hs_squared true") != std::string::npos);
    const double partial = value_after(r.out, "hs_partial_sum");
    const double tail = value_after(r.out, "hs_tail_bound");
    const auto d = invoke({"check-condition", "--beta", "1", "--s", "0.55", "--K", "8192"});
    CHECK(value_after(d.out, "hs_partial_sum") - partial < tail);

    const auto b = invoke({"check-condition", "--equation", "volterra", "--rho", "1.5", "--beta", "0.8",
                           "--s", "0.3", "--K", "64"});
    CHECK(b.code == cli::kOk);
    CHECK(b.out.find("hs_flag diverges") != std::string::npos);
    CHECK(invoke({"check-condition", "--equation", "volterra", "--beta", "1", "--s", "1"}).code ==
          cli::kConfigError);
}

TEST_CASE("kernel inspection") {
    const auto ml = invoke({"ml-eval", "1.0", "2.0"});
    CHECK(ml.code == cli::kOk);
    CHECK(std::abs(value_after(ml.out, "2") - std::exp(-2.0)) < 1e-10);

    const auto cq = invoke({"cq-weights", "1.5", "0.1", "4"});
    CHECK(cq.code == cli::kOk);
    CHECK(std::abs(value_after(cq.out, "0") - 0.31622776601683794) < 1e-15);
    CHECK(std::abs(value_after(cq.out, "1") - 0.5 * 0.31622776601683794) < 1e-15);

    const auto a = invoke({"sample-path", "--law", "compound_poisson", "--K", "3", "--seed", "17"});
    const auto b = invoke({"sample-path", "--law", "compound_poisson", "--K", "3", "--seed", "17"});
    CHECK(a.code == cli::kOk);
    CHECK(a.out == b.out);
    const auto g = invoke({"sample-path", "--law", "variance_gamma", "--K", "2", "--steps", "4"});
    CHECK(g.code == cli::kOk);
    CHECK(invoke({"sample-path", "--law", "stable"}).code == cli::kConfigError);
}

TEST_CASE("verify-representation") {
    const std::string single = R"({
      "schema_version": 1, "name": "single", "equation": {"kind": "heat"}, "axis": "temporal",
      "beta": 1.0, "modes": 1, "ladder": [0.25, 0.125, 0.0625, 0.03125]})";
    const auto path = write_config("single.json", single);
    const auto r = invoke({"verify-representation", path});
    CHECK(r.code == cli::kOk);
    std::istringstream lines(r.out);
    int rows = 0;
    for (std::string l; std::getline(lines, l);) {
        if (l.rfind("single@", 0) == 0) {
            ++rows;
            const double w = value_after(l, "weak");
            const double rep = value_after(l, "representation");
            CHECK(std::abs(w - rep) <= 1e-10);
        }
    }
    CHECK(rows == 4);
    CHECK(invoke({"verify-representation", path, "--tamper-cross-term"}).code == cli::kAcceptanceFailure);
}
