#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "sconst/cli.hpp"

using nlohmann::json;

namespace {

struct RunResult {
    int code = 0;
    std::string out;
    std::string err;
    json doc;        // parsed stdout when nonempty
    json error_doc;  // parsed stderr when nonempty
};

RunResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    RunResult r;
    r.code = sconst::cli::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    if (!r.out.empty() && r.out.front() == '{') r.doc = json::parse(r.out);
    if (!r.err.empty() && r.err.front() == '{') r.error_doc = json::parse(r.err);
    return r;
}

}  // namespace

TEST_CASE("bethe subcommand prints roots and residual", "[cli]") {
    const RunResult r =
        run_cli({"bethe", "--L", "4", "--N", "2", "--modes", "1,-1"});
    REQUIRE(r.code == 0);
    REQUIRE(r.doc.at("command") == "bethe");
    const json& roots = r.doc.at("result").at("roots");
    REQUIRE(roots.size() == 2);
    const double a = 0.28867513459481287;
    REQUIRE(std::abs(roots[0][0].get<double>() - a) < 1e-9);
    REQUIRE(std::abs(roots[1][0].get<double>() + a) < 1e-9);
    REQUIRE(std::abs(roots[0][1].get<double>()) < 1e-9);
    REQUIRE(r.doc.at("result").at("residual").get<double>() < 1e-12);
}

TEST_CASE("dwpf subcommand evaluates the partition function", "[cli]") {
    const RunResult r = run_cli(
        {"dwpf", "--N", "1", "--w", "0.3+0.4i", "--z", "0.0+0.5i"});
    REQUIRE(r.code == 0);
    const json& value = r.doc.at("result").at("value");
    REQUIRE(std::abs(value[0].get<double>() + 1.0) < 1e-12);
    REQUIRE(std::abs(value[1].get<double>() - 3.0) < 1e-12);
}

TEST_CASE("gaudin subcommand verifies roots before evaluating", "[cli]") {
    const RunResult good = run_cli(
        {"gaudin", "--L", "4", "--u",
         "0.28867513459481287+0.0i,-0.28867513459481287+0.0i"});
    REQUIRE(good.code == 0);
    REQUIRE(std::abs(good.doc.at("result").at("value")[0].get<double>() -
                     432.0) < 1e-8);
    REQUIRE(good.doc.at("diagnostics").at("bethe_residual").get<double>() <
            1e-12);

    const RunResult bad =
        run_cli({"gaudin", "--L", "6", "--u", "0.8+0.1i,-0.2+0.3i"});
    REQUIRE(bad.code == 1);
    REQUIRE(bad.error_doc.at("error").at("kind") == "UnverifiedRoots");
    REQUIRE(bad.error_doc.at("error").at("context") == "gaudin");
    REQUIRE(bad.out.empty());
}

TEST_CASE("slavnov subcommand switches on explicit columns", "[cli]") {
    const RunResult restricted = run_cli(
        {"slavnov", "--L", "4", "--u", "0.3+0.2i,-0.6+0.1i", "--zs",
         "0.05+0.55i,-0.35+0.4i,0.75+0.62i,-0.95+0.5i"});
    REQUIRE(restricted.code == 0);
    REQUIRE(restricted.doc.at("diagnostics").at("homogeneous") == false);

    const RunResult hom = run_cli(
        {"slavnov", "--L", "6", "--u", "0.8+0.1i,-0.2+0.3i", "--v",
         "0.5-0.4i"});
    REQUIRE(hom.code == 1);
    REQUIRE(hom.error_doc.at("error").at("kind") == "UnverifiedRoots");
}

TEST_CASE("sc subcommand reports the structure constant and its factors",
          "[cli]") {
    const RunResult r = run_cli({"sc", "--L", "6,6,4", "--N", "3,1,2",
                                 "--modes-1", "1,-1,3", "--modes-2", "1",
                                 "--modes-3", "1,-1"});
    REQUIRE(r.code == 0);
    const json& result = r.doc.at("result");
    std::set<std::string> keys;
    for (const auto& [k, v] : result.items()) keys.insert(k);
    REQUIRE(keys == std::set<std::string>{"N123", "S", "Z", "branch", "c",
                                          "residuals"});
    REQUIRE(result.at("branch") == "principal");
    REQUIRE(std::abs(result.at("c")[0].get<double>() - 0.05796257015663578) <
            1e-9);
    REQUIRE(std::abs(result.at("c")[1].get<double>() - 0.1003941164485688) <
            1e-9);
    REQUIRE(std::abs(result.at("Z")[0].get<double>() - 6.0) < 1e-9);
    REQUIRE(r.doc.at("diagnostics").at("l13") == 2);

    const RunResult bad = run_cli({"sc", "--L", "6,4,4", "--N", "3,1,2",
                                   "--modes-1", "1,-1,3", "--modes-2", "1",
                                   "--modes-3", "1,-1"});
    REQUIRE(bad.code == 1);
    REQUIRE(bad.error_doc.at("error").at("kind") == "InvalidGeometry");
    REQUIRE(bad.error_doc.at("error").at("context") == "sc");
}

TEST_CASE("map subcommand prints the basis index", "[cli]") {
    const RunResult r =
        run_cli({"map", "--word", "Tr(ZZXZ)", "--role", "O1"});
    REQUIRE(r.code == 0);
    const json& result = r.doc.at("result");
    REQUIRE(result.at("L") == 4);
    REQUIRE(result.at("mask") == 4);
    REQUIRE(result.at("bits") == "0010");
    REQUIRE(result.at("down_count") == 1);
    REQUIRE(result.at("net_spin") == 2);
    REQUIRE(r.doc.at("inputs").at("side") == "initial");

    const RunResult bad =
        run_cli({"map", "--word", "Tr(ZQ)", "--role", "O1"});
    REQUIRE(bad.code == 1);
    REQUIRE(bad.error_doc.at("error").at("kind") == "ParseError");
}

TEST_CASE("verify subcommand runs a named suite", "[cli]") {
    const RunResult r = run_cli({"verify", "weights", "--seed", "777"});
    REQUIRE(r.code == 0);
    REQUIRE(r.doc.at("inputs").at("seed") == 777);
    REQUIRE(r.doc.at("result").at("passed") == true);
    const json& checks = r.doc.at("result").at("checks");
    REQUIRE(checks.size() == 1);
    REQUIRE(checks[0].at("name") == "vertex weights against their defining ratios");
    REQUIRE(checks[0].at("passed") == true);
    // Wall times stay out of the document so --check can compare bytes.
    REQUIRE(!checks[0].contains("seconds"));

    REQUIRE(run_cli({"verify", "nope"}).code == 2);
}

TEST_CASE("usage problems exit with code two", "[cli]") {
    const RunResult missing_sub = run_cli({});
    REQUIRE(missing_sub.code == 2);

    const RunResult count = run_cli(
        {"bethe", "--L", "4", "--N", "2", "--modes", "1"});
    REQUIRE(count.code == 2);
    REQUIRE(count.error_doc.at("error").at("kind") == "Usage");
    REQUIRE(count.error_doc.at("error").at("context") == "bethe");

    const RunResult literal =
        run_cli({"dwpf", "--N", "1", "--w", "1+2i", "--z", "0.0+0.5i"});
    REQUIRE(literal.code == 2);
    REQUIRE(literal.error_doc.at("error").at("message")
                .get<std::string>()
                .find("bad complex literal") != std::string::npos);
}

TEST_CASE("csv format flattens the result object", "[cli]") {
    const RunResult r = run_cli(
        {"--format", "csv", "map", "--word", "Tr(ZZXZ)", "--role", "O1"});
    REQUIRE(r.code == 0);
    REQUIRE(r.out == "L,bits,down_count,mask,net_spin\n4,0010,1,4,2\n");
}

TEST_CASE("output file and repeatability flags", "[cli]") {
    const std::filesystem::path path =
        std::filesystem::temp_directory_path() / "sconst_cli_out_test.json";
    std::filesystem::remove(path);

    const RunResult ok = run_cli({"dwpf", "--N", "1", "--w", "0.3+0.4i",
                                  "--z", "0.0+0.5i", "--out", path.string()});
    REQUIRE(ok.code == 0);
    REQUIRE(ok.out.empty());
    REQUIRE(std::filesystem::exists(path));
    std::filesystem::remove(path);

    const RunResult failed = run_cli({"gaudin", "--L", "6", "--u",
                                      "0.8+0.1i,-0.2+0.3i", "--out",
                                      path.string()});
    REQUIRE(failed.code == 1);
    REQUIRE(!std::filesystem::exists(path));

    const RunResult checked =
        run_cli({"bethe", "--L", "4", "--N", "2", "--modes", "1,-1",
                 "--check"});
    REQUIRE(checked.code == 0);
}
