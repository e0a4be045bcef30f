#include <doctest.h>

#include <sstream>

#include "fixtures.hpp"
#include "pcnull/cli.hpp"
#include "pcnull/inconsistency.hpp"
#include "pcnull/io.hpp"

using namespace pcnull;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args, const std::string& stdin_text = "") {
    std::istringstream in(stdin_text);
    std::ostringstream out, err;
    const int code = run_cli(args, in, out, err);
    return {code, out.str(), err.str()};
}

const std::string kEq4Csv = emit_csv(fixtures::worked_example());
const std::string kEq2Sub = "1,1,5\n1,1,5\n1/5,1/5,1\n";

}  // namespace

TEST_CASE("cli analyze reports the worst triad and the recoverable slot") {
    const Run r = run({"analyze", "-"}, kEq4Csv);
    CHECK(r.code == 0);
    CHECK(r.out.find("(1,2)  recoverable  3 companion triad(s)") != std::string::npos);
    CHECK(r.out.find("worst triads:") != std::string::npos);

    const Run filled = run({"analyze", "-"}, emit_csv(set_entry(fixtures::worked_example(), 0, 1, 1.0328)));
    CHECK(filled.out.find("global inconsistency: 0.3333") != std::string::npos);
    CHECK(filled.out.find("(2,3,5)  ix 0.3333") != std::string::npos);
}

TEST_CASE("cli analyze --json carries full precision") {
    const Run r = run({"analyze", "--json", "-"}, emit_csv(set_entry(fixtures::worked_example(), 0, 1, 1.0328)));
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    const double global = doc["report"]["global"].get<double>();
    CHECK(global == *global_inconsistency(set_entry(fixtures::worked_example(), 0, 1, 1.0328)));
    CHECK(doc["report"]["triads"][0]["i"] == 2);
    CHECK(doc["report"]["triads"][0]["k"] == 5);
}

TEST_CASE("cli recover --method triad") {
    const Run r = run({"recover", "--method", "triad", "-"}, kEq4Csv);
    REQUIRE(r.code == 0);
    const PCMatrix filled = parse_csv(r.out);
    CHECK(std::abs(filled.value(0, 1) - 1.0328) <= 1e-3);
    CHECK(validate(filled).empty());
    CHECK(r.err.find("f* 0.2254") != std::string::npos);
    CHECK(r.err.find("residual global inconsistency: 0.3333") != std::string::npos);

    const Run gm = run({"recover", "--method", "gm", "--json", "-"}, kEq4Csv);
    REQUIRE(gm.code == 0);
    const auto doc = nlohmann::json::parse(gm.out);
    CHECK(std::abs(doc["steps"][0]["value"].get<double>() - 1.0637) <= 5e-4);
    CHECK(parse_json(doc["matrix"].dump()).complete());
    CHECK(parse_csv(doc["csv"].get<std::string>()).complete());
}

TEST_CASE("cli recover fails on disconnected input") {
    const Run r = run({"recover", "-"}, "1,2,?,?\n0.5,1,?,?\n?,?,1,3\n?,?,1/3,1\n");
    CHECK(r.code == 1);
    CHECK(r.err.find("{1,2} {3,4}") != std::string::npos);
}

TEST_CASE("cli weights") {
    const Run r = run({"weights", "--json", "-"}, kEq2Sub);
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["w"][0].get<double>() == doctest::Approx(std::cbrt(5.0)).epsilon(1e-12));
    CHECK(doc["w"][1].get<double>() == doctest::Approx(std::cbrt(5.0)).epsilon(1e-12));
    CHECK(doc["w"][2].get<double>() == doctest::Approx(1 / std::cbrt(25.0)).epsilon(1e-12));

    const Run norm = run({"weights", "--normalize", "-"}, kEq2Sub);
    CHECK(norm.code == 0);
    const double total = 2 * std::cbrt(5.0) + 1 / std::cbrt(25.0);
    char expected[64];
    std::snprintf(expected, sizeof expected, "1\t%.4f\n", std::cbrt(5.0) / total);
    CHECK(norm.out.rfind(expected, 0) == 0);

    const Run incomplete = run({"weights", "-"}, kEq4Csv);
    CHECK(incomplete.code == 1);
    CHECK(incomplete.err.find("recover") != std::string::npos);
}

TEST_CASE("cli validate") {
    Run r = run({"validate", "-"}, "1,2\n0.6,1\n");
    CHECK(r.code == 1);
    CHECK(r.out.find("reciprocity (1,2)") != std::string::npos);

    r = run({"validate", "-"}, kEq4Csv);
    CHECK(r.code == 0);

    r = run({"validate", "-"}, "1,7\n1/7,1\n");
    CHECK(r.code == 0);
    CHECK(r.out.find("warning out_of_scale") != std::string::npos);
    r = run({"validate", "--strict", "-"}, "1,7\n1/7,1\n");
    CHECK(r.code == 1);

    r = run({"validate", "--json", "-"}, "1,2\n0.6,1\n");
    CHECK(nlohmann::json::parse(r.out)["valid"] == false);
}

TEST_CASE("cli usage and io errors") {
    CHECK(run({}).code == 2);
    CHECK(run({"analyze"}).code == 2);
    CHECK(run({"analyze", "--bogus", "-"}).code == 2);
    CHECK(run({"recover", "--method", "eigen", "-"}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"--help"}).code == 0);
    CHECK(run({"analyze", "/nonexistent/file.csv"}).code == 1);
    CHECK(run({"analyze", "-"}, "1,x\n?,1\n").code == 1);
}
