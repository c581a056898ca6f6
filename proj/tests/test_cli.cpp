#include <doctest.h>

#include <array>
#include <cstdio>
#include <string>

#include <json.hpp>

using nlohmann::json;

#ifdef SO21_CLI_PATH

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
};

CliResult run_cli(const std::string& args) {
    const std::string cmd = std::string(SO21_CLI_PATH) + " " + args + " 2>/dev/null";
    CliResult res;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
        res.out.append(buf.data(), n);
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

}  // namespace

TEST_CASE("cli distance") {
    const CliResult r = run_cli("distance --a identity --b \"boost 1\"");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j["d"].get<double>() == doctest::Approx(1.0));
    CHECK(j["case"] == "Case0_Sim");
    CHECK(j.contains("left_translation"));
}

TEST_CASE("cli classify") {
    const CliResult r = run_cli("classify --m \"rotation 1.5708\"");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j["label"] == "SO2");
    CHECK(j["conjugate_flag"].get<bool>());
}

TEST_CASE("cli cut-time") {
    const CliResult r = run_cli("cut-time --beta 2");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j["cut_time"].get<double>() == doctest::Approx(3.6275987284684357));

    const CliResult z = run_cli("cut-time --beta 0");
    REQUIRE(z.exit_code == 0);
    CHECK(json::parse(z.out)["cut_time"].is_null());
}

TEST_CASE("cli conjugate-time") {
    const CliResult r = run_cli("conjugate-time --beta 2");
    REQUIRE(r.exit_code == 0);
    CHECK(json::parse(r.out)["conjugate_time"].get<double>() ==
          doctest::Approx(5.188542320206017));

    const CliResult none = run_cli("conjugate-time --beta 1");
    REQUIRE(none.exit_code == 0);
    CHECK(json::parse(none.out)["conjugate_time"].is_null());
}

TEST_CASE("cli geodesic and trace") {
    const CliResult g = run_cli("geodesic --beta 1 --phi 0 --t 1");
    REQUIRE(g.exit_code == 0);
    const json jg = json::parse(g.out);
    CHECK(jg["matrix"][0].get<double>() == doctest::Approx(1.5));
    CHECK(jg.contains("residuals"));

    const CliResult t =
        run_cli("trace --beta 0 --phi 0 --t 1 --steps 2 --format csv");
    REQUIRE(t.exit_code == 0);
    CHECK(t.out.rfind("t,c11,c12,c13,c21,c22,c23,c31,c32,c33,hx,hy,ht\n", 0) == 0);
}

TEST_CASE("cli decompose") {
    const CliResult r = run_cli("decompose --m \"geodesic 0.8 0.2 1.1\"");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j.contains("s1"));
    CHECK(j.contains("k1"));
    CHECK(j.contains("s2"));
    CHECK(j.contains("eta"));
}

TEST_CASE("cli error codes") {
    CHECK(run_cli("classify --m \"1 2 3\"").exit_code == 2);
    CHECK(run_cli("classify --m \"2 0 0 0 2 0 0 0 2\"").exit_code == 2);
    CHECK(run_cli("frobnicate").exit_code == 64);
    CHECK(run_cli("").exit_code == 64);
    // an unreachable oracle target is reported as inconsistent: exit 3
    CHECK(run_cli("oracle-check --m \"boost 3\" --t-max 0.5 --t-steps 21 "
                  "--beta-steps 11 --phi-steps 12 --refine-rounds 0")
              .exit_code == 3);
}

TEST_CASE("cli sample reproducibility") {
    const CliResult a = run_cli("sample --count 5 --seed 42");
    const CliResult b = run_cli("sample --count 5 --seed 42");
    const CliResult c = run_cli("sample --count 5 --seed 43");
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out != c.out);
    const json j = json::parse(a.out);
    REQUIRE(j.is_array());
    CHECK(j.size() == 5);
    CHECK(j[0].contains("matrix"));
    CHECK(j[0].contains("residuals"));
}

TEST_CASE("cli oracle-check") {
    const CliResult r = run_cli(
        "oracle-check --m \"geodesic 0.5 1.0 0.7\" --t-max 2 --t-steps 81 "
        "--beta-steps 25 --phi-steps 32 --refine-rounds 3 --gap-tol 0.005");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j["consistent"].get<bool>());
    CHECK(j["analytic_d"].get<double>() == doctest::Approx(0.7));
}

TEST_CASE("cli oracle-check batch CSV") {
    const char* path = "/tmp/so21_batch_targets.txt";
    {
        FILE* f = fopen(path, "w");
        REQUIRE(f != nullptr);
        fputs("# regression targets\nboost 1\ngeodesic 0.5 1.0 0.7\n", f);
        fclose(f);
    }
    const CliResult r = run_cli(
        std::string("oracle-check --batch ") + path +
        " --format csv --t-max 2 --t-steps 81 --beta-steps 25 --phi-steps 32 "
        "--refine-rounds 3 --gap-tol 0.005 --hit-tol 1e-6");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.rfind("index,t_min,match_residual,analytic_d,gap,hit_found,"
                      "consistent\n", 0) == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 3);
}

#endif  // SO21_CLI_PATH
