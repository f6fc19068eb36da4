#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "qys/runner.hpp"

using namespace qys;

namespace {

ordered_json strip_timings(ordered_json j) {
    j.erase("timings");
    return j;
}

}  // namespace

TEST_CASE("config parsing rejects unknown keys and bad values") {
    CHECK_THROWS_AS(parse_config({{"command", "verify"}, {"catalog", "FLAT3"}, {"bogus", 1}}),
                    ConfigError);
    CHECK_THROWS_AS(parse_config({{"command", "explode"}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"command", "verify"}, {"suite", "nonsense"}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"command", "verify"},
                                  {"tolerances", {{"solitonn", 1e-6}}}}),
                    ConfigError);
    CHECK_THROWS_AS(parse_config({{"command", "verify"}, {"m", 0.0}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"command", "verify"}, {"m", "infinite"}}), ConfigError);

    const RunConfig cfg = parse_config(
        {{"command", "verify"}, {"catalog", "FLAT3"}, {"m", "inf"}, {"suite", "soliton"}});
    CHECK(cfg.m_infinite_override);
    CHECK(cfg.suites == std::vector<std::string>{"soliton"});
}

TEST_CASE("construct dimension gate mirrors the definition") {
    RunConfig cfg = parse_config({{"command", "construct"},
                                  {"construct", {{"n", 2}, {"m", 1.0}, {"rho", 0.0}, {"q", 0.0}}}});
    CHECK_THROWS_AS(run(cfg), ConfigError);
}

TEST_CASE("verify: the closed-form steady soliton passes the soliton suite") {
    const RunConfig cfg = parse_config({{"command", "verify"},
                                        {"catalog", "HALF_STEADY"},
                                        {"suite", "soliton"},
                                        {"points", 20},
                                        {"seed", 42},
                                        {"tolerances", {{"soliton", 1e-11}}}});
    const Report rep = run(cfg);
    CHECK(rep.summary());
    CHECK(rep.checks.size() >= 5);
}

TEST_CASE("verify: random polynomial data passes the algebraic suite") {
    const RunConfig cfg = parse_config(
        {{"command", "verify"}, {"catalog", "RANDOMPOLY4"}, {"suite", "algebraic"}, {"points", 10}});
    const Report rep = run(cfg);
    CHECK(rep.summary());
    bool saw_dnorm = false, saw_trace = false;
    for (const auto& c : rep.checks) {
        if (c.name == "dnorm_split") saw_dnorm = true;
        if (c.name == "d_trace_first_pair") saw_trace = true;
    }
    CHECK(saw_dnorm);
    CHECK(saw_trace);
}

TEST_CASE("verify: the round sphere with rho = 0 is not a soliton and fails") {
    const RunConfig cfg = parse_config(
        {{"command", "verify"}, {"catalog", "SPHERE3"}, {"suite", "soliton"}, {"rho", 0.0}});
    const Report rep = run(cfg);
    CHECK_FALSE(rep.summary());
    CHECK(rep.to_json()["summary"] == "fail");
}

TEST_CASE("verify report is deterministic apart from timings") {
    const ordered_json spec = {{"command", "verify"},
                               {"catalog", "RANDOMPOLY3"},
                               {"suite", ordered_json::array({"algebraic", "soliton"})},
                               {"points", 8},
                               {"seed", 1234}};
    const Report a = run(parse_config(spec));
    const Report b = run(parse_config(spec));
    CHECK(strip_timings(a.to_json()).dump() == strip_timings(b.to_json()).dump());
}

TEST_CASE("inline instance specs drive the checks") {
    const ordered_json spec = {
        {"command", "verify"},
        {"suite", "soliton"},
        {"points", 12},
        {"instance",
         {{"metric",
           {{"kind", "diag"},
            {"dim", 3},
            {"entries", ordered_json::array({"1", "1", "1"})},
            {"box", ordered_json::array({ordered_json::array({-0.5, 1.5}),
                                         ordered_json::array({-1.0, 1.0}),
                                         ordered_json::array({-1.0, 1.0})})}}},
          {"potential", {{"kind", "expr"}, {"text", "-2*ln(1+x1)"}}},
          {"m", 2.0},
          {"rho", 0.0}}},
        {"tolerances", {{"soliton", 1e-11}}}};
    const Report rep = run(parse_config(spec));
    CHECK(rep.summary());
}

TEST_CASE("construct command produces the CSV and passes its checks") {
    const std::string csv = "runner_construct_test.csv";
    const ordered_json spec = {
        {"command", "construct"},
        {"construct",
         {{"n", 3}, {"m", 1.0}, {"rho", 6.0}, {"q", 0.0}, {"r_max", 3.2}, {"h_r", 1e-3}}},
        {"csv", csv},
        {"points", 15}};
    const Report rep = run(parse_config(spec));
    CHECK(rep.summary());
    bool saw_roundtrip = false, saw_coeff = false;
    for (const auto& c : rep.checks) {
        if (c.name == "roundtrip_soliton_eq") {
            saw_roundtrip = true;
            CHECK(c.value < 1e-8);  // closed-form sphere
        }
        if (c.name == "chain_coefficient") {
            saw_coeff = true;
            CHECK(c.value == doctest::Approx(0.25));
        }
    }
    CHECK(saw_roundtrip);
    CHECK(saw_coeff);
    CHECK(rep.instance.find("phi_collapse") != std::string::npos);

    std::ifstream is(csv);
    REQUIRE(is.good());
    std::string header1, header2;
    std::getline(is, header1);
    std::getline(is, header2);
    CHECK(header1.rfind("# qys profile", 0) == 0);
    CHECK(header2 == "r,phi,dphi,d2phi,f,df,d2f,R,residual_max");
    std::remove(csv.c_str());
}

TEST_CASE("levelset command on a constructed instance checks per-level constancy") {
    const std::string csv = "runner_levelset_test.csv";
    {
        ProfileParams pp;
        pp.n = 3;
        pp.params = SolitonParams::finite(1.0, 1.0);
        pp.q = 0.5;
        pp.r_max = 3.0;
        pp.h_r = 3e-3;
        write_profile_csv(integrate_profile(pp), csv);
    }
    const ordered_json spec = {{"command", "levelset"},
                               {"from_profile", csv},
                               {"levelset", {{"levels", 3}, {"azimuthal", 8}}},
                               {"seed", 5}};
    const Report rep = run(parse_config(spec));
    std::remove(csv.c_str());
    CHECK(rep.summary());
    int level_checks = 0;
    for (const auto& c : rep.checks)
        if (c.name.rfind("level_r=", 0) == 0) ++level_checks;
    CHECK(level_checks >= 3 * 10);
}

TEST_CASE("levelset command on flat space reports H = 2/r per level") {
    const ordered_json spec = {{"command", "levelset"},
                               {"catalog", "FLAT3"},
                               {"potential", "x1*x1 + x2*x2 + x3*x3"},
                               {"points", 10},
                               {"seed", 31}};
    const Report rep = run(parse_config(spec));
    int seen = 0;
    for (const auto& c : rep.checks) {
        if (c.name.find("/H") == std::string::npos) continue;
        // level value f = r^2, so H must equal 2/sqrt(f)
        const double f = c.point.squaredNorm();
        CHECK(c.value == doctest::Approx(2.0 / std::sqrt(f)).epsilon(1e-9));
        ++seen;
    }
    CHECK(seen == 10);
}

TEST_CASE("quadrature suite through the runner") {
    const ordered_json spec = {{"command", "verify"},
                               {"suite", "quadrature"},
                               {"quadrature", {{"resolution", 16}, {"m", 2.0}}}};
    const Report rep = run(parse_config(spec));
    CHECK(rep.summary());
    CHECK(rep.checks.size() == 4);
}

#ifdef QYS_CLI_PATH
TEST_CASE("command line smoke test: exit codes and flags") {
    const std::string cli = QYS_CLI_PATH;
    CHECK(std::system((cli + " verify --catalog HALF_STEADY --suite soliton > /dev/null").c_str()) == 0);
    // non-soliton configuration: exit 1
    CHECK(std::system(
              (cli + " verify --catalog SPHERE3 --suite soliton --rho 0 > /dev/null").c_str()) !=
          0);
    // config error: exit 2
    const int code = std::system((cli + " verify --catalog NO_SUCH_THING > /dev/null 2>&1").c_str());
    CHECK(WEXITSTATUS(code) == 2);
    const int code2 =
        std::system((cli + " construct --n 2 --m 1 --rho 0 > /dev/null 2>&1").c_str());
    CHECK(WEXITSTATUS(code2) == 2);
}
#endif
