#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "jobs.hpp"
#include "qdx/errors.hpp"

using namespace qdx;

namespace {

/// Write a throwaway config file and return its path.
std::string write_config(const std::string& name, const std::string& body) {
    const std::string path = "qdx_test_" + name + ".json";
    std::ofstream out(path);
    out << body;
    return path;
}

const std::string kPowerLaw = R"({
  "grid": {"base": 1.0, "q": 0.5, "depth": 64},
  "potentials": {"R": "0", "S": "1", "T": "0",
                 "V": "a*(1-q^alpha)/(1-q)*x^(alpha-1)+a^2*q^alpha*x^(2*alpha)"},
  "seed": "a*x^alpha",
  "params": {"a": 1.0, "alpha": 1.0},
  "initial": {"psi": 1.0, "phi": 0.0},
  "transform": "plus",
  "t": 0.5,
  "tail_tolerance": 1e-4
})";

} // namespace

TEST_CASE("config loading") {
    SUBCASE("full round trip") {
        auto path = write_config("full", kPowerLaw);
        cli::JobConfig c = cli::load_job_config(path);
        CHECK(c.grid_depth == 64);
        CHECK(c.grid_q == 0.5);
        CHECK(c.seed_expr == "a*x^alpha");
        CHECK(c.t_list.size() == 1);
        CHECK(c.params.at("alpha") == 1.0);
        std::remove(path.c_str());
    }

    SUBCASE("unknown keys are rejected") {
        auto path = write_config("typo", R"({"grids": {"base": 1.0}})");
        CHECK_THROWS_AS(cli::load_job_config(path), cli::ConfigError);
        std::remove(path.c_str());
    }

    SUBCASE("bad JSON and missing files") {
        auto path = write_config("badjson", "{nope");
        CHECK_THROWS_AS(cli::load_job_config(path), cli::ConfigError);
        std::remove(path.c_str());
        CHECK_THROWS_AS(cli::load_job_config("does_not_exist.json"), cli::ConfigError);
    }

    SUBCASE("t accepts scalar or list") {
        auto path = write_config("tlist", R"({"t": [0.1, 0.2, 0.3]})");
        CHECK(cli::load_job_config(path).t_list.size() == 3);
        std::remove(path.c_str());
    }

    SUBCASE("overrides") {
        auto path = write_config("ovr", kPowerLaw);
        cli::JobConfig c = cli::load_job_config(path);
        cli::Overrides o;
        o.grid_depth = 32;
        o.t_list = {0.25};
        o.format = std::string("json");
        cli::apply_overrides(c, o);
        CHECK(c.grid_depth == 32);
        CHECK(c.t_list[0] == 0.25);
        CHECK(c.format == "json");
        o.format = std::string("yaml");
        CHECK_THROWS_AS(cli::apply_overrides(c, o), cli::ConfigError);
        std::remove(path.c_str());
    }
}

TEST_CASE("solve-linear table") {
    auto path = write_config("solve", R"({
      "grid": {"base": 1.0, "q": 0.5, "depth": 16},
      "potentials": {"R": "0", "S": "0", "T": "0", "V": "0"},
      "seed": "0", "initial": {"psi": 1.0, "phi": 0.0}, "tail_tolerance": 1e-2
    })");
    cli::JobConfig c = cli::load_job_config(path);
    std::ostringstream out, err;
    CHECK(cli::run_solve_linear(c, out, err) == 0);
    std::istringstream lines(out.str());
    std::string header, row0, row1;
    std::getline(lines, header);
    std::getline(lines, row0);
    std::getline(lines, row1);
    // V = 0 adds the closed-form comparison column
    CHECK(header == "index,x,psi,phi,u,residual,prop1_delta");
    CHECK(row0 == "0,1,1,0,0,0,0");
    CHECK(row1 == "1,0.5,1,0,0,0,0");
    std::remove(path.c_str());
}

TEST_CASE("backlund table") {
    SUBCASE("t = 0 keeps the seed column") {
        auto path = write_config("t0", kPowerLaw);
        cli::JobConfig c = cli::load_job_config(path);
        c.t_list = {0.0};
        std::ostringstream out, err;
        CHECK(cli::run_backlund(c, false, out, err) == 0);
        std::istringstream lines(out.str());
        std::string line;
        std::getline(lines, line); // header
        while (std::getline(lines, line)) {
            std::istringstream cells(line);
            std::string cell;
            std::vector<std::string> row;
            while (std::getline(cells, cell, ',')) row.push_back(cell);
            CHECK(row[2] == row[3]);  // u0 == u_t
            CHECK(row[4] == row[5]);  // v_before == v_after
        }
        std::remove(path.c_str());
    }

    SUBCASE("byte-identical output for identical configs") {
        auto path = write_config("det", kPowerLaw);
        cli::JobConfig c = cli::load_job_config(path);
        std::ostringstream out1, out2, err;
        cli::run_backlund(c, false, out1, err);
        cli::run_backlund(c, false, out2, err);
        CHECK(out1.str() == out2.str());
        CHECK(!out1.str().empty());
        std::remove(path.c_str());
    }

    SUBCASE("group-law self-test passes on a healthy seed") {
        auto path = write_config("self", kPowerLaw);
        cli::JobConfig c = cli::load_job_config(path);
        std::ostringstream out, err;
        CHECK(cli::run_backlund(c, true, out, err) == 0);
        CHECK(err.str().find("group-law self-test") != std::string::npos);
        std::remove(path.c_str());
    }

    SUBCASE("missing t is a config error") {
        auto path = write_config("not", kPowerLaw);
        cli::JobConfig c = cli::load_job_config(path);
        c.t_list.clear();
        std::ostringstream out, err;
        CHECK_THROWS_AS(cli::run_backlund(c, false, out, err), cli::ConfigError);
        std::remove(path.c_str());
    }
}

TEST_CASE("verify") {
    SUBCASE("healthy power-law config passes every check") {
        auto path = write_config("ok", kPowerLaw);
        cli::JobConfig c = cli::load_job_config(path);
        std::ostringstream out, err;
        CHECK(cli::run_verify(c, false, out, err) == 0);
        CHECK(out.str().find("seed-riccati") != std::string::npos);
        std::remove(path.c_str());
    }

    SUBCASE("corrupted V fails seed validation with exit 4") {
        auto path = write_config("bad", R"({
          "grid": {"base": 1.0, "q": 0.5, "depth": 64},
          "potentials": {"R": "0", "S": "1", "T": "0", "V": "1.5001*x^0"},
          "seed": "x", "t": 0.5, "tail_tolerance": 1e-4
        })");
        cli::JobConfig c = cli::load_job_config(path);
        std::ostringstream out, err;
        CHECK(cli::run_verify(c, false, out, err) == 4);
        CHECK(out.str().find("seed-riccati,") != std::string::npos);
        std::remove(path.c_str());
    }

    SUBCASE("q = 1 is rejected and points at the classic mode") {
        auto path = write_config("q1", kPowerLaw);
        cli::JobConfig c = cli::load_job_config(path);
        c.grid_q = 1.0;
        std::ostringstream out, err;
        CHECK_THROWS_WITH_AS(cli::run_verify(c, false, out, err),
                             doctest::Contains("--classic"), cli::ConfigError);
        std::remove(path.c_str());
    }

    SUBCASE("classic mode runs the quadrature oracles") {
        auto path = write_config("classic", kPowerLaw);
        cli::JobConfig c = cli::load_job_config(path);
        c.seed_expr = "1"; // constant seed keeps the classical table smooth
        std::ostringstream out, err;
        CHECK(cli::run_verify(c, true, out, err) == 0);
        CHECK(out.str().find("quadrature-order") != std::string::npos);
        std::remove(path.c_str());
    }
}
