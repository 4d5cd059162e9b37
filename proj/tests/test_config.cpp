#include <doctest.h>

#include "wqed/config.hpp"
#include "wqed/csv.hpp"

using namespace wqed;

TEST_CASE("defaults survive a dump/load round trip, load->dump->load is fixed") {
    RunConfig c;
    std::string d1 = dump_config(c);
    RunConfig c2 = load_config(d1);
    std::string d2 = dump_config(c2);
    CHECK(d1 == d2);
    CHECK(dump_config(load_config(d2)) == d2);
}

TEST_CASE("values, comments and spacing are parsed") {
    RunConfig c = load_config(
        "# a comment\n"
        "sweep.gauge = coulomb\n"
        "sweep.rwa=false\n"
        "dipole.beta = 4.25  # trailing comment\n"
        "sweep.columns = T, R\n"
        "\n");
    CHECK(c.plan.gauge == Gauge::Coulomb);
    CHECK_FALSE(c.plan.rwa);
    CHECK(c.plan.dipole.beta == 4.25);
    CHECK(c.plan.columns == std::vector<std::string>{"T", "R"});
}

TEST_CASE("full-precision floats round-trip exactly") {
    RunConfig c;
    c.plan.dipole.beta = 3.8000000000000003;
    RunConfig c2 = load_config(dump_config(c));
    CHECK(c2.plan.dipole.beta == c.plan.dipole.beta);
}

TEST_CASE("bad input is rejected with the key named") {
    CHECK_THROWS_WITH_AS(load_config("nope = 1\n"), "unknown key 'nope'",
                         std::invalid_argument);
    CHECK_THROWS_AS(load_config("dipole.beta = 1\ndipole.beta = 2\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(load_config("dipole.beta = abc\n"), std::invalid_argument);
    CHECK_THROWS_AS(load_config("sweep.rwa = maybe\n"), std::invalid_argument);
    CHECK_THROWS_AS(load_config("just a line\n"), std::invalid_argument);
}

TEST_CASE("validation re-checks physical invariants") {
    RunConfig c = load_config("dipole.beta = -2\n");
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = load_config("schema_version = 9\n");
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = load_config("circuit.c_r = 1\n");  // partial circuit block
    CHECK(c.has_circuit());
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = RunConfig{};
    CHECK_NOTHROW(c.validate());  // circuit block absent: not validated
}

TEST_CASE("JSON mirror nests the dotted keys") {
    std::string j = config_to_json(RunConfig{});
    CHECK(j.find("\"dipole\"") != std::string::npos);
    CHECK(j.find("\"beta\"") != std::string::npos);
    CHECK(j.find("dipole.beta") == std::string::npos);
}

TEST_CASE("CSV formatting contract") {
    CHECK(format_float(0.1) == "0.10000000000000001");
    CHECK(format_float(1.0) == "1");
    CHECK(format_float(-0.0) == "-0");
    Table t;
    t.schema = "demo/1";
    t.columns = {"a", "quo\"te", "with,comma"};
    t.provenance = {{"k", "v"}};
    t.rows = {{"1", "x", "plain"}};
    std::string csv = to_csv(t);
    CHECK(csv.rfind("# schema=demo/1\n", 0) == 0);
    CHECK(csv.find("a,\"quo\"\"te\",\"with,comma\"\n# k=v\n") !=
          std::string::npos);
}
