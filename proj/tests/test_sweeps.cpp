#include <doctest.h>

#include <cstdlib>
#include <filesystem>

#include "wqed/rwa_scattering.hpp"
#include "wqed/sweeps.hpp"

using namespace wqed;

namespace {

SweepPlan quick_plan() {
    SweepPlan p;
    p.method = SweepMethod::ClosedForm;
    p.delta_override = 1.0;  // no matter solve in unit tests
    p.g_axis = {0.0, 0.3, 3};
    p.omega_axis = {0.7, 1.3, 7};
    return p;
}

}  // namespace

TEST_CASE("grid axes") {
    GridAxis a{0.0, 1.0, 5};
    auto pts = a.points();
    REQUIRE(pts.size() == 5);
    CHECK(pts.front() == 0.0);
    CHECK(pts.back() == 1.0);
    GridAxis bad{1.0, 0.0, 3};
    CHECK_THROWS_AS(bad.validate("x"), std::invalid_argument);
    GridAxis single{0.5, 0.5, 1};
    CHECK(single.points() == std::vector<double>{0.5});
}

TEST_CASE("one row per grid point, trivial pass-through at g = 0") {
    SweepPlan p = quick_plan();
    p.g_axis = {0.0, 0.0, 1};
    p.omega_axis = {1.0, 1.0, 1};
    Table t = run_sweep(p);
    REQUIRE(t.rows.size() == 1);
    auto col = [&](const char* name) {
        for (std::size_t j = 0; j < t.columns.size(); ++j)
            if (t.columns[j] == name) return t.rows[0][j];
        FAIL("missing column");
        return std::string();
    };
    CHECK(col("T") == "1");
    CHECK(col("error") == "");
}

TEST_CASE("identical plans give byte-identical CSV") {
    SweepPlan p = quick_plan();
    CHECK(to_csv(run_sweep(p)) == to_csv(run_sweep(p)));
}

TEST_CASE("rows match direct closed-form evaluation") {
    SweepPlan p = quick_plan();
    Table t = run_sweep(p);
    REQUIRE(t.rows.size() == 3 * 7);
    std::size_t jT = 0, jo = 0, jg = 0;
    for (std::size_t j = 0; j < t.columns.size(); ++j) {
        if (t.columns[j] == "T") jT = j;
        if (t.columns[j] == "omega") jo = j;
        if (t.columns[j] == "g") jg = j;
    }
    for (const auto& row : t.rows) {
        double expect = transmission_rwa(p.waveguide, 1.0, std::stod(row[jg]),
                                         p.gauge, std::stod(row[jo]))
                            .transmission;
        CHECK(std::stod(row[jT]) == doctest::Approx(expect).epsilon(1e-15));
    }
}

TEST_CASE("out-of-band points are error-flagged, not dropped") {
    SweepPlan p = quick_plan();
    p.omega_axis = {0.2, 1.3, 12};  // two points below the band edge
    Table t = run_sweep(p);
    CHECK(t.rows.size() == 3 * 12);
    int flagged = 0;
    for (const auto& row : t.rows)
        if (row.back() == "invalid_input") ++flagged;
    CHECK(flagged == 3 * 2);
}

TEST_CASE("systemic failure aborts with a summary") {
    SweepPlan p = quick_plan();
    p.omega_axis = {0.05, 0.3, 8};  // entirely below the band
    CHECK_THROWS_AS(run_sweep(p), std::runtime_error);
}

TEST_CASE("column selection preserves request order and rejects strangers") {
    SweepPlan p = quick_plan();
    p.columns = {"T", "omega"};
    Table t = run_sweep(p);
    CHECK(t.columns == std::vector<std::string>{"T", "omega"});
    p.columns = {"delta_r"};  // a polaron column
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("content hash separates plans, cache round-trips bytes") {
    SweepPlan a = quick_plan();
    SweepPlan b = a;
    b.g_axis.max = 0.31;
    CHECK(a.content_hash() != b.content_hash());
    CHECK(a.content_hash() == quick_plan().content_hash());

    auto dir = std::filesystem::temp_directory_path() / "wqed-cache-test";
    std::filesystem::remove_all(dir);
    setenv("WQED_CACHE_DIR", dir.c_str(), 1);
    std::string first = run_sweep_csv(a);
    CHECK(std::filesystem::exists(dir));
    // second call must be served from disk, byte-identical
    std::string second = run_sweep_csv(a);
    CHECK(first == second);
    unsetenv("WQED_CACHE_DIR");
    std::filesystem::remove_all(dir);
}

TEST_CASE("polaron sweep rows carry convergence data") {
    SweepPlan p = quick_plan();
    p.method = SweepMethod::Polaron;
    p.polaron_modes = 201;
    p.g_axis = {0.0, 0.2, 2};
    Table t = run_sweep(p);
    REQUIRE(t.rows.size() == 2);
    std::size_t jr = 0, jd = 0;
    for (std::size_t j = 0; j < t.columns.size(); ++j) {
        if (t.columns[j] == "residual") jr = j;
        if (t.columns[j] == "delta_r") jd = j;
    }
    CHECK(std::stod(t.rows[0][jd]) == 1.0);
    CHECK(std::stod(t.rows[1][jd]) < 1.0);
    for (const auto& row : t.rows) CHECK(std::stod(row[jr]) < 1e-10);
}

TEST_CASE("cancellation truncates instead of discarding") {
    SweepPlan p = quick_plan();
    request_sweep_cancel();
    Table t = run_sweep(p);
    reset_sweep_cancel();
    CHECK(t.truncated);
    CHECK(t.rows.empty());
    std::string csv = to_csv(t);
    CHECK(csv.find("# truncated=true") != std::string::npos);
}

TEST_CASE("resonance trace flags the flat zero-coupling spectrum") {
    SweepPlan p = quick_plan();
    p.rwa = true;
    p.g_axis = {0.0, 0.2, 2};
    p.omega_axis = {0.75, 1.25, 21};
    p.waveguide.n_cavities = 201;
    p.region_size = 5;
    p.polaron_modes = 201;
    Table t = resonance_trace(p);
    REQUIRE(t.rows.size() == 2);
    auto cell = [&](std::size_t i, const char* name) {
        for (std::size_t j = 0; j < t.columns.size(); ++j)
            if (t.columns[j] == name) return t.rows[i][j];
        return std::string();
    };
    CHECK(cell(0, "min_defined") == "0");
    CHECK(cell(1, "min_defined") == "1");
    // RWA-mode minimum must sit on the closed-form resonance
    double located = std::stod(cell(1, "omega_min"));
    double rwa_res = std::stod(cell(1, "omega_res_rwa"));
    CHECK(std::abs(located - rwa_res) < 1e-5);
    // and all traces approach delta as g -> 0
    CHECK(std::stod(cell(0, "omega_res_rwa")) == doctest::Approx(1.0));
    CHECK(std::stod(cell(0, "omega_res_polaron")) ==
          doctest::Approx(1.0).epsilon(1e-3));
}
