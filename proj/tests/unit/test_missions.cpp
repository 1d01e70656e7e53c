#include <doctest.h>

#include <filesystem>

#include "swarmsafe/commgraph.hpp"
#include "swarmsafe/missions.hpp"

using namespace swarmsafe;
namespace fs = std::filesystem;

namespace {

BatchSpec small_batch() {
    BatchSpec b;
    b.missions = 3;
    b.seed = 9;
    b.config.n_agents = 4;
    b.workers = 2;
    return b;
}

} // namespace

TEST_CASE("desk defaults") {
    const BatchSpec b;
    CHECK(b.config.n_agents == 10);
    CHECK(b.config.timeout == 48.0 * 3600.0);
    CHECK(b.config.dt == 600.0);
    CHECK(b.missions == 50);
    CHECK_NOTHROW(b.validate());
    BatchSpec bad;
    bad.feasibility_lo = 2.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = {};
    bad.domain.width = 1000.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("rng is reproducible and uniform in [0, 1)") {
    Rng a(5), b(5);
    double lo = 1.0, hi = 0.0;
    for (int k = 0; k < 10000; ++k) {
        const double x = a.uniform();
        CHECK(x == b.uniform());
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    CHECK(lo >= 0.0);
    CHECK(hi < 1.0);
    CHECK(lo < 0.001);
    CHECK(hi > 0.999);
}

TEST_CASE("generated missions satisfy the sampling invariants") {
    const BatchSpec b = small_batch();
    const auto ms = generate_missions(b, b.seed);
    REQUIRE(ms.size() == 3);
    for (const auto& m : ms) {
        CHECK(m.start_positions.size() == 4);
        CHECK(m.timeout == b.config.timeout);
        CHECK(m.target.radius == b.config.target_radius);
        CHECK_FALSE(check_mission(m, b.config, b.domain).has_value());
        const DenseMatrix d = pairwise_distances(m.start_positions);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = i + 1; j < 4; ++j) {
                CHECK(d(i, j) > 2.0 * b.config.r_coll);
                CHECK(d(i, j) < 0.8 * b.config.r_com);
            }
    }
    CHECK(generate_missions(b, b.seed) == ms);
    CHECK_FALSE(generate_missions(b, b.seed + 1) == ms);
}

TEST_CASE("in still water the feasibility window is a distance window") {
    BatchSpec b = small_batch();
    b.sim_flow = "zero";
    b.missions = 20;
    const auto ms = generate_missions(b, 4);
    const double cell = std::hypot(b.domain.width, b.domain.height) / static_cast<double>(b.grid_nodes - 1);
    const double spread = b.spread_fraction * b.config.r_com;
    for (const auto& m : ms) {
        // The proxy is evaluated at the sampled centroid; agents sit within `spread` of it.
        const double gap = m.target.gap(centroid(m.start_positions));
        CHECK(gap >= b.config.u_max * b.feasibility_lo * b.config.timeout - spread - cell);
        CHECK(gap <= b.config.u_max * b.feasibility_hi * b.config.timeout + spread + cell);
    }
}

TEST_CASE("check_mission names the violation") {
    SimConfig cfg;
    const Domain dom{0, 0, 100000, 100000};
    MissionSpec m;
    m.start_positions = {{1000, 1000}, {1050, 1000}};
    CHECK(check_mission(m, cfg, dom) == Rejection::collision);
    m.start_positions = {{1000, 1000}, {20000, 1000}};
    CHECK(check_mission(m, cfg, dom) == Rejection::disconnected);
    m.start_positions = {{-10, 1000}, {2000, 1000}};
    CHECK(check_mission(m, cfg, dom) == Rejection::out_of_bounds);
    m.start_positions = {{1000, 1000}, {5000, 1000}};
    CHECK_FALSE(check_mission(m, cfg, dom).has_value());
}

TEST_CASE("time to reach interpolates node values") {
    ValueGrid g;
    g.spec = {0.0, 10.0, 0.0, 10.0, 2, 2};
    g.values = {0.0, 10.0, 20.0, 30.0};
    CHECK(time_to_reach(g, {5.0, 5.0}) == 15.0);
    CHECK(time_to_reach(g, {10.0, 0.0}) == 10.0);
    CHECK(std::isinf(time_to_reach(g, {11.0, 0.0})));
    g.values[3] = INFINITY;
    CHECK(std::isinf(time_to_reach(g, {5.0, 5.0})));
}

TEST_CASE("an unsatisfiable window exhausts the sampling budget") {
    BatchSpec b = small_batch();
    b.grid_nodes = 20;
    b.sim_flow = "zero";
    // No point of the domain is ten timeouts away from any target at u_max.
    b.feasibility_lo = 10.0;
    b.feasibility_hi = 11.0;
    try {
        generate_missions(b, 1);
        FAIL("expected SamplingError");
    } catch (const SamplingError& e) {
        const std::string what = e.what();
        CHECK(what.find("10000") != std::string::npos);
        CHECK(what.find("too_fast") != std::string::npos);
    }
}

TEST_CASE("a small batch runs every policy on every mission") {
    const fs::path dir = fs::temp_directory_path() / "swarmsafe_unit" / "batch";
    fs::remove_all(dir);
    const BatchSpec b = small_batch();
    const BatchResult r = run_batch(b, dir);
    REQUIRE(r.outcomes.size() == 9);
    CHECK(r.outcomes[0].policy == "baseline");
    CHECK(r.outcomes[1].policy == "reactive");
    CHECK(r.outcomes[2].policy == "flocking");
    CHECK(r.outcomes[3].mission_id == 1);
    CHECK(r.report.rows.size() == 3);
    CHECK_FALSE(r.report.comparisons.empty());
    CHECK(fs::exists(dir / "missions.json"));
    CHECK(fs::exists(dir / "batch_report.csv"));
    CHECK(fs::exists(dir / "batch_report.json"));
    CHECK(fs::exists(dir / mission_dir_name(2) / "flocking.csv"));
    CHECK(mission_dir_name(7) == "mission_0007");
}
