#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "swarmsafe/serialization.hpp"

using namespace swarmsafe;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& leaf) {
    const fs::path p = fs::temp_directory_path() / "swarmsafe_unit" / leaf;
    fs::remove_all(p);
    return p;
}

std::string first_line(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    return line;
}

} // namespace

TEST_CASE("config round trip and strictness") {
    SimConfig c;
    c.n_agents = 7;
    c.u_max = 0.25;
    c.integrator = Integrator::euler;
    CHECK(config_from_json(config_to_json(c)) == c);
    CHECK(config_from_json(Json::parse(R"({"rho": 3.5})")).rho == 3.5);
    CHECK_THROWS_AS(config_from_json(Json::parse(R"({"rhoo": 3.5})")), ConfigError);
    CHECK_THROWS_AS(config_from_json(Json::parse(R"({"rho": "3"})")), ConfigError);
    CHECK_THROWS_AS(config_from_json(Json::parse(R"({"integrator": "leapfrog"})")), ConfigError);
}

TEST_CASE("mission and batch spec round trips") {
    BatchSpec b;
    b.missions = 2;
    b.seed = 11;
    b.config.n_agents = 3;
    const auto ms = generate_missions(b, b.seed);
    CHECK(missions_from_json(missions_to_json(ms)) == ms);

    b.id = "trial";
    b.workers = 3;
    b.plan_flow = "uniform:0.1,0";
    const BatchSpec back = batch_spec_from_json(batch_spec_to_json(b));
    CHECK(back.id == "trial");
    CHECK(back.workers == 3);
    CHECK(back.plan_flow == b.plan_flow);
    CHECK(back.sim_flow == b.sim_flow);
    CHECK(back.config == b.config);
    CHECK(back.policies == b.policies);
    CHECK(back.domain.width == b.domain.width);
    Json j = batch_spec_to_json(b);
    j["surprise"] = 1;
    CHECK_THROWS_AS(batch_spec_from_json(j), ConfigError);
}

TEST_CASE("json files report io and parse failures") {
    const fs::path dir = scratch("json");
    CHECK_THROWS_AS(read_json_file(dir / "missing.json"), IoError);
    write_text_file(dir / "bad.json", "{ nope");
    CHECK_THROWS_AS(read_json_file(dir / "bad.json"), ConfigError);
    write_json_file(dir / "nested" / "ok.json", Json{{"a", 1}});
    CHECK(read_json_file(dir / "nested" / "ok.json")["a"] == 1);
}

TEST_CASE("mission logs round trip through csv and json") {
    MissionSpec m;
    m.id = 4;
    m.start_positions = {{1000, 1000}, {4000, 1000}, {2500, 3000}};
    m.target = {{30000, 1000}, 5000};
    m.timeout = 6 * 3600.0;
    SimConfig cfg;
    cfg.n_agents = 3;
    RunOptions opts;
    opts.policy = PolicyKind::lisic_flocking;
    opts.perf = PerfKind::naive;
    const UniformFlow flow({0.05, 0.0});
    const MissionLog log = run_mission(m, opts, flow, flow, cfg);
    REQUIRE(log.steps.size() == 36);

    const fs::path dir = scratch("log");
    write_mission_log(log, dir, "flocking");
    CHECK(first_line(dir / "flocking.csv") == kLogCsvHeader);
    std::istringstream csv(mission_log_csv(log));
    std::size_t lines = 0;
    for (std::string line; std::getline(csv, line);) ++lines;
    CHECK(lines == 1 + 36 * 3);

    const Json j = read_json_file(dir / "flocking.json");
    CHECK(j["policy"] == "flocking");
    CHECK(j["termination"] == "timeout");
    CHECK(j["lambda2"].size() == 36);
    CHECK(j["max_condition_residual"].size() == 36);

    const MissionLog back = read_mission_log(dir, "flocking");
    CHECK(back.mission == log.mission);
    CHECK(back.config == log.config);
    CHECK(back.termination == log.termination);
    REQUIRE(back.steps.size() == log.steps.size());
    for (std::size_t k = 0; k < log.steps.size(); ++k)
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(back.steps[k].positions[i].x == round_sig9(log.steps[k].positions[i].x));
            CHECK(back.steps[k].controls[i].vector.y == round_sig9(log.steps[k].controls[i].vector.y));
        }
}

TEST_CASE("batch report csv") {
    BatchReport r;
    r.rows.push_back({"flocking", 2, 0.0, 0.5, 0.1, 0.01, 3.0, 0.3, 10.0, 1.0});
    const std::string csv = batch_report_csv(r);
    CHECK(csv.rfind(std::string(kBatchCsvHeader) + "\n", 0) == 0);
    CHECK(csv.find("flocking,2,0,0.5,0.1,0.01,3,0.3,10,1") != std::string::npos);
}
