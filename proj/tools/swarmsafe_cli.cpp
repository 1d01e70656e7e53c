// swarmsafe: single missions, batches, mission generation and report emission.
// Exit codes: 0 ok, 2 configuration, 3 I/O, 4 simulation abort.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "swarmsafe/kernels.hpp"
#include "swarmsafe/metrics.hpp"
#include "swarmsafe/missions.hpp"
#include "swarmsafe/serialization.hpp"
#include "swarmsafe/simulator.hpp"

namespace fs = std::filesystem;
using namespace swarmsafe;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitAbort = 4;

struct ConfigOverrides {
    std::optional<int> n_agents;
    std::optional<double> u_max, r_com, r_coll, epsilon, kappa, rho, dt, timeout_hours, target_radius;
    std::optional<std::string> integrator;

    void add_to(CLI::App* app) {
        app->add_option("--n-agents", n_agents, "Number of agents");
        app->add_option("--u-max", u_max, "Maximum thrust speed [m/s]");
        app->add_option("--r-com", r_com, "Communication radius [m]");
        app->add_option("--r-coll", r_coll, "Collision radius [m]");
        app->add_option("--epsilon", epsilon, "Hysteresis band width [m]");
        app->add_option("--kappa", kappa, "Potential scale");
        app->add_option("--rho", rho, "LISIC blend offset");
        app->add_option("--dt", dt, "Control and integration step [s]");
        app->add_option("--timeout-hours", timeout_hours, "Mission timeout [h]");
        app->add_option("--target-radius", target_radius, "Target disc radius [m]");
        app->add_option("--integrator", integrator, "euler | rk4");
    }

    void apply(SimConfig& c) const {
        if (n_agents) c.n_agents = *n_agents;
        if (u_max) c.u_max = *u_max;
        if (r_com) c.r_com = *r_com;
        if (r_coll) c.r_coll = *r_coll;
        if (epsilon) c.epsilon = *epsilon;
        if (kappa) c.kappa = *kappa;
        if (rho) c.rho = *rho;
        if (dt) c.dt = *dt;
        if (timeout_hours) c.timeout = *timeout_hours * 3600.0;
        if (target_radius) c.target_radius = *target_radius;
        if (integrator) c.integrator = integrator_from_string(*integrator);
    }
};

Vec2 parse_point(const std::string& s, const char* what) {
    double x = 0, y = 0;
    char tail = 0;
    if (std::sscanf(s.c_str(), "%lf,%lf%c", &x, &y, &tail) != 2)
        throw ConfigError(std::string(what) + " must be X,Y, got '" + s + "'");
    return {x, y};
}

Domain parse_domain(const std::string& s) {
    Domain d;
    char tail = 0;
    if (std::sscanf(s.c_str(), "%lf,%lf,%lf,%lf%c", &d.x0, &d.y0, &d.width, &d.height, &tail) != 4)
        throw ConfigError("--domain must be X0,Y0,WIDTH,HEIGHT, got '" + s + "'");
    return d;
}

struct RunArgs {
    std::string config_path, mission_path, target, start, domain{"0,0,80000,40000"};
    std::size_t mission_index{0};
    std::string policy{"flocking"}, perf{"valuegrid"}, flow{"zero"}, plan_flow;
    double replan_hours{24.0};
    std::string out{"out/run"};
    ConfigOverrides overrides;
};

int cmd_run(const RunArgs& a) {
    SimConfig cfg = a.config_path.empty() ? SimConfig{} : config_from_json(read_json_file(a.config_path));
    a.overrides.apply(cfg);
    validate_config(cfg);
    const Domain domain = parse_domain(a.domain);

    MissionSpec mission;
    if (!a.mission_path.empty()) {
        const auto all = missions_from_json(read_json_file(a.mission_path));
        if (a.mission_index >= all.size())
            throw ConfigError(fmt::format("--mission-index {} out of range ({} missions)", a.mission_index, all.size()));
        mission = all[a.mission_index];
        if (a.overrides.timeout_hours) mission.timeout = cfg.timeout;
    } else {
        if (a.target.empty() || a.start.empty())
            throw ConfigError("either --mission or both --target and --start are required");
        // Regular polygon of radius r_com / 4 around the start point.
        const Vec2 c = parse_point(a.start, "--start");
        const double r = 0.25 * cfg.r_com;
        for (int i = 0; i < cfg.n_agents; ++i) {
            const double phi = 2.0 * M_PI * i / cfg.n_agents;
            mission.start_positions.push_back({c.x + r * std::cos(phi), c.y + r * std::sin(phi)});
        }
        mission.target = {parse_point(a.target, "--target"), cfg.target_radius};
        mission.timeout = cfg.timeout;
    }
    if (static_cast<int>(mission.start_positions.size()) != cfg.n_agents) cfg.n_agents = static_cast<int>(mission.start_positions.size());

    const auto sim = parse_flow_spec(a.flow, domain);
    const auto plan = a.plan_flow.empty() ? sim : parse_flow_spec(a.plan_flow, domain);
    RunOptions opt;
    opt.policy = policy_from_string(a.policy);
    opt.perf = perf_from_string(a.perf);
    if (!(a.replan_hours > 0.0)) throw ConfigError("--replan-hours must be positive");
    opt.replan_interval = a.replan_hours * 3600.0;

    const MissionLog log = run_mission(mission, opt, *sim, *plan, cfg);
    const std::string stem = cli_name(opt.policy);
    write_mission_log(log, a.out, stem);
    std::cout << fmt::format("mission {} policy {}: {} after {} steps ({})\n", mission.id, stem,
                             to_string(log.termination), log.steps.size(), (fs::path(a.out) / (stem + ".csv")).string());
    if (log.termination == Termination::aborted) {
        std::cerr << "simulation aborted: " << log.message << "\n";
        return kExitAbort;
    }
    if (!log.steps.empty()) {
        const auto m = compute_metrics(log, cfg.r_coll, cfg.r_com, mission.target);
        std::cout << fmt::format("collision {} disconnection {} lambda2_min {} ipm {} d_min {}\n",
                                 m.collision_indicator, m.disconnection_indicator, fmt_sig9(m.lambda2_min),
                                 fmt_sig9(m.ipm), fmt_sig9(m.d_min_target));
    }
    return 0;
}

struct BatchArgs {
    std::string spec_path, out{"out"}, flow, plan_flow, perf;
    std::optional<std::uint64_t> seed;
    std::optional<int> missions, workers;
    std::optional<double> replan_hours;
    ConfigOverrides overrides;
};

BatchSpec load_batch(const BatchArgs& a) {
    BatchSpec b = a.spec_path.empty() ? BatchSpec{} : batch_spec_from_json(read_json_file(a.spec_path));
    if (a.seed) b.seed = *a.seed;
    if (a.missions) b.missions = *a.missions;
    if (a.workers) b.workers = *a.workers;
    if (!a.flow.empty()) b.sim_flow = a.flow;
    if (!a.plan_flow.empty()) b.plan_flow = a.plan_flow;
    if (!a.perf.empty()) b.perf = perf_from_string(a.perf);
    if (a.replan_hours) b.replan_hours = *a.replan_hours;
    a.overrides.apply(b.config);
    b.validate();
    return b;
}

void print_report(const BatchReport& r) {
    std::cout << kBatchCsvHeader << "\n" << batch_report_csv(r).substr(std::string(kBatchCsvHeader).size() + 1);
    for (const auto& c : r.comparisons)
        std::cout << fmt::format("{:<14} {:<28} {} = {}  log10 p = {}\n", c.metric, c.alternative,
                                 c.test == "welch_t" ? "t" : "z", fmt_sig9(c.statistic), fmt_sig9(c.log10_p));
}

int cmd_batch(const BatchArgs& a) {
    const BatchSpec b = load_batch(a);
    const fs::path dir = fs::path(a.out) / b.id;
    const BatchResult result = run_batch(b, dir);
    int aborted = 0;
    for (const auto& o : result.outcomes)
        if (!o.metrics) {
            ++aborted;
            std::cerr << fmt::format("mission {} policy {} aborted: {}\n", o.mission_id, o.policy, o.message);
        }
    print_report(result.report);
    std::cout << "wrote " << (dir / "batch_report.csv").string() << "\n";
    return aborted ? kExitAbort : 0;
}

int cmd_gen_missions(const BatchArgs& a, const std::string& out_file) {
    const BatchSpec b = load_batch(a);
    const auto missions = generate_missions(b, b.seed);
    write_json_file(out_file, missions_to_json(missions));
    std::cout << fmt::format("wrote {} missions to {}\n", missions.size(), out_file);
    return 0;
}

int cmd_report(const std::string& in_dir, const std::string& batch_id) {
    const fs::path dir(in_dir);
    const auto missions = missions_from_json(read_json_file(dir / "missions.json"));
    std::vector<std::pair<std::string, MetricsReport>> reports;
    BatchResult result;
    result.missions = missions;
    for (const auto& m : missions) {
        const fs::path mdir = dir / mission_dir_name(m.id);
        for (const char* policy : {"baseline", "reactive", "flocking"}) {
            if (!fs::exists(mdir / (std::string(policy) + ".json"))) continue;
            const MissionLog log = read_mission_log(mdir, policy);
            MissionOutcome o{m.id, policy, log.termination, log.message, std::nullopt};
            if (log.termination != Termination::aborted && !log.steps.empty()) {
                o.metrics = compute_metrics(log, log.config.r_coll, log.config.r_com, m.target);
                reports.emplace_back(policy, *o.metrics);
            }
            result.outcomes.push_back(o);
        }
    }
    if (reports.empty()) throw IoError("no completed mission logs under '" + dir.string() + "'");
    result.report = aggregate_batch(reports);
    write_text_file(dir / "batch_report.csv", batch_report_csv(result.report));
    write_json_file(dir / "batch_report.json", batch_report_json(batch_id, result));
    print_report(result.report);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Safe-interaction swarm control in flow fields", "swarmsafe"};
    app.require_subcommand(1);
    std::string kernels_choice{"auto"};
    app.add_option("--kernels", kernels_choice, "Pairwise kernel backend: auto | scalar | avx2")
        ->check(CLI::IsMember({"auto", "scalar", "avx2"}));

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "Simulate one mission and write its CSV and JSON log");
    run_cmd->add_option("--config", run.config_path, "SimConfig JSON file");
    run_cmd->add_option("--mission", run.mission_path, "Mission JSON file (object or array)");
    run_cmd->add_option("--mission-index", run.mission_index, "Index into an array mission file");
    run_cmd->add_option("--target", run.target, "Inline mission: target center X,Y [m]");
    run_cmd->add_option("--start", run.start, "Inline mission: start formation center X,Y [m]");
    run_cmd->add_option("--policy", run.policy, "baseline | reactive | flocking")
        ->check(CLI::IsMember({"baseline", "reactive", "flocking"}));
    run_cmd->add_option("--perf", run.perf, "naive | valuegrid")->check(CLI::IsMember({"naive", "valuegrid"}));
    run_cmd->add_option("--flow", run.flow, "Simulation flow spec");
    run_cmd->add_option("--plan-flow", run.plan_flow, "Planner flow spec (default: simulation flow)");
    run_cmd->add_option("--domain", run.domain, "Analytic flow domain X0,Y0,WIDTH,HEIGHT [m]");
    run_cmd->add_option("--replan-hours", run.replan_hours, "Value-grid replanning interval [h]");
    run_cmd->add_option("--out", run.out, "Output directory");
    run.overrides.add_to(run_cmd);

    BatchArgs batch;
    auto* batch_cmd = app.add_subcommand("batch", "Generate paired missions, simulate every policy, write reports");
    auto add_batch_flags = [](CLI::App* cmd, BatchArgs& b) {
        cmd->add_option("--spec", b.spec_path, "Batch spec JSON file");
        cmd->add_option("--seed", b.seed, "Mission generation seed");
        cmd->add_option("--missions", b.missions, "Number of missions");
        cmd->add_option("--flow", b.flow, "Simulation flow spec");
        cmd->add_option("--plan-flow", b.plan_flow, "Planner flow spec");
        cmd->add_option("--perf", b.perf, "naive | valuegrid")->check(CLI::IsMember({"naive", "valuegrid"}));
        cmd->add_option("--replan-hours", b.replan_hours, "Value-grid replanning interval [h]");
        b.overrides.add_to(cmd);
    };
    add_batch_flags(batch_cmd, batch);
    batch_cmd->add_option("--workers", batch.workers, "Parallel missions (default: available parallelism)");
    batch_cmd->add_option("--out", batch.out, "Output root; results go to OUT/<batch id>");

    BatchArgs gen;
    std::string gen_out{"missions.json"};
    auto* gen_cmd = app.add_subcommand("gen-missions", "Sample feasible missions and write them as JSON");
    add_batch_flags(gen_cmd, gen);
    gen_cmd->add_option("--out", gen_out, "Output mission file");

    std::string report_in, report_id{"report"};
    auto* report_cmd = app.add_subcommand("report", "Recompute batch reports from mission logs in a batch directory");
    report_cmd->add_option("--in", report_in, "Batch output directory")->required();
    report_cmd->add_option("--batch-id", report_id, "Identifier written into batch_report.json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (kernels_choice != "auto")
            kernels::select(kernels_choice == "avx2" ? kernels::Backend::avx2 : kernels::Backend::scalar);
        if (*run_cmd) return cmd_run(run);
        if (*batch_cmd) return cmd_batch(batch);
        if (*gen_cmd) return cmd_gen_missions(gen, gen_out);
        if (*report_cmd) return cmd_report(report_in, report_id);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const SamplingError& e) {
        std::cerr << "mission sampling failed: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        std::cerr << "simulation aborted: " << e.what() << "\n";
        return kExitAbort;
    }
    return 0;
}
