#include "swarmsafe/serialization.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace swarmsafe {

namespace {

void reject_unknown(const Json& j, std::initializer_list<const char*> known, const char* what) {
    if (!j.is_object()) throw ConfigError(std::string(what) + " must be a JSON object");
    std::set<std::string> allowed(known.begin(), known.end());
    for (const auto& item : j.items())
        if (!allowed.count(item.key())) throw ConfigError(std::string(what) + " has unknown field '" + item.key() + "'");
}

template <class T>
T get_field(const Json& j, const char* key, const char* what) {
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(std::string(what) + " field '" + key + "' is missing or has the wrong type");
    }
}

template <class T>
void maybe(const Json& j, const char* key, T& out, const char* what) {
    if (j.contains(key)) out = get_field<T>(j, key, what);
}

Json vec_json(const Vec2& v) { return Json::array({v.x, v.y}); }

Vec2 vec_from(const Json& j, const char* what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ConfigError(std::string(what) + " must be a [x, y] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

Json num(double v) {
    if (!std::isfinite(v)) return nullptr;
    return round_sig9(v);
}

} // namespace

Json config_to_json(const SimConfig& c) {
    Json j;
    j["n_agents"] = c.n_agents;
    j["u_max"] = c.u_max;
    j["r_com"] = c.r_com;
    j["r_coll"] = c.r_coll;
    j["epsilon"] = c.epsilon;
    j["kappa"] = c.kappa;
    j["psi_length_unit"] = c.psi_length_unit;
    j["rho"] = c.rho;
    j["dt"] = c.dt;
    j["timeout"] = c.timeout;
    j["target_radius"] = c.target_radius;
    j["integrator"] = to_string(c.integrator);
    return j;
}

SimConfig config_from_json(const Json& j, const SimConfig& base) {
    constexpr const char* what = "config";
    reject_unknown(j,
                   {"n_agents", "u_max", "r_com", "r_coll", "epsilon", "kappa", "psi_length_unit", "rho", "dt", "timeout",
                    "target_radius", "integrator"},
                   what);
    SimConfig c = base;
    maybe(j, "n_agents", c.n_agents, what);
    maybe(j, "u_max", c.u_max, what);
    maybe(j, "r_com", c.r_com, what);
    maybe(j, "r_coll", c.r_coll, what);
    maybe(j, "epsilon", c.epsilon, what);
    maybe(j, "kappa", c.kappa, what);
    maybe(j, "psi_length_unit", c.psi_length_unit, what);
    maybe(j, "rho", c.rho, what);
    maybe(j, "dt", c.dt, what);
    maybe(j, "timeout", c.timeout, what);
    maybe(j, "target_radius", c.target_radius, what);
    if (j.contains("integrator")) c.integrator = integrator_from_string(get_field<std::string>(j, "integrator", what));
    return c;
}

Json mission_to_json(const MissionSpec& m) {
    Json j;
    j["id"] = m.id;
    j["seed"] = m.seed;
    j["start_time"] = m.start_time;
    j["timeout"] = m.timeout;
    j["target"] = {{"center", vec_json(m.target.center)}, {"radius", m.target.radius}};
    Json starts = Json::array();
    for (const auto& p : m.start_positions) starts.push_back(vec_json(p));
    j["start_positions"] = starts;
    return j;
}

MissionSpec mission_from_json(const Json& j) {
    constexpr const char* what = "mission";
    reject_unknown(j, {"id", "seed", "start_time", "timeout", "target", "start_positions"}, what);
    MissionSpec m;
    m.id = get_field<int>(j, "id", what);
    maybe(j, "seed", m.seed, what);
    maybe(j, "start_time", m.start_time, what);
    m.timeout = get_field<double>(j, "timeout", what);
    const Json& t = j.at("target");
    reject_unknown(t, {"center", "radius"}, "mission target");
    m.target.center = vec_from(t.at("center"), "target center");
    m.target.radius = get_field<double>(t, "radius", "mission target");
    if (!(m.target.radius > 0.0)) throw ConfigError("target radius must be positive");
    if (!j.contains("start_positions") || !j["start_positions"].is_array())
        throw ConfigError("mission field 'start_positions' must be an array");
    for (const auto& p : j["start_positions"]) m.start_positions.push_back(vec_from(p, "start position"));
    return m;
}

Json missions_to_json(const std::vector<MissionSpec>& ms) {
    Json a = Json::array();
    for (const auto& m : ms) a.push_back(mission_to_json(m));
    return a;
}

std::vector<MissionSpec> missions_from_json(const Json& j) {
    if (j.is_object()) return {mission_from_json(j)};
    if (!j.is_array()) throw ConfigError("missions file must hold a mission object or an array of missions");
    std::vector<MissionSpec> out;
    for (const auto& m : j) out.push_back(mission_from_json(m));
    return out;
}

Json batch_spec_to_json(const BatchSpec& b) {
    Json j;
    j["id"] = b.id;
    j["missions"] = b.missions;
    j["seed"] = b.seed;
    j["sim_flow"] = b.sim_flow;
    j["plan_flow"] = b.plan_flow;
    j["domain"] = {{"x0", b.domain.x0}, {"y0", b.domain.y0}, {"width", b.domain.width}, {"height", b.domain.height}};
    Json policies = Json::array();
    for (auto p : b.policies) policies.push_back(cli_name(p));
    j["policies"] = policies;
    j["perf"] = to_string(b.perf);
    j["config"] = config_to_json(b.config);
    j["replan_hours"] = b.replan_hours;
    j["grid_nodes"] = b.grid_nodes;
    j["feasibility_window"] = Json::array({b.feasibility_lo, b.feasibility_hi});
    j["spread_fraction"] = b.spread_fraction;
    j["start_time_span"] = b.start_time_span;
    j["workers"] = b.workers;
    return j;
}

BatchSpec batch_spec_from_json(const Json& j) {
    constexpr const char* what = "batch spec";
    reject_unknown(j,
                   {"id", "missions", "seed", "sim_flow", "plan_flow", "domain", "policies", "perf", "config",
                    "replan_hours", "grid_nodes", "feasibility_window", "spread_fraction", "start_time_span",
                    "workers"},
                   what);
    BatchSpec b;
    maybe(j, "id", b.id, what);
    maybe(j, "missions", b.missions, what);
    maybe(j, "seed", b.seed, what);
    maybe(j, "sim_flow", b.sim_flow, what);
    maybe(j, "plan_flow", b.plan_flow, what);
    if (j.contains("domain")) {
        const Json& d = j["domain"];
        reject_unknown(d, {"x0", "y0", "width", "height"}, "batch domain");
        b.domain = {get_field<double>(d, "x0", "batch domain"), get_field<double>(d, "y0", "batch domain"),
                    get_field<double>(d, "width", "batch domain"), get_field<double>(d, "height", "batch domain")};
    }
    if (j.contains("policies")) {
        b.policies.clear();
        for (const auto& p : j["policies"]) {
            if (!p.is_string()) throw ConfigError("batch spec 'policies' must hold strings");
            b.policies.push_back(policy_from_string(p.get<std::string>()));
        }
    }
    if (j.contains("perf")) b.perf = perf_from_string(get_field<std::string>(j, "perf", what));
    if (j.contains("config")) b.config = config_from_json(j["config"], BatchSpec::desk_config());
    maybe(j, "replan_hours", b.replan_hours, what);
    maybe(j, "grid_nodes", b.grid_nodes, what);
    if (j.contains("feasibility_window")) {
        const auto w = get_field<std::vector<double>>(j, "feasibility_window", what);
        if (w.size() != 2) throw ConfigError("feasibility_window must be [lo, hi]");
        b.feasibility_lo = w[0];
        b.feasibility_hi = w[1];
    }
    maybe(j, "spread_fraction", b.spread_fraction, what);
    maybe(j, "start_time_span", b.start_time_span, what);
    maybe(j, "workers", b.workers, what);
    b.validate();
    return b;
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

void write_json_file(const std::filesystem::path& path, const Json& j) { write_text_file(path, j.dump(2) + "\n"); }

// ---------------------------------------------------------------------------
// Mission logs

std::string mission_log_csv(const MissionLog& log) {
    std::string out = std::string(kLogCsvHeader) + "\n";
    for (std::size_t k = 0; k < log.steps.size(); ++k) {
        const auto& s = log.steps[k];
        for (std::size_t i = 0; i < s.positions.size(); ++i) {
            out += std::to_string(k + 1);
            out += ',' + fmt_sig9(s.time);
            out += ',' + std::to_string(i);
            out += ',' + fmt_sig9(s.positions[i].x);
            out += ',' + fmt_sig9(s.positions[i].y);
            out += ',' + fmt_sig9(s.controls[i].vector.x);
            out += ',' + fmt_sig9(s.controls[i].vector.y);
            out += ',' + std::to_string(s.adjacency.size() ? s.adjacency.degree(i) : 0);
            out += ',' + std::to_string(s.flags.size() ? s.flags[i] : 0);
            out += '\n';
        }
    }
    return out;
}

Json mission_log_json(const MissionLog& log) {
    Json j;
    j["mission_id"] = log.mission_id;
    j["policy"] = log.policy;
    j["perf"] = log.perf;
    j["config"] = config_to_json(log.config);
    j["mission"] = mission_to_json(log.mission);
    j["termination"] = to_string(log.termination);
    j["message"] = log.message;
    j["steps"] = log.steps.size();
    j["initial_tension"] = num(log.initial_tension);
    Json time = Json::array(), tension = Json::array(), lambda2 = Json::array(), dmin = Json::array(),
         sigma_edges = Json::array(), added = Json::array(), removed = Json::array(), jump = Json::array(),
         residual = Json::array(), violations = Json::array();
    for (const auto& s : log.steps) {
        time.push_back(num(s.time));
        tension.push_back(num(s.tension));
        lambda2.push_back(num(s.lambda2));
        dmin.push_back(num(s.min_pair_distance));
        sigma_edges.push_back(s.sigma.edge_count());
        added.push_back(s.edges_added);
        removed.push_back(s.edges_removed);
        jump.push_back(num(s.switch_jump_bound));
        double worst = -std::numeric_limits<double>::infinity();
        int count = 0;
        for (double r : s.residuals) {
            worst = std::max(worst, r);
            count += r > 0.0 ? 1 : 0;
        }
        residual.push_back(num(worst));
        violations.push_back(count);
    }
    j["time"] = time;
    j["tension"] = tension;
    j["lambda2"] = lambda2;
    j["min_pair_distance"] = dmin;
    j["sigma_edges"] = sigma_edges;
    j["edges_added"] = added;
    j["edges_removed"] = removed;
    j["switch_jump_bound"] = jump;
    j["max_condition_residual"] = residual;
    j["condition_violations"] = violations;
    return j;
}

void write_mission_log(const MissionLog& log, const std::filesystem::path& dir, const std::string& stem) {
    write_text_file(dir / (stem + ".csv"), mission_log_csv(log));
    write_json_file(dir / (stem + ".json"), mission_log_json(log));
}

MissionLog read_mission_log(const std::filesystem::path& dir, const std::string& stem) {
    const Json j = read_json_file(dir / (stem + ".json"));
    MissionLog log;
    try {
        log.mission_id = j.at("mission_id").get<int>();
        log.policy = j.at("policy").get<std::string>();
        log.perf = j.at("perf").get<std::string>();
        log.config = config_from_json(j.at("config"));
        log.mission = mission_from_json(j.at("mission"));
        log.termination = termination_from_string(j.at("termination").get<std::string>());
        log.message = j.at("message").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("mission log '" + (dir / (stem + ".json")).string() + "' is malformed: " + e.what());
    }
    log.initial_positions = log.mission.start_positions;

    const auto csv_path = dir / (stem + ".csv");
    std::ifstream in(csv_path);
    if (!in) throw IoError("cannot open '" + csv_path.string() + "'");
    std::string line;
    std::getline(in, line);
    if (line != kLogCsvHeader) throw ConfigError("'" + csv_path.string() + "' has an unexpected header");
    const std::size_t n = log.mission.start_positions.size();
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        std::size_t step = 0, agent = 0, deg = 0;
        int flags = 0;
        double time = 0, x = 0, y = 0, ux = 0, uy = 0;
        if (!(fields >> step >> time >> agent >> x >> y >> ux >> uy >> deg >> flags) || agent >= n || step == 0)
            throw ConfigError("'" + csv_path.string() + "' line " + std::to_string(lineno) + " is malformed");
        if (log.steps.size() < step) {
            StepRecord rec;
            rec.time = time;
            rec.positions.resize(n);
            rec.controls.resize(n);
            rec.flags.assign(n, 0);
            log.steps.push_back(std::move(rec));
        }
        auto& rec = log.steps[step - 1];
        rec.positions[agent] = {x, y};
        rec.controls[agent] = {{ux, uy}};
        rec.flags[agent] = static_cast<std::uint8_t>(flags);
    }
    return log;
}

// ---------------------------------------------------------------------------
// Batch reports

std::string batch_report_csv(const BatchReport& r) {
    std::string out = std::string(kBatchCsvHeader) + "\n";
    for (const auto& row : r.rows) {
        out += row.policy + ',' + std::to_string(row.missions) + ',' + fmt_sig9(row.collision_rate) + ',' +
               fmt_sig9(row.disconnection_rate) + ',' + fmt_sig9(row.mean_ipm) + ',' + fmt_sig9(row.sd_ipm) + ',' +
               fmt_sig9(row.mean_lambda2_min) + ',' + fmt_sig9(row.sd_lambda2_min) + ',' + fmt_sig9(row.mean_d_min) +
               ',' + fmt_sig9(row.sd_d_min) + '\n';
    }
    return out;
}

Json batch_report_json(const std::string& batch_id, const BatchResult& result) {
    Json j;
    j["batch_id"] = batch_id;
    Json rows = Json::array();
    for (const auto& row : result.report.rows) {
        rows.push_back({{"policy", row.policy},
                        {"missions", row.missions},
                        {"collision_rate", num(row.collision_rate)},
                        {"disconnection_rate", num(row.disconnection_rate)},
                        {"mean_ipm", num(row.mean_ipm)},
                        {"sd_ipm", num(row.sd_ipm)},
                        {"mean_lambda2_min", num(row.mean_lambda2_min)},
                        {"sd_lambda2_min", num(row.sd_lambda2_min)},
                        {"mean_d_min", num(row.mean_d_min)},
                        {"sd_d_min", num(row.sd_d_min)}});
    }
    j["rows"] = rows;
    Json tests = Json::array();
    for (const auto& c : result.report.comparisons) {
        Json t{{"policy_a", c.policy_a}, {"policy_b", c.policy_b}, {"metric", c.metric},
               {"alternative", c.alternative}, {"test", c.test}, {"statistic", num(c.statistic)}};
        if (c.test == "welch_t") t["df"] = num(c.df);
        t["log10_p"] = num(c.log10_p);
        if (c.test == "two_proportion_z") t["z"] = num(c.statistic);
        tests.push_back(t);
    }
    j["tests"] = tests;
    Json failures = Json::array();
    for (const auto& o : result.outcomes)
        if (!o.metrics)
            failures.push_back({{"mission_id", o.mission_id}, {"policy", o.policy}, {"message", o.message}});
    j["failures"] = failures;
    return j;
}

} // namespace swarmsafe
