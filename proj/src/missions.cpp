#include "swarmsafe/missions.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

#include "swarmsafe/commgraph.hpp"
#include "swarmsafe/kernels.hpp"
#include "swarmsafe/serialization.hpp"

namespace swarmsafe {

SimConfig BatchSpec::desk_config() {
    SimConfig c;
    c.n_agents = 10;
    c.timeout = 48.0 * 3600.0;
    return c;
}

void BatchSpec::validate() const {
    validate_config(config);
    if (missions < 1) throw ConfigError("missions must be at least 1");
    if (policies.empty()) throw ConfigError("at least one policy is required");
    if (!(domain.width > 0.0 && domain.height > 0.0)) throw ConfigError("domain must have positive extent");
    if (!(replan_hours > 0.0)) throw ConfigError("replan_hours must be positive");
    if (grid_nodes < 3) throw ConfigError("grid_nodes must be at least 3");
    if (!(feasibility_lo >= 0.0 && feasibility_lo < feasibility_hi))
        throw ConfigError("feasibility window must satisfy 0 <= lo < hi");
    if (!(spread_fraction > 0.0)) throw ConfigError("spread_fraction must be positive");
    if (!(start_time_span >= 0.0)) throw ConfigError("start_time_span must be non-negative");
    if (workers < 0) throw ConfigError("workers must be non-negative");
    if (2.0 * (config.target_radius + spread_fraction * config.r_com) > std::min(domain.width, domain.height))
        throw ConfigError("domain is too small for the target and start disc");
}

std::string to_string(Rejection r) {
    switch (r) {
    case Rejection::placement: return "placement";
    case Rejection::disconnected: return "disconnected";
    case Rejection::collision: return "collision";
    case Rejection::out_of_bounds: return "out_of_bounds";
    case Rejection::unreachable: return "unreachable";
    case Rejection::too_fast: return "too_fast";
    case Rejection::too_slow: return "too_slow";
    }
    return "unknown";
}

std::optional<Rejection> check_mission(const MissionSpec& m, const SimConfig& cfg, const Domain& domain) {
    for (const auto& p : m.start_positions)
        if (!domain.contains(p)) return Rejection::out_of_bounds;
    const auto& q = m.start_positions;
    for (std::size_t i = 0; i < q.size(); ++i)
        for (std::size_t j = i + 1; j < q.size(); ++j)
            if (distance(q[i], q[j]) <= cfg.r_coll) return Rejection::collision;
    if (!is_connected(adjacency_from_positions(q, cfg.r_com))) return Rejection::disconnected;
    return std::nullopt;
}

double time_to_reach(const ValueGrid& grid, const Vec2& q) {
    const auto& s = grid.spec;
    if (!s.contains(q)) return std::numeric_limits<double>::infinity();
    const double fx = (q.x - s.x_min) / s.hx();
    const double fy = (q.y - s.y_min) / s.hy();
    const auto ix = std::min(static_cast<std::size_t>(fx), s.nx - 2);
    const auto iy = std::min(static_cast<std::size_t>(fy), s.ny - 2);
    const double tx = fx - static_cast<double>(ix);
    const double ty = fy - static_cast<double>(iy);
    const double v00 = grid.at(ix, iy), v10 = grid.at(ix + 1, iy);
    const double v01 = grid.at(ix, iy + 1), v11 = grid.at(ix + 1, iy + 1);
    if (!std::isfinite(v00) || !std::isfinite(v10) || !std::isfinite(v01) || !std::isfinite(v11))
        return std::numeric_limits<double>::infinity();
    return (1 - ty) * ((1 - tx) * v00 + tx * v10) + ty * ((1 - tx) * v01 + tx * v11);
}

namespace {

constexpr int kMaxRejections = 10000;
constexpr int kCentroidsPerGrid = 16;
constexpr int kPlacementAttempts = 2000;

// Agents uniform in a disc around `c`, pairwise farther than 2 r_coll.
std::optional<std::vector<Vec2>> place_agents(Rng& rng, const Vec2& c, double radius, const SimConfig& cfg) {
    std::vector<Vec2> pts;
    int attempts = 0;
    while (static_cast<int>(pts.size()) < cfg.n_agents) {
        if (++attempts > kPlacementAttempts) return std::nullopt;
        const double r = radius * std::sqrt(rng.uniform());
        const double a = 2.0 * M_PI * rng.uniform();
        const Vec2 p{c.x + r * std::cos(a), c.y + r * std::sin(a)};
        bool ok = true;
        for (const auto& q : pts)
            if (distance(p, q) <= 2.0 * cfg.r_coll) {
                ok = false;
                break;
            }
        if (ok) pts.push_back(p);
    }
    return pts;
}

std::string histogram(const std::map<Rejection, int>& h) {
    std::string out;
    for (const auto& [r, n] : h) out += (out.empty() ? "" : ", ") + to_string(r) + "=" + std::to_string(n);
    return out;
}

} // namespace

std::vector<MissionSpec> generate_missions(const BatchSpec& batch, std::uint64_t rng_seed) {
    batch.validate();
    const auto sim = parse_flow_spec(batch.sim_flow, batch.domain);
    const SimConfig& cfg = batch.config;
    const Domain& dom = batch.domain;
    const double spread = batch.spread_fraction * cfg.r_com;
    const double lo = batch.feasibility_lo * cfg.timeout;
    const double hi = batch.feasibility_hi * cfg.timeout;
    const GridSpec spec{dom.x0, dom.x1(), dom.y0, dom.y1(), batch.grid_nodes, batch.grid_nodes};

    Rng rng(rng_seed);
    std::vector<MissionSpec> out;
    for (int id = 0; id < batch.missions; ++id) {
        std::map<Rejection, int> rejected;
        int failures = 0;
        std::optional<MissionSpec> found;
        while (!found) {
            if (failures >= kMaxRejections)
                throw SamplingError("mission " + std::to_string(id) + ": " + std::to_string(kMaxRejections) +
                                    " consecutive candidates rejected (" + histogram(rejected) + ")");
            MissionSpec m;
            m.id = id;
            m.timeout = cfg.timeout;
            m.start_time = rng.uniform(0.0, batch.start_time_span);
            m.target.radius = cfg.target_radius;
            m.target.center = {rng.uniform(dom.x0 + cfg.target_radius, dom.x1() - cfg.target_radius),
                               rng.uniform(dom.y0 + cfg.target_radius, dom.y1() - cfg.target_radius)};
            const ValueGrid grid = compute_value_grid(*sim, m.start_time, m.target, spec, cfg.u_max);
            for (int c = 0; c < kCentroidsPerGrid && !found && failures < kMaxRejections; ++c) {
                const Vec2 centroid{rng.uniform(dom.x0 + spread, dom.x1() - spread),
                                    rng.uniform(dom.y0 + spread, dom.y1() - spread)};
                const double ttr = time_to_reach(grid, centroid);
                std::optional<Rejection> why;
                if (!std::isfinite(ttr)) why = Rejection::unreachable;
                else if (ttr < lo) why = Rejection::too_fast;
                else if (ttr > hi) why = Rejection::too_slow;
                if (!why) {
                    if (auto pts = place_agents(rng, centroid, spread, cfg)) {
                        m.start_positions = std::move(*pts);
                        why = check_mission(m, cfg, dom);
                    } else {
                        why = Rejection::placement;
                    }
                }
                if (why) {
                    ++rejected[*why];
                    ++failures;
                } else {
                    m.seed = rng.next();
                    found = m;
                }
            }
        }
        out.push_back(std::move(*found));
    }
    return out;
}

std::string mission_dir_name(int mission_id) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "mission_%04d", mission_id);
    return buf;
}

BatchResult run_batch(const BatchSpec& batch, const std::optional<std::filesystem::path>& out_dir) {
    batch.validate();
    BatchResult result;
    result.missions = generate_missions(batch, batch.seed);
    const auto sim = parse_flow_spec(batch.sim_flow, batch.domain);
    const auto plan = batch.plan_flow.empty() ? sim : parse_flow_spec(batch.plan_flow, batch.domain);
    if (out_dir) write_json_file(*out_dir / "missions.json", missions_to_json(result.missions));

    RunOptions base;
    base.perf = batch.perf;
    base.replan_interval = batch.replan_hours * 3600.0;
    base.grid_nodes = batch.grid_nodes;

    const std::size_t n_pol = batch.policies.size();
    const std::size_t jobs = result.missions.size() * n_pol;
    result.outcomes.resize(jobs);
    (void)kernels::active();  // resolve the backend before workers start

    std::atomic<std::size_t> next{0};
    std::mutex io_mutex;
    std::exception_ptr io_failure;
    auto worker = [&] {
        for (std::size_t k = next++; k < jobs; k = next++) {
            const MissionSpec& m = result.missions[k / n_pol];
            RunOptions opt = base;
            opt.policy = batch.policies[k % n_pol];
            MissionOutcome& o = result.outcomes[k];
            o.mission_id = m.id;
            o.policy = cli_name(opt.policy);
            try {
                const MissionLog log = run_mission(m, opt, *sim, *plan, batch.config);
                o.termination = log.termination;
                o.message = log.message;
                if (log.termination != Termination::aborted && !log.steps.empty())
                    o.metrics = compute_metrics(log, batch.config.r_coll, batch.config.r_com, m.target);
                if (out_dir) write_mission_log(log, *out_dir / mission_dir_name(m.id), o.policy);
            } catch (const IoError&) {
                std::lock_guard lock(io_mutex);
                if (!io_failure) io_failure = std::current_exception();
            } catch (const Error& e) {
                o.termination = Termination::aborted;
                o.message = e.what();
            }
        }
    };
    unsigned n_workers = batch.workers > 0 ? static_cast<unsigned>(batch.workers) : std::thread::hardware_concurrency();
    n_workers = std::max(1u, std::min<unsigned>(n_workers, static_cast<unsigned>(jobs)));
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    }
    if (io_failure) std::rethrow_exception(io_failure);

    std::vector<std::pair<std::string, MetricsReport>> reports;
    for (const auto& o : result.outcomes)
        if (o.metrics) reports.emplace_back(o.policy, *o.metrics);
    if (reports.empty()) throw Error("every run of batch '" + batch.id + "' aborted");
    result.report = aggregate_batch(reports);

    if (out_dir) {
        write_text_file(*out_dir / "batch_report.csv", batch_report_csv(result.report));
        write_json_file(*out_dir / "batch_report.json", batch_report_json(batch.id, result));
    }
    return result;
}

} // namespace swarmsafe
