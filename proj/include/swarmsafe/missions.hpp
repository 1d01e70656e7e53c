#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "swarmsafe/flowfield.hpp"
#include "swarmsafe/metrics.hpp"
#include "swarmsafe/policies.hpp"
#include "swarmsafe/simulator.hpp"

namespace swarmsafe {

/// Everything needed to generate and evaluate a set of paired missions.
struct BatchSpec {
    std::string id{"desk"};
    int missions{50};
    std::uint64_t seed{1};
    /// Flow the agents are advected by.
    std::string sim_flow{"double-gyre:0.159154943,0.25,1.45444104e-05"};
    /// Flow the value-grid planner sees; empty means the simulation flow.
    std::string plan_flow;
    Domain domain{0.0, 0.0, 80000.0, 40000.0};
    std::vector<PolicyKind> policies{PolicyKind::baseline_perf_only, PolicyKind::reactive, PolicyKind::lisic_flocking};
    PerfKind perf{PerfKind::valuegrid};
    SimConfig config{desk_config()};
    double replan_hours{24.0};
    std::size_t grid_nodes{100};
    /// Accepted time-to-reach window from the swarm centroid, as fractions of the timeout.
    double feasibility_lo{0.5};
    double feasibility_hi{1.0};
    /// Radius of the start disc as a fraction of r_com.
    double spread_fraction{0.4};
    /// Start times are drawn uniformly from [0, start_time_span).
    double start_time_span{5.0 * 86400.0};
    /// Parallel missions; 0 means hardware concurrency.
    int workers{0};

    static SimConfig desk_config();
    /// Throws ConfigError when an invariant is violated.
    void validate() const;
};

/// Deterministic, platform-independent uniform sampler on top of mt19937_64.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

/// Why a candidate start configuration was rejected.
enum class Rejection { placement, disconnected, collision, out_of_bounds, unreachable, too_fast, too_slow };
std::string to_string(Rejection r);

/// Checks the mission invariants: connected raw graph, every pair farther
/// than r_coll, starts inside `domain`. Returns the first violation.
std::optional<Rejection> check_mission(const MissionSpec& m, const SimConfig& cfg, const Domain& domain);

/// Time-to-reach of a single agent at `q` on a value grid (bilinear in node
/// values); +inf when any enclosing node is unreachable or q is off-grid.
double time_to_reach(const ValueGrid& grid, const Vec2& q);

/// Rejection sampling of connected, collision-free, feasible missions.
/// Throws SamplingError naming the rejection histogram when 10,000
/// consecutive candidates fail for one mission.
std::vector<MissionSpec> generate_missions(const BatchSpec& batch, std::uint64_t rng_seed);

struct MissionOutcome {
    int mission_id{0};
    std::string policy;
    Termination termination{Termination::timeout};
    std::string message;
    std::optional<MetricsReport> metrics;  ///< empty when the run aborted
};

struct BatchResult {
    std::vector<MissionSpec> missions;
    std::vector<MissionOutcome> outcomes;  ///< mission-major, policies in spec order
    BatchReport report;
};

/// Simulates every (mission x policy) pair on identical missions and flows and
/// aggregates the metrics. When `out_dir` is given, writes missions.json,
/// per-mission logs and the batch reports there. Throws Error if every run
/// aborted.
BatchResult run_batch(const BatchSpec& batch, const std::optional<std::filesystem::path>& out_dir = std::nullopt);

/// Directory name of one mission inside a batch output directory.
std::string mission_dir_name(int mission_id);

} // namespace swarmsafe
