#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swarmsafe/core.hpp"
#include "swarmsafe/flowfield.hpp"
#include "swarmsafe/lisic.hpp"
#include "swarmsafe/policies.hpp"
#include "swarmsafe/potential.hpp"

namespace swarmsafe {

/// One evaluation unit: where the swarm starts, when, and where it must go.
struct MissionSpec {
    int id{0};
    std::uint64_t seed{0};
    double start_time{0.0};
    std::vector<Vec2> start_positions;
    TargetDisc target;
    double timeout{0.0};

    bool operator==(const MissionSpec&) const = default;
};

enum class Termination { timeout, all_in_target, aborted };
std::string to_string(Termination t);
Termination termination_from_string(const std::string& s);

/// Bits of the per-agent `flags` column in mission logs.
enum StepFlag : std::uint8_t {
    kFlagCollision = 1,     ///< agent is closer than r_coll to another agent
    kFlagDisconnected = 2,  ///< raw communication graph is disconnected at this step
};

/// Post-step snapshot. `controls`, `weights` and `residuals` belong to the
/// step that produced this state; they were evaluated on the previous state.
struct StepRecord {
    double time{0.0};
    std::vector<Vec2> positions;
    std::vector<ControlInput> controls;
    std::vector<BlendWeights> weights;
    SigmaMatrix sigma;
    AdjacencyMatrix adjacency;
    std::vector<std::uint8_t> flags;
    bool collision{false};
    bool disconnected{false};
    double lambda2{0.0};
    double min_pair_distance{0.0};
    double tension{0.0};
    /// Residuals of the local energy-decrease condition, one per agent (<= 0 holds).
    std::vector<double> residuals;
    int edges_added{0};
    int edges_removed{0};
    /// Sum of connected-branch psi at the distance of every edge added this step.
    double switch_jump_bound{0.0};
};

struct MissionLog {
    int mission_id{0};
    std::string policy;
    std::string perf;
    SimConfig config;
    MissionSpec mission;
    std::vector<Vec2> initial_positions;
    double initial_tension{0.0};
    std::vector<StepRecord> steps;
    Termination termination{Termination::timeout};
    std::string message;
};

/// Options of a closed-loop run beyond the scalar config.
struct RunOptions {
    PolicyKind policy{PolicyKind::lisic_flocking};
    PerfKind perf{PerfKind::valuegrid};
    double replan_interval{24.0 * 3600.0};
    std::size_t grid_nodes{100};
    double grid_padding{0.2};
    double grad_cap{1e6};
    double zero_grad_tol{1e-12};
    /// Forces every agent's blend weights (flocking policy only); used to
    /// probe the energy condition with c2 = 0.
    std::optional<BlendWeights> forced_weights;
    /// Replaces the performance controller by a zero control.
    bool zero_perf{false};
};

/// Advances every agent by dt under q' = v(q, t) + u with u held constant,
/// then updates sigma on the new distances. Throws OutOfDomainError if the
/// flow cannot be sampled along the way.
SwarmState step(const SwarmState& state, std::span<const ControlInput> controls, const FlowField& field, double dt,
                Integrator integrator, const PotentialParams& hysteresis);

struct EnergyCondition {
    bool holds;
    double residual;  ///< |c2 u_perf_i + v_i - avg_{j != i}(v_j + u_j)| - c1 u_max
};

/// Local sufficient condition for dH_i/dt <= 0. `controls` are the applied
/// controls of all agents; the neighbor average runs over every other agent.
EnergyCondition energy_condition(std::span<const Vec2> positions, std::span<const ControlInput> controls,
                                 std::span<const BlendWeights> weights, std::span<const ControlInput> u_perf,
                                 const FlowField& field, double time, double u_max, std::size_t i);

/// Simulates one mission to timeout or until every agent is inside the target.
/// Throws ConfigError if the initial swarm violates the mission invariants;
/// failures during the run end the log with Termination::aborted.
MissionLog run_mission(const MissionSpec& mission, const RunOptions& options, const FlowField& sim_field,
                       const FlowField& plan_field, const SimConfig& config);

} // namespace swarmsafe
