#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swarmsafe/core.hpp"
#include "swarmsafe/flowfield.hpp"
#include "swarmsafe/potential.hpp"

namespace swarmsafe {

struct TargetDisc {
    Vec2 center{};
    double radius{1.0};

    bool contains(const Vec2& q) const { return distance(q, center) <= radius; }
    /// Distance from q to the disc, 0 inside.
    double gap(const Vec2& q) const {
        const double d = distance(q, center) - radius;
        return d > 0.0 ? d : 0.0;
    }
    bool operator==(const TargetDisc&) const = default;
};

/// How the agents' controls are composed from the performance controls.
enum class PolicyKind { baseline_perf_only, reactive, lisic_flocking };

/// Single-agent performance controller.
enum class PerfKind { naive, valuegrid };

std::string to_string(PolicyKind k);
std::string cli_name(PolicyKind k);  ///< baseline | reactive | flocking
PolicyKind policy_from_string(const std::string& name);
std::string to_string(PerfKind k);
PerfKind perf_from_string(const std::string& name);

/// Full thrust straight at the target center; zero inside the disc.
ControlInput naive_to_target(const Vec2& position, const TargetDisc& target, double u_max);

/// Regular planning lattice.
struct GridSpec {
    double x_min{0.0};
    double x_max{1.0};
    double y_min{0.0};
    double y_max{1.0};
    std::size_t nx{100};
    std::size_t ny{100};

    double hx() const { return (x_max - x_min) / static_cast<double>(nx - 1); }
    double hy() const { return (y_max - y_min) / static_cast<double>(ny - 1); }
    Vec2 node(std::size_t ix, std::size_t iy) const {
        return {x_min + hx() * static_cast<double>(ix), y_min + hy() * static_cast<double>(iy)};
    }
    bool contains(const Vec2& q) const { return q.x >= x_min && q.x <= x_max && q.y >= y_min && q.y <= y_max; }
};

/// Bounding box of `points` padded by `padding` of its extent on every side.
GridSpec grid_around(std::span<const Vec2> points, double padding = 0.2, std::size_t nodes = 100);

/// Time-to-reach values on a planning lattice, frozen flow at `snapshot_time`.
struct ValueGrid {
    GridSpec spec;
    std::vector<double> values;  ///< (iy, ix) row-major, seconds; +inf when unreachable
    double snapshot_time{0.0};
    TargetDisc target;

    double at(std::size_t ix, std::size_t iy) const { return values[iy * spec.nx + ix]; }
};

/// Minimum agent speed used on an edge whose flow nearly cancels the thrust.
inline constexpr double kSpeedFloor = 1e-4;

/// Effective along-edge speed for travel from `from` to `to` under a frozen flow;
/// nullopt when the edge is untraversable (u_max + projection <= 0 or the
/// midpoint lies outside the field).
std::optional<double> edge_speed(const FlowField& field, const Vec2& from, const Vec2& to, double time, double u_max);

/// Dijkstra wavefront from the target over the 8-neighbor lattice.
/// Throws DomainError when no node lies inside the target.
ValueGrid compute_value_grid(const FlowField& field, double snapshot_time, const TargetDisc& target,
                             const GridSpec& spec, double u_max);

/// Steepest descent of the bilinearly interpolated value gradient at full thrust.
/// Throws NoGuidanceError outside the grid or where the enclosing cell has
/// an unreachable corner.
ControlInput value_grid_control(const ValueGrid& grid, const Vec2& position, double u_max);

enum class ReactiveMode { achieve_connectivity, maintain_connectivity, go_to_goal };
std::string to_string(ReactiveMode m);

struct ReactiveDecision {
    ReactiveMode mode;
    ControlInput control;
};

/// Three-mode reactive controller. Degree 0 in the raw disk graph: full thrust
/// toward the nearest agent. Any incident edge at d >= r_com - epsilon: full
/// thrust toward the centroid of those endangered neighbors. Otherwise u_perf.
ReactiveDecision reactive_policy(std::span<const Vec2> positions, std::size_t i, const PotentialParams& pot,
                                 double u_max, const ControlInput& u_perf);

/// Each agent keeps its own performance control.
std::vector<ControlInput> baseline_policy(std::span<const ControlInput> u_perf);

} // namespace swarmsafe
