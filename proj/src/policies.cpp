#include "swarmsafe/policies.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>

namespace swarmsafe {

std::string to_string(PolicyKind k) {
    switch (k) {
    case PolicyKind::baseline_perf_only: return "baseline_perf_only";
    case PolicyKind::reactive: return "reactive";
    case PolicyKind::lisic_flocking: return "lisic_flocking";
    }
    return "?";
}

std::string cli_name(PolicyKind k) {
    switch (k) {
    case PolicyKind::baseline_perf_only: return "baseline";
    case PolicyKind::reactive: return "reactive";
    case PolicyKind::lisic_flocking: return "flocking";
    }
    return "?";
}

PolicyKind policy_from_string(const std::string& name) {
    if (name == "baseline" || name == "baseline_perf_only") return PolicyKind::baseline_perf_only;
    if (name == "reactive") return PolicyKind::reactive;
    if (name == "flocking" || name == "lisic_flocking") return PolicyKind::lisic_flocking;
    throw ConfigError("policy must be one of {baseline, reactive, flocking}, got '" + name + "'");
}

std::string to_string(PerfKind k) { return k == PerfKind::naive ? "naive" : "valuegrid"; }

PerfKind perf_from_string(const std::string& name) {
    if (name == "naive") return PerfKind::naive;
    if (name == "valuegrid") return PerfKind::valuegrid;
    throw ConfigError("perf must be one of {naive, valuegrid}, got '" + name + "'");
}

std::string to_string(ReactiveMode m) {
    switch (m) {
    case ReactiveMode::achieve_connectivity: return "achieveConnectivity";
    case ReactiveMode::maintain_connectivity: return "maintainConnectivity";
    case ReactiveMode::go_to_goal: return "GoToGoal";
    }
    return "?";
}

ControlInput naive_to_target(const Vec2& position, const TargetDisc& target, double u_max) {
    if (target.contains(position)) return {};
    const Vec2 d = target.center - position;
    return {d * (u_max / d.norm())};
}

GridSpec grid_around(std::span<const Vec2> points, double padding, std::size_t nodes) {
    double x0 = points[0].x, x1 = x0, y0 = points[0].y, y1 = y0;
    for (const auto& p : points) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
    }
    // A degenerate box still gets a usable extent.
    const double w = std::max(x1 - x0, 1.0), h = std::max(y1 - y0, 1.0);
    return {x0 - padding * w, x1 + padding * w, y0 - padding * h, y1 + padding * h, nodes, nodes};
}

std::optional<double> edge_speed(const FlowField& field, const Vec2& from, const Vec2& to, double time, double u_max) {
    const Vec2 mid = (from + to) * 0.5;
    if (!field.bounds().contains(mid)) return std::nullopt;
    const Vec2 dir = (to - from) / distance(from, to);
    const double speed = u_max + field.sample(mid, time).dot(dir);
    if (!(speed > 0.0)) return std::nullopt;
    return std::max(kSpeedFloor, speed);
}

namespace {

constexpr int kNeighbors[8][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}, {1, -1}, {-1, 1}};

} // namespace

ValueGrid compute_value_grid(const FlowField& field, double snapshot_time, const TargetDisc& target,
                             const GridSpec& spec, double u_max) {
    if (spec.nx < 2 || spec.ny < 2) throw ConfigError("value grid needs at least 2 x 2 nodes");
    if (!(u_max > 0.0)) throw ConfigError("u_max must be positive");
    const double inf = std::numeric_limits<double>::infinity();
    const std::size_t nx = spec.nx, ny = spec.ny;

    ValueGrid grid{spec, std::vector<double>(nx * ny, inf), snapshot_time, target};

    using Entry = std::pair<double, std::size_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
    for (std::size_t iy = 0; iy < ny; ++iy)
        for (std::size_t ix = 0; ix < nx; ++ix)
            if (target.contains(spec.node(ix, iy))) {
                grid.values[iy * nx + ix] = 0.0;
                open.push({0.0, iy * nx + ix});
            }
    if (open.empty()) throw DomainError("target disc contains no planning grid node");

    std::vector<char> done(nx * ny, 0);
    while (!open.empty()) {
        const auto [value, idx] = open.top();
        open.pop();
        if (done[idx]) continue;
        done[idx] = 1;
        const std::size_t bx = idx % nx, by = idx / nx;
        const Vec2 b = spec.node(bx, by);
        for (const auto& off : kNeighbors) {
            const long ax = static_cast<long>(bx) + off[0], ay = static_cast<long>(by) + off[1];
            if (ax < 0 || ay < 0 || ax >= static_cast<long>(nx) || ay >= static_cast<long>(ny)) continue;
            const std::size_t aidx = static_cast<std::size_t>(ay) * nx + static_cast<std::size_t>(ax);
            if (done[aidx]) continue;
            const Vec2 a = spec.node(static_cast<std::size_t>(ax), static_cast<std::size_t>(ay));
            // The agent travels a -> b.
            const auto speed = edge_speed(field, a, b, snapshot_time, u_max);
            if (!speed) continue;
            const double candidate = value + distance(a, b) / *speed;
            if (candidate < grid.values[aidx]) {
                grid.values[aidx] = candidate;
                open.push({candidate, aidx});
            }
        }
    }
    return grid;
}

namespace {

// Central difference along one axis with one-sided fallback at the lattice
// edge or next to an unreachable node.
std::optional<double> axis_derivative(double center, double lo, double hi, bool has_lo, bool has_hi, double h) {
    const bool lo_ok = has_lo && std::isfinite(lo);
    const bool hi_ok = has_hi && std::isfinite(hi);
    if (lo_ok && hi_ok) return (hi - lo) / (2.0 * h);
    if (hi_ok) return (hi - center) / h;
    if (lo_ok) return (center - lo) / h;
    return std::nullopt;
}

std::optional<Vec2> node_gradient(const ValueGrid& g, std::size_t ix, std::size_t iy) {
    const double c = g.at(ix, iy);
    if (!std::isfinite(c)) return std::nullopt;
    const std::size_t nx = g.spec.nx, ny = g.spec.ny;
    const auto gx = axis_derivative(c, ix > 0 ? g.at(ix - 1, iy) : 0.0, ix + 1 < nx ? g.at(ix + 1, iy) : 0.0, ix > 0,
                                    ix + 1 < nx, g.spec.hx());
    const auto gy = axis_derivative(c, iy > 0 ? g.at(ix, iy - 1) : 0.0, iy + 1 < ny ? g.at(ix, iy + 1) : 0.0, iy > 0,
                                    iy + 1 < ny, g.spec.hy());
    if (!gx || !gy) return std::nullopt;
    return Vec2{*gx, *gy};
}

} // namespace

ControlInput value_grid_control(const ValueGrid& grid, const Vec2& position, double u_max) {
    if (grid.target.contains(position)) return {};
    const GridSpec& s = grid.spec;
    if (!s.contains(position) || !position.finite())
        throw NoGuidanceError("position (" + fmt_sig9(position.x) + ", " + fmt_sig9(position.y) +
                              ") is outside the value grid");
    const double fx = (position.x - s.x_min) / s.hx();
    const double fy = (position.y - s.y_min) / s.hy();
    const std::size_t ix = std::min(static_cast<std::size_t>(fx), s.nx - 2);
    const std::size_t iy = std::min(static_cast<std::size_t>(fy), s.ny - 2);
    const double wx = fx - static_cast<double>(ix), wy = fy - static_cast<double>(iy);

    Vec2 grad{};
    const double weights[4] = {(1 - wx) * (1 - wy), wx * (1 - wy), (1 - wx) * wy, wx * wy};
    const std::size_t corners[4][2] = {{ix, iy}, {ix + 1, iy}, {ix, iy + 1}, {ix + 1, iy + 1}};
    for (int k = 0; k < 4; ++k) {
        const auto g = node_gradient(grid, corners[k][0], corners[k][1]);
        if (!g) throw NoGuidanceError("value grid cell has an unreachable corner");
        grad += *g * weights[k];
    }
    const double norm = grad.norm();
    if (!(norm > 0.0)) return {};
    return {grad * (-u_max / norm)};
}

ReactiveDecision reactive_policy(std::span<const Vec2> positions, std::size_t i, const PotentialParams& pot,
                                 double u_max, const ControlInput& u_perf) {
    const std::size_t n = positions.size();
    const Vec2 qi = positions[i];
    double nearest = std::numeric_limits<double>::infinity();
    std::size_t nearest_j = i;
    std::size_t degree = 0;
    Vec2 endangered_sum{};
    std::size_t endangered = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const double d = distance(qi, positions[j]);
        if (d < nearest) {
            nearest = d;
            nearest_j = j;
        }
        if (d < pot.r_com) {
            ++degree;
            if (d >= pot.r_com - pot.epsilon) {
                endangered_sum += positions[j];
                ++endangered;
            }
        }
    }
    auto toward = [&](const Vec2& goal) -> ControlInput {
        const Vec2 d = goal - qi;
        const double norm = d.norm();
        if (!(norm > 0.0)) return {};
        return {d * (u_max / norm)};
    };
    if (degree == 0) return {ReactiveMode::achieve_connectivity, nearest_j == i ? ControlInput{} : toward(positions[nearest_j])};
    if (endangered > 0)
        return {ReactiveMode::maintain_connectivity, toward(endangered_sum / static_cast<double>(endangered))};
    return {ReactiveMode::go_to_goal, u_perf};
}

std::vector<ControlInput> baseline_policy(std::span<const ControlInput> u_perf) {
    return {u_perf.begin(), u_perf.end()};
}

} // namespace swarmsafe
