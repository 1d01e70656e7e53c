#include "swarmsafe/simulator.hpp"

#include <cmath>

#include "swarmsafe/commgraph.hpp"

namespace swarmsafe {

std::string to_string(Termination t) {
    switch (t) {
    case Termination::timeout: return "timeout";
    case Termination::all_in_target: return "all_in_target";
    case Termination::aborted: return "aborted";
    }
    return "?";
}

Termination termination_from_string(const std::string& s) {
    if (s == "timeout") return Termination::timeout;
    if (s == "all_in_target") return Termination::all_in_target;
    if (s == "aborted") return Termination::aborted;
    throw ConfigError("unknown termination reason '" + s + "'");
}

SwarmState step(const SwarmState& state, std::span<const ControlInput> controls, const FlowField& field, double dt,
                Integrator integrator, const PotentialParams& hysteresis) {
    const std::size_t n = state.size();
    if (controls.size() != n) throw DomainError("one control per agent is required");
    if (!(dt > 0.0)) throw DomainError("dt must be positive");
    const double t = state.time;

    SwarmState next;
    next.time = t + dt;
    next.positions.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 q = state.positions[i];
        const Vec2 u = controls[i].vector;
        if (integrator == Integrator::euler) {
            next.positions[i] = q + (field.sample(q, t) + u) * dt;
            continue;
        }
        const double h = 0.5 * dt;
        const Vec2 k1 = field.sample(q, t) + u;
        const Vec2 k2 = field.sample(q + k1 * h, t + h) + u;
        const Vec2 k3 = field.sample(q + k2 * h, t + h) + u;
        const Vec2 k4 = field.sample(q + k3 * dt, t + dt) + u;
        next.positions[i] = q + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
    }
    next.sigma = update_sigma(state.sigma, pairwise_distances(next.positions), hysteresis.r_com, hysteresis.epsilon);
    return next;
}

EnergyCondition energy_condition(std::span<const Vec2> positions, std::span<const ControlInput> controls,
                                 std::span<const BlendWeights> weights, std::span<const ControlInput> u_perf,
                                 const FlowField& field, double time, double u_max, std::size_t i) {
    const std::size_t n = positions.size();
    if (n < 2) throw DomainError("energy condition needs at least 2 agents");
    const Vec2 vi = field.sample(positions[i], time);
    // Averages of differences so that identical flows cancel exactly.
    Vec2 flow_gap{}, control_sum{};
    for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        flow_gap += vi - field.sample(positions[j], time);
        control_sum += controls[j].vector;
    }
    const double m = static_cast<double>(n - 1);
    const Vec2 lhs = u_perf[i].vector * weights[i].c2 + flow_gap / m - control_sum / m;
    const double residual = lhs.norm() - weights[i].c1 * u_max;
    return {residual <= 0.0, residual};
}

namespace {

struct StepGraph {
    AdjacencyMatrix adjacency;
    std::vector<std::uint8_t> flags;
    bool collision{false};
    bool disconnected{false};
    double lambda2{0.0};
    double min_pair{0.0};
};

StepGraph analyse(std::span<const Vec2> positions, const SimConfig& cfg) {
    const std::size_t n = positions.size();
    const DenseMatrix d = pairwise_distances(positions);
    StepGraph g;
    g.adjacency = adjacency_from_distances(d, cfg.r_com);
    g.flags.assign(n, 0);
    g.min_pair = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            g.min_pair = std::min(g.min_pair, d(i, j));
            if (d(i, j) < cfg.r_coll) {
                g.collision = true;
                g.flags[i] |= kFlagCollision;
                g.flags[j] |= kFlagCollision;
            }
        }
    g.lambda2 = fiedler_value(laplacian(g.adjacency));
    g.disconnected = !(g.lambda2 > kConnectivityThreshold);
    if (g.disconnected)
        for (auto& f : g.flags) f |= kFlagDisconnected;
    return g;
}

// Tension energy that tolerates states where the potential is undefined
// (coincident agents); those steps record NaN rather than aborting the run.
double try_tension(std::span<const Vec2> positions, const SigmaMatrix& sigma, const PotentialParams& pot) {
    try {
        return tension_energy(positions, sigma, pot);
    } catch (const DegenerateGeometryError&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

} // namespace

MissionLog run_mission(const MissionSpec& mission, const RunOptions& options, const FlowField& sim_field,
                       const FlowField& plan_field, const SimConfig& config_in) {
    const SimConfig config = validate_config(config_in);
    const std::size_t n = mission.start_positions.size();
    if (n < 2) throw ConfigError("mission needs at least 2 agents");
    if (!(mission.timeout > 0.0)) throw ConfigError("mission timeout must be positive");
    if (!is_connected(adjacency_from_positions(mission.start_positions, config.r_com)))
        throw ConfigError("mission " + std::to_string(mission.id) + " does not start connected");

    PotentialParams pot = PotentialParams::from(config);
    pot.grad_cap = options.grad_cap;
    pot.zero_grad_tol = options.zero_grad_tol;
    pot.validate();
    const LisicParams lisic{config.rho};

    MissionLog log;
    log.mission_id = mission.id;
    log.policy = cli_name(options.policy);
    log.perf = options.zero_perf ? "zero" : to_string(options.perf);
    log.config = config;
    log.mission = mission;
    log.initial_positions = mission.start_positions;

    SwarmState state;
    state.time = mission.start_time;
    state.positions = mission.start_positions;
    state.sigma = initial_sigma(pairwise_distances(state.positions), config.r_com);
    log.initial_tension = try_tension(state.positions, state.sigma, pot);

    std::vector<Vec2> plan_points = mission.start_positions;
    plan_points.push_back(mission.target.center - Vec2{mission.target.radius, mission.target.radius});
    plan_points.push_back(mission.target.center + Vec2{mission.target.radius, mission.target.radius});
    const GridSpec grid_spec = grid_around(plan_points, options.grid_padding, options.grid_nodes);
    std::optional<ValueGrid> plan;

    const auto max_steps = static_cast<std::size_t>(std::ceil(mission.timeout / config.dt - 1e-9));
    std::vector<ControlInput> u_perf(n);
    std::vector<BlendWeights> weights(n);
    std::vector<ControlInput> controls(n);

    try {
        for (std::size_t k = 0; k < max_steps; ++k) {
            if (options.perf == PerfKind::valuegrid && !options.zero_perf &&
                (!plan || state.time - plan->snapshot_time >= options.replan_interval))
                plan = compute_value_grid(plan_field, state.time, mission.target, grid_spec, config.u_max);

            for (std::size_t i = 0; i < n; ++i) {
                if (options.zero_perf) {
                    u_perf[i] = {};
                } else if (plan) {
                    try {
                        u_perf[i] = value_grid_control(*plan, state.positions[i], config.u_max);
                    } catch (const NoGuidanceError&) {
                        u_perf[i] = naive_to_target(state.positions[i], mission.target, config.u_max);
                    }
                } else {
                    u_perf[i] = naive_to_target(state.positions[i], mission.target, config.u_max);
                }
            }

            switch (options.policy) {
            case PolicyKind::baseline_perf_only:
                controls = baseline_policy(u_perf);
                weights.assign(n, BlendWeights{0.0, 1.0});
                break;
            case PolicyKind::reactive:
                for (std::size_t i = 0; i < n; ++i)
                    controls[i] = reactive_policy(state.positions, i, pot, config.u_max, u_perf[i]).control;
                weights.assign(n, BlendWeights{0.0, 1.0});
                break;
            case PolicyKind::lisic_flocking:
                if (options.forced_weights) {
                    const auto grads = grad_psi_all(state.positions, state.sigma, pot);
                    weights.assign(n, *options.forced_weights);
                    for (std::size_t i = 0; i < n; ++i)
                        controls[i] = blend(u_perf[i], safe_control_from_gradient(grads[i], pot, config.u_max),
                                            weights[i]);
                } else {
                    auto out = lisic_policy(state, u_perf, pot, lisic, config.u_max);
                    controls = std::move(out.controls);
                    weights = std::move(out.weights);
                }
                break;
            }

            StepRecord rec;
            rec.residuals.resize(n);
            // Baseline and reactive controls count entirely as performance input.
            const std::span<const ControlInput> perf_term =
                options.policy == PolicyKind::lisic_flocking ? std::span<const ControlInput>(u_perf) : controls;
            for (std::size_t i = 0; i < n; ++i)
                rec.residuals[i] = energy_condition(state.positions, controls, weights, perf_term, sim_field,
                                                    state.time, config.u_max, i)
                                       .residual;

            SwarmState next = step(state, controls, sim_field, config.dt, config.integrator, pot);

            const DenseMatrix dist = pairwise_distances(next.positions);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j) {
                    const bool before = state.sigma.get(i, j), after = next.sigma.get(i, j);
                    if (!before && after) {
                        ++rec.edges_added;
                        rec.switch_jump_bound += psi(dist(i, j), true, pot);
                    } else if (before && !after) {
                        ++rec.edges_removed;
                    }
                }

            StepGraph g = analyse(next.positions, config);
            rec.time = next.time;
            rec.positions = next.positions;
            rec.controls = controls;
            rec.weights = weights;
            rec.sigma = next.sigma;
            rec.adjacency = std::move(g.adjacency);
            rec.flags = std::move(g.flags);
            rec.collision = g.collision;
            rec.disconnected = g.disconnected;
            rec.lambda2 = g.lambda2;
            rec.min_pair_distance = g.min_pair;
            rec.tension = try_tension(next.positions, next.sigma, pot);
            log.steps.push_back(std::move(rec));
            state = std::move(next);

            bool all_in = true;
            for (const auto& q : state.positions) all_in = all_in && mission.target.contains(q);
            if (all_in) {
                log.termination = Termination::all_in_target;
                return log;
            }
        }
        log.termination = Termination::timeout;
    } catch (const Error& e) {
        log.termination = Termination::aborted;
        log.message = e.what();
    }
    return log;
}

} // namespace swarmsafe
