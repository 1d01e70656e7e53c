// Acceptance suite: one PASS/FAIL line per primary criterion.
// Usage: swarmsafe_acceptance [--cli PATH_TO_SWARMSAFE] [--work DIR] [--expect-fail ID]...
// The exit status is 0 iff the failing criteria are exactly the --expect-fail set.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "oracles.hpp"
#include "swarmsafe/commgraph.hpp"
#include "swarmsafe/metrics.hpp"
#include "swarmsafe/missions.hpp"
#include "swarmsafe/potential.hpp"
#include "swarmsafe/serialization.hpp"
#include "swarmsafe/simulator.hpp"
#include "swarmsafe/stats.hpp"

namespace fs = std::filesystem;
using namespace swarmsafe;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string runtime(double s) { return s < 1e-2 ? fmt::format("{:.3f} ms", s * 1e3) : fmt::format("{:.2f} s", s); }

// ---------------------------------------------------------------------------

Outcome statistics_reproduction() {
    const auto t0 = Clock::now();
    const auto a = stats::two_proportion_z_test(99, 1000, 448, 1000);
    const auto b = stats::two_proportion_z_test(99, 1000, 580, 1000);
    const double s = seconds_since(t0);
    const bool ok = std::abs(a.log10_p_one_sided + 68.2) <= 0.3 && std::abs(b.log10_p_one_sided + 113.8) <= 0.3 &&
                    s < 1e-3;
    return {ok, fmt::format("log10 p = {:.2f} (target -68.2), {:.2f} (target -113.8); {}", a.log10_p_one_sided,
                            b.log10_p_one_sided, runtime(s))};
}

Outcome hysteresis_table() {
    const double r = 9000.0, eps = 300.0, tiny = 1e-6;
    struct Case {
        bool prev;
        double d;
        bool expected;
    };
    const std::vector<Case> cases{
        {false, r - eps - tiny, true}, {false, r - eps, false}, {false, r - 0.5 * eps, false},
        {false, r - tiny, false},      {false, r, false},       {false, r + tiny, false},
        {true, r - eps - tiny, true},  {true, r - eps, true},   {true, r - 0.5 * eps, true},
        {true, r - tiny, true},        {true, r, false},        {true, r + tiny, false},
    };
    const auto t0 = Clock::now();
    int wrong = 0;
    for (const auto& c : cases) {
        SigmaMatrix prev(2);
        prev.set(0, 1, c.prev);
        DenseMatrix d = DenseMatrix::square(2);
        d(0, 1) = d(1, 0) = c.d;
        const auto next = update_sigma(prev, d, r, eps);
        wrong += next.get(0, 1) != c.expected ? 1 : 0;
    }
    const double s = seconds_since(t0);
    return {wrong == 0 && s < 1e-3, fmt::format("{} cases, {} wrong; {}", cases.size(), wrong, runtime(s))};
}

Outcome gradient_correctness() {
    const SimConfig cfg;
    const PotentialParams pot = PotentialParams::from(cfg);
    const double h = 1e-3;
    Rng rng(20240301);
    const auto t0 = Clock::now();
    int tested = 0, failed = 0;
    double worst = 0.0;
    while (tested < 500) {
        std::vector<Vec2> q(5);
        for (auto& p : q) p = {rng.uniform(0.0, 1.4 * cfg.r_com), rng.uniform(0.0, 1.4 * cfg.r_com)};
        bool singular = false;
        for (std::size_t i = 0; i < q.size(); ++i)
            for (std::size_t j = i + 1; j < q.size(); ++j) {
                const double z = distance(q[i], q[j]);
                singular = singular || z < 0.01 * cfg.r_com || std::abs(z - cfg.r_com) < 0.01 * cfg.r_com;
            }
        if (singular) continue;
        ++tested;
        const SigmaMatrix sigma = initial_sigma(pairwise_distances(q), cfg.r_com);
        for (std::size_t i = 0; i < q.size(); ++i) {
            const Vec2 g = grad_psi_agent(q, sigma, pot, i);
            long double fd[2] = {0.0L, 0.0L};
            for (int axis = 0; axis < 2; ++axis)
                for (std::size_t j = 0; j < q.size(); ++j) {
                    if (j == i) continue;
                    const long double dx = static_cast<long double>(q[i].x) - q[j].x;
                    const long double dy = static_cast<long double>(q[i].y) - q[j].y;
                    const long double sx = axis == 0 ? h : 0.0L, sy = axis == 1 ? h : 0.0L;
                    const long double zp = std::sqrt((dx + sx) * (dx + sx) + (dy + sy) * (dy + sy));
                    const long double zm = std::sqrt((dx - sx) * (dx - sx) + (dy - sy) * (dy - sy));
                    const bool s = sigma.get(i, j);
                    fd[axis] += (oracle::psi(zp, s, cfg.kappa, cfg.r_com, cfg.epsilon, pot.length_unit) -
                                 oracle::psi(zm, s, cfg.kappa, cfg.r_com, cfg.epsilon, pot.length_unit)) /
                                (2.0L * h);
                }
            // Gradients are per potential length unit.
            const Vec2 ref{static_cast<double>(fd[0] * pot.length_unit), static_cast<double>(fd[1] * pot.length_unit)};
            const double rel = (g - ref).norm() / ref.norm();
            worst = std::max(worst, rel);
            failed += rel <= 1e-6 ? 0 : 1;
        }
    }
    const double s = seconds_since(t0);
    return {failed == 0 && s < 1.0,
            fmt::format("{} configurations, worst relative error {:.2e}, {} agents over 1e-6; {}", tested, worst,
                        failed, runtime(s))};
}

Outcome spectral_agreement() {
    Rng rng(77);
    const auto t0 = Clock::now();
    int disagreements = 0, compared = 0, connected = 0;
    double worst = 0.0;
    for (int g = 0; g < 200; ++g) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform() * 11.0);  // 2..12
        AdjacencyMatrix a(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) a.set(i, j, rng.uniform() < 0.3);
        const double l2 = fiedler_value(laplacian(a));
        const bool bfs = is_connected(a);
        connected += bfs ? 1 : 0;
        disagreements += (l2 > kConnectivityThreshold) != bfs ? 1 : 0;
        if (n <= 6) {
            std::vector<std::vector<long>> lap(n, std::vector<long>(n, 0));
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    lap[i][j] = i == j ? static_cast<long>(a.degree(i)) : -static_cast<long>(a.get(i, j));
            worst = std::max(worst, std::abs(l2 - oracle::laplacian_lambda2(lap)));
            ++compared;
        }
    }
    const double s = seconds_since(t0);
    return {disagreements == 0 && worst <= 1e-8 && s < 5.0,
            fmt::format("200 graphs ({} connected), {} disagreements; {} with N<=6, max |lambda2 - oracle| = {:.1e}; {}",
                        connected, disagreements, compared, worst, runtime(s))};
}

// Five agents spread so that some pairs start outside r_com.
std::vector<Vec2> energy_start(const SimConfig& cfg) {
    Rng rng(5);
    for (;;) {
        std::vector<Vec2> q(5);
        for (auto& p : q) p = {rng.uniform(0.0, 16000.0), rng.uniform(0.0, 6000.0)};
        const DenseMatrix d = pairwise_distances(q);
        bool spaced = true, some_far = false;
        for (std::size_t i = 0; i < 5; ++i)
            for (std::size_t j = i + 1; j < 5; ++j) {
                spaced = spaced && d(i, j) > 2.0 * cfg.r_coll;
                some_far = some_far || d(i, j) >= cfg.r_com;
            }
        if (spaced && some_far && is_connected(adjacency_from_distances(d, cfg.r_com))) return q;
    }
}

Outcome energy_theorem() {
    SimConfig cfg;
    cfg.n_agents = 5;
    cfg.timeout = 48.0 * 3600.0;
    MissionSpec m;
    m.start_positions = energy_start(cfg);
    m.target = {{1e7, 1e7}, cfg.target_radius};
    m.timeout = cfg.timeout;
    RunOptions opt;
    opt.policy = PolicyKind::lisic_flocking;
    opt.perf = PerfKind::naive;
    opt.zero_perf = true;
    const UniformFlow still({0.0, 0.0});

    const auto t0 = Clock::now();
    const MissionLog log = run_mission(m, opt, still, still, cfg);
    const double s = seconds_since(t0);

    int monotone_breaks = 0, jump_breaks = 0, switches = 0;
    double prev = log.initial_tension;
    for (const auto& st : log.steps) {
        const double slack = 1e-3 * prev;
        if (st.edges_added > 0) {
            ++switches;
            if (st.tension - prev > st.switch_jump_bound + slack) ++jump_breaks;
        } else if (st.edges_removed == 0 && st.tension > prev + slack) {
            ++monotone_breaks;
        }
        prev = st.tension;
    }
    const auto& last = log.steps.back();
    double lo = 1e300, hi = 0.0;
    int off = 0, edges = 0;
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = i + 1; j < 5; ++j) {
            if (!last.sigma.get(i, j)) continue;
            ++edges;
            const double d = distance(last.positions[i], last.positions[j]);
            lo = std::min(lo, d);
            hi = std::max(hi, d);
            off += std::abs(d - 0.5 * cfg.r_com) <= 0.05 * 0.5 * cfg.r_com ? 0 : 1;
        }
    const bool ok = log.termination != Termination::aborted && monotone_breaks == 0 && jump_breaks == 0 && off == 0 &&
                    s < 10.0;
    return {ok, fmt::format("{} steps, {} switch steps; H increases outside switches: {}; jumps over bound: {}; "
                            "final sigma=1 distances in [{:.0f}, {:.0f}] m, {} of {} outside 4275..4725 m; {}",
                            log.steps.size(), switches, monotone_breaks, jump_breaks, lo, hi, off, edges, runtime(s))};
}

Outcome condition_monitor() {
    SimConfig cfg;
    cfg.n_agents = 5;
    cfg.timeout = 48.0 * 3600.0;
    MissionSpec m;
    m.start_positions = energy_start(cfg);
    m.target = {{1e7, 1e7}, cfg.target_radius};
    m.timeout = cfg.timeout;
    RunOptions opt;
    opt.policy = PolicyKind::lisic_flocking;
    opt.perf = PerfKind::naive;
    opt.forced_weights = BlendWeights{1.0, 0.0};

    const auto t0 = Clock::now();
    const UniformFlow drift({0.35, -0.2});
    const MissionLog uniform = run_mission(m, opt, drift, drift, cfg);
    int violations = 0;
    double worst = -1e300;
    for (const auto& st : uniform.steps)
        for (double r : st.residuals) {
            worst = std::max(worst, r);
            violations += r <= 0.0 ? 0 : 1;
        }

    // Two agents on the stretching axis of a saddle: |v_i - v_j| = rate * d = 3 u_max.
    SimConfig pair = cfg;
    pair.n_agents = 2;
    MissionSpec m2;
    const double d = 0.5 * cfg.r_com;
    m2.start_positions = {{-0.5 * d, 0.0}, {0.5 * d, 0.0}};
    m2.target = {{1e7, 1e7}, cfg.target_radius};
    m2.timeout = cfg.dt;
    const SaddleFlow saddle({0.0, 0.0}, 3.0 * cfg.u_max / d);
    RunOptions opt2;
    opt2.policy = PolicyKind::lisic_flocking;
    opt2.perf = PerfKind::naive;
    const MissionLog strained = run_mission(m2, opt2, saddle, saddle, pair);
    const auto& r0 = strained.steps.front().residuals;
    const Vec2 dv = saddle.sample(m2.start_positions[0], 0.0) - saddle.sample(m2.start_positions[1], 0.0);
    const bool flagged = r0[0] > 0.0 && r0[1] > 0.0;
    const double s = seconds_since(t0);
    return {violations == 0 && flagged && s < 10.0,
            fmt::format("uniform flow: {} steps, max residual {:.3g}, {} violations; saddle |dv| = {:.3g} u_max: "
                        "residuals {:.3g}, {:.3g} -> {}; {}",
                        uniform.steps.size(), worst, violations, dv.norm() / cfg.u_max, r0[0], r0[1],
                        flagged ? "violation reported" : "not reported", runtime(s))};
}

Outcome ordering_reproduction(const fs::path& work) {
    BatchSpec b;
    b.workers = 1;
    const auto t0 = Clock::now();
    const BatchResult r = run_batch(b, work / "ordering");
    const double s = seconds_since(t0);
    const auto row = [&](const char* p) {
        for (const auto& x : r.report.rows)
            if (x.policy == p) return x;
        return PolicyRow{};
    };
    const PolicyRow base = row("baseline"), reac = row("reactive"), flock = row("flocking");
    std::vector<std::string> misses;
    if (!(flock.disconnection_rate < reac.disconnection_rate && reac.disconnection_rate < base.disconnection_rate))
        misses.push_back("disconnection order");
    if (!(flock.disconnection_rate <= 0.5 * base.disconnection_rate)) misses.push_back("flocking <= baseline/2");
    if (!(flock.mean_ipm < reac.mean_ipm && flock.mean_ipm < base.mean_ipm)) misses.push_back("IPM lowest");
    if (!(flock.mean_lambda2_min > reac.mean_lambda2_min && flock.mean_lambda2_min > base.mean_lambda2_min))
        misses.push_back("lambda2_min highest");
    if (!(flock.collision_rate <= 0.05)) misses.push_back("collision <= 5%");
    if (!(base.mean_d_min <= reac.mean_d_min && reac.mean_d_min <= flock.mean_d_min)) misses.push_back("d_min order");
    if (!(s < 300.0)) misses.push_back("runtime");
    std::string miss;
    for (const auto& x : misses) miss += (miss.empty() ? "" : ", ") + x;
    return {misses.empty(),
            fmt::format("M={} N={}: disconn b/r/f = {:.2f}/{:.2f}/{:.2f}, IPM {:.4f}/{:.4f}/{:.4f}, "
                        "lambda2_min {:.2f}/{:.2f}/{:.2f}, coll f = {:.2f}, d_min km {:.2f}/{:.2f}/{:.2f}{}; {} "
                        "single-threaded",
                        b.missions, b.config.n_agents, base.disconnection_rate, reac.disconnection_rate,
                        flock.disconnection_rate, base.mean_ipm, reac.mean_ipm, flock.mean_ipm, base.mean_lambda2_min,
                        reac.mean_lambda2_min, flock.mean_lambda2_min, flock.collision_rate, base.mean_d_min / 1e3,
                        reac.mean_d_min / 1e3, flock.mean_d_min / 1e3, miss.empty() ? "" : "; missed: " + miss,
                        runtime(s))};
}

Outcome ipm_oracle() {
    Rng rng(8);
    const double dt = 600.0;
    int mismatches = 0;
    for (int trace = 0; trace < 100; ++trace) {
        const int n = 2 + static_cast<int>(rng.uniform() * 29.0);
        const int k = 1 + static_cast<int>(rng.uniform() * 200.0);
        std::vector<std::vector<int>> degree(k, std::vector<int>(n));
        for (auto& step : degree)
            for (auto& d : step) d = rng.uniform() < 0.3 ? 0 : 1 + static_cast<int>(rng.uniform() * (n - 1));
        std::vector<int> counts;
        for (const auto& step : degree) {
            int c = 0;
            for (int d : step) c += d == 0 ? 1 : 0;
            counts.push_back(c);
        }
        // Piecewise-constant integration agent by agent over [t_{k-1}, t_k].
        double integral = 0.0;
        for (int a = 0; a < n; ++a)
            for (int s = 0; s < k; ++s)
                if (degree[s][a] == 0) integral += (s + 1) * dt - s * dt;
        const double brute = integral / (k * dt - 0.0);
        mismatches += ipm_from_counts(counts, dt) == brute ? 0 : 1;
    }
    std::vector<int> one_isolated(288, 1);
    const double full = ipm_from_counts(one_isolated, dt);
    return {mismatches == 0 && full == 1.0,
            fmt::format("100 traces, {} inexact; one agent isolated for the full horizon -> IPM = {}", mismatches,
                        fmt_sig9(full))};
}

Outcome integrator_order() {
    const double dt = 600.0;
    const int steps = 144;
    const double rate = 2.0 * M_PI / (steps * dt);
    const RigidRotation field({0.0, 0.0}, rate);
    const PotentialParams pot;
    const std::vector<ControlInput> zero(2);
    double drift[2];
    for (int k = 0; k < 2; ++k) {
        SwarmState s;
        s.positions = {{5000.0, 0.0}, {0.0, 6000.0}};
        s.sigma = initial_sigma(pairwise_distances(s.positions), pot.r_com);
        for (int i = 0; i < steps; ++i)
            s = step(s, zero, field, dt, k == 0 ? Integrator::rk4 : Integrator::euler, pot);
        drift[k] = std::abs(s.positions[0].norm() - 5000.0) / 5000.0;
    }
    return {drift[0] < 1e-3 && drift[1] > drift[0],
            fmt::format("one revolution in {} steps: RK4 radius drift {:.2e}, Euler {:.2e}", steps, drift[0], drift[1])};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism(const fs::path& work, const std::string& cli) {
    const auto t0 = Clock::now();
    const fs::path a = work / "det_a", b = work / "det_b";
    fs::remove_all(a);
    fs::remove_all(b);
    std::string how;
    if (!cli.empty()) {
        const std::string common = " batch --missions 10 --seed 42 --out ";
        const int ra = std::system((cli + common + a.string() + " --workers 1 > /dev/null").c_str());
        const int rb = std::system((cli + common + b.string() + " --workers 3 > /dev/null").c_str());
        if (ra != 0 || rb != 0) return {false, fmt::format("cli exit status {} / {}", ra, rb)};
        how = "swarmsafe batch, 1 vs 3 workers";
    } else {
        BatchSpec spec;
        spec.missions = 10;
        spec.seed = 42;
        spec.workers = 1;
        run_batch(spec, a / spec.id);
        spec.workers = 3;
        run_batch(spec, b / spec.id);
        how = "run_batch, 1 vs 3 workers";
    }
    const std::string ca = slurp(a / "desk" / "batch_report.csv"), cb = slurp(b / "desk" / "batch_report.csv");
    const bool same = !ca.empty() && ca == cb;
    return {same, fmt::format("{}: batch_report.csv {} ({} bytes); {}", how, same ? "byte-identical" : "DIFFERS",
                              ca.size(), runtime(seconds_since(t0)))};
}

} // namespace

int main(int argc, char** argv) {
    std::string cli;
    std::set<int> expected_failures;
    fs::path work = fs::temp_directory_path() / "swarmsafe_acceptance";
    for (int i = 1; i + 1 < argc; i += 2) {
        const std::string flag = argv[i];
        if (flag == "--cli") cli = argv[i + 1];
        else if (flag == "--work") work = argv[i + 1];
        else if (flag == "--expect-fail") expected_failures.insert(std::atoi(argv[i + 1]));
    }
    fs::create_directories(work);

    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "statistics reproduction", statistics_reproduction},
        {2, "hysteresis state machine", hysteresis_table},
        {3, "gradient correctness", gradient_correctness},
        {4, "spectral/combinatorial agreement", spectral_agreement},
        {5, "energy theorem desk check", energy_theorem},
        {6, "condition monitor", condition_monitor},
        {7, "ordering reproduction", [&] { return ordering_reproduction(work); }},
        {8, "IPM oracle", ipm_oracle},
        {9, "integrator order", integrator_order},
        {10, "determinism", [&] { return determinism(work, cli); }},
    };
    std::set<int> failures;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) failures.insert(c.id);
        std::printf("%s  %2d  %-34s %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu of %zu criteria passed\n", criteria.size() - failures.size(), criteria.size());
    if (!expected_failures.empty()) {
        std::string ids;
        for (int id : expected_failures) ids += (ids.empty() ? "" : ", ") + std::to_string(id);
        std::printf("documented as unattainable: %s\n", ids.c_str());
    }
    return failures == expected_failures ? 0 : 1;
}
