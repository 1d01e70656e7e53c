#include "swarmsafe/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "swarmsafe/commgraph.hpp"
#include "swarmsafe/stats.hpp"

namespace swarmsafe {

double ipm_from_counts(std::span<const int> isolated_counts, double dt) {
    if (isolated_counts.empty()) throw DomainError("IPM needs at least one step");
    double integral = 0.0;
    for (int c : isolated_counts) integral += static_cast<double>(c) * dt;
    return integral / (static_cast<double>(isolated_counts.size()) * dt);
}

MetricsReport compute_metrics(const MissionLog& log, double r_coll, double r_com, const TargetDisc& target) {
    if (log.steps.empty()) throw DomainError("cannot compute metrics of an empty log");
    MetricsReport m;
    m.lambda2_min = std::numeric_limits<double>::infinity();
    m.d_min_target = std::numeric_limits<double>::infinity();
    std::vector<int> isolated;
    isolated.reserve(log.steps.size());
    for (const auto& s : log.steps) {
        const DenseMatrix d = pairwise_distances(s.positions);
        const AdjacencyMatrix a = adjacency_from_distances(d, r_com);
        const std::size_t n = s.positions.size();
        int zero_degree = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (a.degree(i) == 0) ++zero_degree;
            for (std::size_t j = i + 1; j < n; ++j)
                if (d(i, j) < r_coll) m.collision_indicator = 1;
        }
        isolated.push_back(zero_degree);
        const double l2 = fiedler_value(laplacian(a));
        if (!(l2 > kConnectivityThreshold)) m.disconnection_indicator = 1;
        m.lambda2_min = std::min(m.lambda2_min, l2);
        m.d_min_target = std::min(m.d_min_target, target.gap(centroid(s.positions)));
    }
    m.ipm = ipm_from_counts(isolated, log.config.dt);
    if (log.termination == Termination::all_in_target) m.arrival_time = log.steps.back().time - log.mission.start_time;
    return m;
}

namespace {

int policy_rank(const std::string& p) {
    if (p == "flocking") return 0;
    if (p == "reactive") return 1;
    if (p == "baseline") return 2;
    return 3;
}

struct Samples {
    std::vector<double> collision, disconnection, ipm, lambda2, d_min;
};

} // namespace

BatchReport aggregate_batch(std::span<const std::pair<std::string, MetricsReport>> reports) {
    std::vector<std::string> order;
    std::map<std::string, Samples> by_policy;
    for (const auto& [policy, m] : reports) {
        if (!by_policy.count(policy)) order.push_back(policy);
        auto& s = by_policy[policy];
        s.collision.push_back(m.collision_indicator);
        s.disconnection.push_back(m.disconnection_indicator);
        s.ipm.push_back(m.ipm);
        s.lambda2.push_back(m.lambda2_min);
        s.d_min.push_back(m.d_min_target);
    }

    BatchReport out;
    for (const auto& p : order) {
        const auto& s = by_policy[p];
        PolicyRow row;
        row.policy = p;
        row.missions = static_cast<int>(s.ipm.size());
        row.collision_rate = stats::mean(s.collision);
        row.disconnection_rate = stats::mean(s.disconnection);
        row.mean_ipm = stats::mean(s.ipm);
        row.sd_ipm = stats::stddev(s.ipm);
        row.mean_lambda2_min = stats::mean(s.lambda2);
        row.sd_lambda2_min = stats::stddev(s.lambda2);
        row.mean_d_min = stats::mean(s.d_min);
        row.sd_d_min = stats::stddev(s.d_min);
        out.rows.push_back(row);
    }

    std::vector<std::string> ranked = order;
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const std::string& l, const std::string& r) { return policy_rank(l) < policy_rank(r); });
    for (std::size_t x = 0; x < ranked.size(); ++x) {
        for (std::size_t y = x + 1; y < ranked.size(); ++y) {
            const auto& a = ranked[x];
            const auto& b = ranked[y];
            const auto& sa = by_policy[a];
            const auto& sb = by_policy[b];
            const long na = static_cast<long>(sa.ipm.size()), nb = static_cast<long>(sb.ipm.size());
            auto successes = [](const std::vector<double>& v) {
                long k = 0;
                for (double x : v) k += x > 0.5 ? 1 : 0;
                return k;
            };
            for (const char* metric : {"collision", "disconnection"}) {
                const auto& va = std::string(metric) == "collision" ? sa.collision : sa.disconnection;
                const auto& vb = std::string(metric) == "collision" ? sb.collision : sb.disconnection;
                const auto z = stats::two_proportion_z_test(successes(va), na, successes(vb), nb);
                out.comparisons.push_back({a, b, metric, a + " < " + b, "two_proportion_z", z.z, 0.0,
                                           z.log10_p_one_sided});
            }
            if (na < 2 || nb < 2) continue;
            auto welch = [&](const char* metric, const std::vector<double>& lo, const std::vector<double>& hi,
                             const std::string& alternative) {
                const auto w = stats::welch_t_test(lo, hi);
                out.comparisons.push_back({a, b, metric, alternative, "welch_t", w.t, w.df,
                                           std::log10(std::max(w.p_one_sided, 1e-300))});
            };
            welch("ipm", sa.ipm, sb.ipm, "mean " + a + " < " + b);
            welch("lambda2_min", sb.lambda2, sa.lambda2, "mean " + a + " > " + b);
            welch("d_min", sb.d_min, sa.d_min, "mean " + b + " < " + a);
        }
    }
    return out;
}

} // namespace swarmsafe
