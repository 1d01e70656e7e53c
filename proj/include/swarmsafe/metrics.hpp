#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "swarmsafe/policies.hpp"
#include "swarmsafe/simulator.hpp"

namespace swarmsafe {

/// Constraint-violation summary of one mission. All graph quantities use the
/// raw disk graph (d < r_com), not the controller's hysteresis state.
struct MetricsReport {
    int collision_indicator{0};
    int disconnection_indicator{0};
    double lambda2_min{0.0};
    double ipm{0.0};           ///< time-averaged count of isolated agents
    double d_min_target{0.0};  ///< closest approach of the swarm centroid to the target disc, m
    std::optional<double> arrival_time;
};

/// Isolated-platform metric from per-step isolated-agent counts with a fixed
/// step: sum(count_k * dt) / (K * dt).
double ipm_from_counts(std::span<const int> isolated_counts, double dt);

/// Throws DomainError on an empty log.
MetricsReport compute_metrics(const MissionLog& log, double r_coll, double r_com, const TargetDisc& target);

struct PolicyRow {
    std::string policy;
    int missions{0};
    double collision_rate{0.0};
    double disconnection_rate{0.0};
    double mean_ipm{0.0}, sd_ipm{0.0};
    double mean_lambda2_min{0.0}, sd_lambda2_min{0.0};
    double mean_d_min{0.0}, sd_d_min{0.0};
};

/// One hypothesis test between two policies. For proportions `statistic` is
/// z and `log10_p` is filled; for means `statistic` is Welch t with `df`.
struct PolicyComparison {
    std::string policy_a;
    std::string policy_b;
    std::string metric;       ///< collision | disconnection | ipm | lambda2_min | d_min
    std::string alternative;  ///< human readable H_A, e.g. "flocking < reactive"
    std::string test;         ///< two_proportion_z | welch_t
    double statistic{0.0};
    double df{0.0};
    double log10_p{0.0};
};

struct BatchReport {
    std::vector<PolicyRow> rows;
    std::vector<PolicyComparison> comparisons;
};

/// Rates, means and standard deviations per policy (in first-seen order), plus
/// one-sided tests for every policy pair when at least two are present. Pairs
/// are ordered flocking, reactive, baseline; the first of a pair is the one
/// hypothesised to be safer.
BatchReport aggregate_batch(std::span<const std::pair<std::string, MetricsReport>> reports);

} // namespace swarmsafe
