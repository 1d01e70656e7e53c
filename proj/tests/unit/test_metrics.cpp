#include <doctest.h>

#include "swarmsafe/commgraph.hpp"
#include "swarmsafe/metrics.hpp"
#include "swarmsafe/missions.hpp"

using namespace swarmsafe;

namespace {

MissionLog log_from(const std::vector<std::vector<Vec2>>& frames, const TargetDisc& target) {
    MissionLog log;
    log.config.dt = 600.0;
    log.mission.target = target;
    for (std::size_t k = 0; k < frames.size(); ++k) {
        StepRecord s;
        s.time = 600.0 * static_cast<double>(k + 1);
        s.positions = frames[k];
        log.steps.push_back(s);
    }
    return log;
}

} // namespace

TEST_CASE("IPM from counts") {
    const std::vector<int> none(10, 0), one(10, 1), half{0, 2, 0, 2};
    CHECK(ipm_from_counts(none, 600.0) == 0.0);
    CHECK(ipm_from_counts(one, 600.0) == 1.0);
    CHECK(ipm_from_counts(half, 600.0) == 1.0);
    CHECK_THROWS_AS(ipm_from_counts(std::vector<int>{}, 600.0), DomainError);
}

TEST_CASE("metrics recomputed from positions") {
    const TargetDisc target{{100000.0, 0.0}, 10000.0};
    // Step 1 connected, step 2 agent 2 isolated and 0-1 colliding, step 3 connected again.
    const std::vector<std::vector<Vec2>> frames{
        {{0, 0}, {4000, 0}, {8000, 0}},
        {{0, 0}, {50, 0}, {30000, 0}},
        {{60000, 0}, {64000, 0}, {62000, 3000}},
    };
    const auto m = compute_metrics(log_from(frames, target), 100.0, 9000.0, target);
    CHECK(m.collision_indicator == 1);
    CHECK(m.disconnection_indicator == 1);
    CHECK(m.lambda2_min == 0.0);
    CHECK(m.ipm == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    const Vec2 c = centroid(frames[2]);
    CHECK(m.d_min_target == doctest::Approx(target.gap(c)));
    CHECK_FALSE(m.arrival_time.has_value());
    CHECK_THROWS_AS(compute_metrics(MissionLog{}, 100.0, 9000.0, target), DomainError);
}

TEST_CASE("batch aggregation matches hand statistics") {
    std::vector<std::pair<std::string, MetricsReport>> rs;
    const double ipm_b[] = {0.5, 0.25, 0.0, 1.0}, ipm_f[] = {0.0, 0.0, 0.125, 0.0};
    for (int k = 0; k < 4; ++k) {
        MetricsReport b{k % 2, 1, 0.5 * k, ipm_b[k], 1000.0 * k, std::nullopt};
        MetricsReport f{0, k == 3 ? 1 : 0, 2.0 + k, ipm_f[k], 2000.0 + k, std::nullopt};
        rs.emplace_back("baseline", b);
        rs.emplace_back("flocking", f);
    }
    const BatchReport r = aggregate_batch(rs);
    REQUIRE(r.rows.size() == 2);
    CHECK(r.rows[0].policy == "baseline");
    CHECK(r.rows[0].collision_rate == 0.5);
    CHECK(r.rows[0].disconnection_rate == 1.0);
    CHECK(r.rows[0].mean_ipm == doctest::Approx(0.4375).epsilon(1e-12));
    const double var = ((0.0625 * 0.0625) + (0.1875 * 0.1875) + (0.4375 * 0.4375) + (0.5625 * 0.5625)) / 3.0;
    CHECK(r.rows[0].sd_ipm == doctest::Approx(std::sqrt(var)).epsilon(1e-12));
    CHECK(r.rows[1].mean_lambda2_min == 3.5);
    CHECK(r.rows[1].mean_d_min == 2001.5);
    // Pairs ordered safer-first: flocking before baseline.
    REQUIRE(r.comparisons.size() == 5);
    CHECK(r.comparisons[0].policy_a == "flocking");
    CHECK(r.comparisons[0].metric == "collision");
    CHECK(r.comparisons[1].metric == "disconnection");
    CHECK(r.comparisons[1].test == "two_proportion_z");
    CHECK(r.comparisons[1].statistic > 0.0);
    CHECK(r.comparisons[2].metric == "ipm");
    CHECK(r.comparisons[2].test == "welch_t");
    CHECK(r.comparisons[2].statistic < 0.0);
}

TEST_CASE("single policy batches carry no tests") {
    std::vector<std::pair<std::string, MetricsReport>> rs{{"flocking", MetricsReport{}}};
    const BatchReport r = aggregate_batch(rs);
    CHECK(r.rows.size() == 1);
    CHECK(r.comparisons.empty());
}
