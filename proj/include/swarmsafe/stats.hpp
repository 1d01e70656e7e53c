#pragma once

#include <span>

namespace swarmsafe::stats {

/// log10 of the standard normal upper tail P(Z >= z). Uses erfc for
/// |z| <= 8 and an asymptotic series beyond, so results stay finite far past
/// double underflow.
double log10_normal_upper_tail(double z);

/// Regularized incomplete beta I_x(a, b) via Lentz's continued fraction.
double incomplete_beta(double a, double b, double x);

/// Student t cumulative distribution P(T <= t) for `df` degrees of freedom (df > 0, real).
double student_t_cdf(double t, double df);

struct ZTestResult {
    double z;                  ///< (p2 - p1) / pooled standard error
    double log10_p_one_sided;  ///< H_A: p1 < p2
};

/// One-sided two-sample test of proportions with pooled variance.
/// Throws DomainError unless 0 <= k <= n and n >= 1 for both groups.
ZTestResult two_proportion_z_test(long k1, long n1, long k2, long n2);

struct WelchResult {
    double t;            ///< (mean_a - mean_b) / se
    double df;           ///< Welch-Satterthwaite
    double p_one_sided;  ///< H_A: mean_a < mean_b
};

/// Per-sample variances below this floor are raised to it.
inline constexpr double kVarianceFloor = 1e-12;

/// Welch's unequal-variance t test. Throws DomainError for samples smaller than 2.
WelchResult welch_t_test(std::span<const double> a, std::span<const double> b);

double mean(std::span<const double> xs);
/// Sample variance (n - 1); 0 for fewer than 2 values.
double variance(std::span<const double> xs);
/// Sample standard deviation (n - 1); 0 for fewer than 2 values.
double stddev(std::span<const double> xs);

} // namespace swarmsafe::stats
