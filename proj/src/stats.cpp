#include "swarmsafe/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "swarmsafe/errors.hpp"

namespace swarmsafe::stats {

namespace {

constexpr double kLn10 = std::numbers::ln10;

// ln P(Z >= z) for large positive z:
//   phi(z)/z * (1 - 1/z^2 + 3/z^4 - 15/z^6 + ...)
// truncated once terms stop shrinking.
double ln_upper_tail_asymptotic(double z) {
    const double z2 = z * z;
    double term = 1.0, series = 1.0;
    for (int k = 1; k < 30; ++k) {
        const double next = -term * (2.0 * k - 1.0) / z2;
        if (std::abs(next) >= std::abs(term)) break;
        term = next;
        series += term;
        if (std::abs(term) < 1e-17) break;
    }
    return -0.5 * z2 - std::log(z) - 0.5 * std::log(2.0 * std::numbers::pi) + std::log(series);
}

} // namespace

double log10_normal_upper_tail(double z) {
    if (std::isnan(z)) throw DomainError("z must not be NaN");
    if (z > 8.0) return ln_upper_tail_asymptotic(z) / kLn10;
    if (z < -8.0) {
        // 1 - tiny: log1p keeps the tiny lower tail.
        const double lower = std::exp(ln_upper_tail_asymptotic(-z));
        return std::log1p(-lower) / kLn10;
    }
    return std::log10(0.5 * std::erfc(z / std::numbers::sqrt2));
}

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("incomplete beta needs a, b > 0");
    if (x < 0.0 || x > 1.0 || std::isnan(x)) throw DomainError("incomplete beta needs x in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    // Continued fraction converges fastest for x < (a + 1) / (a + b + 2).
    if (x > (a + 1.0) / (a + b + 2.0)) return 1.0 - incomplete_beta(b, a, 1.0 - x);

    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                            b * std::log1p(-x);
    constexpr double tiny = 1e-300;
    double c = 1.0;
    double d = 1.0 - (a + b) * x / (a + 1.0);
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 500; ++m) {
        const double m2 = 2.0 * m;
        double num = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
        d = 1.0 + num * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + num / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        num = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0));
        d = 1.0 + num * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + num / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(ln_front) * h / a;
}

double student_t_cdf(double t, double df) {
    if (!(df > 0.0)) throw DomainError("degrees of freedom must be positive");
    if (std::isnan(t)) throw DomainError("t must not be NaN");
    if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
    const double x = df / (df + t * t);
    const double tail = 0.5 * incomplete_beta(0.5 * df, 0.5, x);
    return t > 0.0 ? 1.0 - tail : tail;
}

ZTestResult two_proportion_z_test(long k1, long n1, long k2, long n2) {
    if (n1 < 1 || n2 < 1) throw DomainError("both groups need at least one trial");
    if (k1 < 0 || k1 > n1 || k2 < 0 || k2 > n2) throw DomainError("successes must lie in [0, n]");
    const double p1 = static_cast<double>(k1) / static_cast<double>(n1);
    const double p2 = static_cast<double>(k2) / static_cast<double>(n2);
    const double pooled = static_cast<double>(k1 + k2) / static_cast<double>(n1 + n2);
    const double se = std::sqrt(pooled * (1.0 - pooled) * (1.0 / static_cast<double>(n1) + 1.0 / static_cast<double>(n2)));
    const double z = se > 0.0 ? (p2 - p1) / se : 0.0;
    return {z, log10_normal_upper_tail(z)};
}

double mean(std::span<const double> xs) {
    if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double variance(std::span<const double> xs) {
    if (xs.size() < 2) return 0.0;
    const double m = mean(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return s / static_cast<double>(xs.size() - 1);
}

double stddev(std::span<const double> xs) { return std::sqrt(variance(xs)); }

WelchResult welch_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) throw DomainError("Welch test needs at least 2 values per sample");
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    const double va = std::max(kVarianceFloor, variance(a));
    const double vb = std::max(kVarianceFloor, variance(b));
    const double sa = va / na, sb = vb / nb;
    const double t = (mean(a) - mean(b)) / std::sqrt(sa + sb);
    const double df = (sa + sb) * (sa + sb) / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
    return {t, df, student_t_cdf(t, df)};
}

} // namespace swarmsafe::stats
