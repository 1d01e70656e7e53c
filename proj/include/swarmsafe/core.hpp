#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "swarmsafe/errors.hpp"

namespace swarmsafe {

/// Planar vector in meters (positions) or m/s (velocities). x east, y north.
struct Vec2 {
    double x{0.0};
    double y{0.0};

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2 operator+(const Vec2& r) const { return {x + r.x, y + r.y}; }
    constexpr Vec2 operator-(const Vec2& r) const { return {x - r.x, y - r.y}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
    constexpr Vec2& operator+=(const Vec2& r) { x += r.x; y += r.y; return *this; }
    constexpr Vec2& operator-=(const Vec2& r) { x -= r.x; y -= r.y; return *this; }
    constexpr Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
    constexpr bool operator==(const Vec2&) const = default;

    constexpr double dot(const Vec2& r) const { return x * r.x + y * r.y; }
    double norm() const { return std::sqrt(x * x + y * y); }
    bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

constexpr Vec2 operator*(double s, const Vec2& v) { return v * s; }

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

/// Rotate counter-clockwise by `angle` radians.
inline Vec2 rotated(const Vec2& v, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

/// Thrust command of one agent, m/s. Bounded by u_max.
struct ControlInput {
    Vec2 vector{};

    constexpr bool operator==(const ControlInput&) const = default;
    double norm() const { return vector.norm(); }
};

/// Dense row-major matrix of doubles.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static DenseMatrix square(std::size_t n, double fill = 0.0) { return DenseMatrix(n, n, fill); }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> data() const { return data_; }

    bool is_symmetric(double tol = 0.0) const;
    bool operator==(const DenseMatrix&) const = default;

private:
    std::size_t rows_{0};
    std::size_t cols_{0};
    std::vector<double> data_;
};

/// Symmetric binary N x N matrix with zero diagonal. The tag keeps the
/// hysteresis state and the raw disk graph from being mixed up.
template <class Tag>
class BinaryMatrix {
public:
    BinaryMatrix() = default;
    explicit BinaryMatrix(std::size_t n) : n_(n), data_(n * n, 0) {}

    std::size_t size() const { return n_; }
    bool get(std::size_t i, std::size_t j) const { return data_[i * n_ + j] != 0; }
    /// Sets both (i,j) and (j,i). Diagonal writes are ignored.
    void set(std::size_t i, std::size_t j, bool v) {
        if (i == j) return;
        data_[i * n_ + j] = v ? 1 : 0;
        data_[j * n_ + i] = v ? 1 : 0;
    }
    std::span<const std::uint8_t> row(std::size_t i) const { return {data_.data() + i * n_, n_}; }
    std::span<const std::uint8_t> data() const { return data_; }

    std::size_t degree(std::size_t i) const {
        std::size_t d = 0;
        for (auto v : row(i)) d += v;
        return d;
    }
    std::size_t edge_count() const {
        std::size_t e = 0;
        for (auto v : data_) e += v;
        return e / 2;
    }
    bool operator==(const BinaryMatrix&) const = default;

private:
    std::size_t n_{0};
    std::vector<std::uint8_t> data_;
};

using SigmaMatrix = BinaryMatrix<struct SigmaTag>;
using AdjacencyMatrix = BinaryMatrix<struct AdjacencyTag>;

struct AgentState {
    std::size_t id{0};
    Vec2 position{};
};

/// Positions of all agents at one instant plus the persistent hysteresis edge state.
struct SwarmState {
    double time{0.0};
    std::vector<Vec2> positions;
    SigmaMatrix sigma;

    std::size_t size() const { return positions.size(); }
    AgentState agent(std::size_t i) const { return {i, positions[i]}; }
    /// Throws ConfigError when N < 2, sizes disagree, or a position is non-finite.
    void check() const;
};

enum class Integrator { euler, rk4 };

std::string to_string(Integrator integrator);
Integrator integrator_from_string(const std::string& name);

/// All scalar tunables of a simulation run. SI units.
struct SimConfig {
    int n_agents{30};
    double u_max{0.1};
    double r_com{9000.0};
    double r_coll{100.0};
    double epsilon{300.0};
    double kappa{2.0};
    /// Length unit, in metres, in which the controller evaluates psi and its gradient.
    double psi_length_unit{1000.0};
    double rho{2.0};
    double dt{600.0};
    double timeout{144.0 * 3600.0};
    double target_radius{11100.0};
    Integrator integrator{Integrator::rk4};

    bool operator==(const SimConfig&) const = default;
};

/// Returns `raw` unchanged iff every invariant holds; otherwise throws
/// ConfigError naming the offending field.
SimConfig validate_config(const SimConfig& raw);

/// Rounds to 9 significant digits. All numeric output goes through this so
/// files are byte-stable across platforms.
double round_sig9(double v);
/// `%.9g` rendering used in CSV output.
std::string fmt_sig9(double v);

/// Centroid of a non-empty point set.
Vec2 centroid(std::span<const Vec2> points);

} // namespace swarmsafe
