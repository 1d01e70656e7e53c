#include "swarmsafe/core.hpp"

#include <cstdio>
#include <cstdlib>

namespace swarmsafe {

bool DenseMatrix::is_symmetric(double tol) const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i + 1; j < cols_; ++j)
            if (!(std::abs((*this)(i, j) - (*this)(j, i)) <= tol)) return false;
    return true;
}

void SwarmState::check() const {
    if (positions.size() < 2) throw ConfigError("swarm must have at least 2 agents");
    if (sigma.size() != positions.size())
        throw ConfigError("sigma size " + std::to_string(sigma.size()) + " does not match agent count " +
                          std::to_string(positions.size()));
    for (const auto& p : positions)
        if (!p.finite()) throw DomainError("non-finite agent position");
}

std::string to_string(Integrator integrator) {
    return integrator == Integrator::euler ? "euler" : "rk4";
}

Integrator integrator_from_string(const std::string& name) {
    if (name == "euler") return Integrator::euler;
    if (name == "rk4") return Integrator::rk4;
    throw ConfigError("integrator must be one of {euler, rk4}, got '" + name + "'");
}

namespace {

void require_positive(double v, const char* field) {
    if (!std::isfinite(v)) throw ConfigError(std::string(field) + " must be finite");
    if (!(v > 0.0)) throw ConfigError(std::string(field) + " must be positive");
}

} // namespace

SimConfig validate_config(const SimConfig& raw) {
    if (raw.n_agents < 2) throw ConfigError("n_agents must be at least 2");
    require_positive(raw.u_max, "u_max");
    require_positive(raw.r_com, "r_com");
    require_positive(raw.r_coll, "r_coll");
    require_positive(raw.epsilon, "epsilon");
    require_positive(raw.kappa, "kappa");
    require_positive(raw.psi_length_unit, "psi_length_unit");
    require_positive(raw.dt, "dt");
    require_positive(raw.timeout, "timeout");
    require_positive(raw.target_radius, "target_radius");
    if (!std::isfinite(raw.rho) || raw.rho < 0.0) throw ConfigError("rho must be non-negative");
    if (!(raw.r_coll < raw.r_com)) throw ConfigError("r_coll must be < r_com");
    if (!(raw.epsilon < raw.r_com)) throw ConfigError("epsilon must be < r_com");
    return raw;
}

double round_sig9(double v) {
    if (!std::isfinite(v) || v == 0.0) return v;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return std::strtod(buf, nullptr);
}

std::string fmt_sig9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

Vec2 centroid(std::span<const Vec2> points) {
    Vec2 c{};
    for (const auto& p : points) c += p;
    return c / static_cast<double>(points.size());
}

} // namespace swarmsafe
