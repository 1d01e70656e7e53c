#include "swarmsafe/potential.hpp"

#include <cmath>
#include <string>

#include "swarmsafe/commgraph.hpp"

namespace swarmsafe {

PotentialParams PotentialParams::from(const SimConfig& cfg) {
    PotentialParams p;
    p.kappa = cfg.kappa;
    p.r_com = cfg.r_com;
    p.epsilon = cfg.epsilon;
    p.length_unit = cfg.psi_length_unit;
    return p;
}

void PotentialParams::validate() const {
    if (!(kappa > 0.0)) throw ConfigError("kappa must be positive");
    if (!(r_com > 0.0)) throw ConfigError("r_com must be positive");
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    if (!(epsilon < r_com)) throw ConfigError("epsilon must be < r_com");
    if (!(length_unit > 0.0) || !std::isfinite(length_unit)) throw ConfigError("length_unit must be positive");
    if (!(grad_cap > 0.0)) throw ConfigError("grad_cap must be positive");
    if (!(zero_grad_tol >= 0.0)) throw ConfigError("zero_grad_tol must be non-negative");
}

namespace {

void check_consistent(double z, bool sigma, const PotentialParams& p) {
    if (!(z > 0.0) || !std::isfinite(z)) throw DomainError("pair distance must be positive and finite, got " + fmt_sig9(z));
    if (sigma && z >= p.r_com)
        throw InconsistentStateError("connected pair at distance " + fmt_sig9(z) + " >= r_com");
    if (!sigma && z < p.r_com - p.epsilon)
        throw InconsistentStateError("disconnected pair at distance " + fmt_sig9(z) + " < r_com - epsilon");
}

} // namespace

PsiValue psi_checked(double z, bool sigma, const PotentialParams& params) {
    check_consistent(z, sigma, params);
    const double u = params.length_unit;
    const double zs = z / u, r = params.r_com / u, e = params.epsilon / u;
    const double raw = sigma ? params.kappa * r / (zs * (r - zs)) : std::sqrt(zs - r + e);
    if (raw > params.grad_cap) return {params.grad_cap, true};
    return {raw, false};
}

double psi_derivative(double z, bool sigma, const PotentialParams& params) {
    check_consistent(z, sigma, params);
    const double u = params.length_unit;
    const double zs = z / u, r = params.r_com / u, e = params.epsilon / u;
    if (sigma) {
        const double a = zs * (r - zs);
        return params.kappa * r * (2.0 * zs - r) / (a * a);
    }
    return 1.0 / (2.0 * std::sqrt(zs - r + e));
}

void check_pair_state(std::span<const Vec2> positions, const SigmaMatrix& sigma, const PotentialParams& params) {
    const std::size_t n = positions.size();
    if (sigma.size() != n) throw DomainError("sigma size does not match agent count");
    const DenseMatrix d = pairwise_distances(positions);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (d(i, j) == 0.0)
                throw DegenerateGeometryError("agents " + std::to_string(i) + " and " + std::to_string(j) +
                                              " are coincident");
            check_consistent(d(i, j), sigma.get(i, j), params);
        }
}

namespace {

struct SoA {
    std::vector<double> x, y;
    SoA(std::span<const Vec2> positions, double unit) : x(positions.size()), y(positions.size()) {
        for (std::size_t k = 0; k < positions.size(); ++k) {
            x[k] = positions[k].x / unit;
            y[k] = positions[k].y / unit;
        }
    }
    kernels::Positions view() const { return {x, y}; }
};

Vec2 gradient_row_sum(const SoA& soa, const SigmaMatrix& sigma, const PotentialParams& params, std::size_t i,
                      std::vector<double>& gx, std::vector<double>& gy) {
    const auto pair = params.pair();
    kernels::active().gradient_row(soa.view(), sigma.row(i), i, pair, gx, gy);
    Vec2 g{};
    for (std::size_t j = 0; j < gx.size(); ++j) {
        g.x += gx[j];
        g.y += gy[j];
    }
    return g;
}

} // namespace

Vec2 grad_psi_agent(std::span<const Vec2> positions, const SigmaMatrix& sigma, const PotentialParams& params,
                    std::size_t i) {
    check_pair_state(positions, sigma, params);
    const SoA soa(positions, params.length_unit);
    std::vector<double> gx(positions.size()), gy(positions.size());
    return gradient_row_sum(soa, sigma, params, i, gx, gy);
}

std::vector<Vec2> grad_psi_all(std::span<const Vec2> positions, const SigmaMatrix& sigma,
                               const PotentialParams& params) {
    check_pair_state(positions, sigma, params);
    const SoA soa(positions, params.length_unit);
    std::vector<double> gx(positions.size()), gy(positions.size());
    std::vector<Vec2> out(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) out[i] = gradient_row_sum(soa, sigma, params, i, gx, gy);
    return out;
}

ControlInput safe_control_from_gradient(const Vec2& gradient, const PotentialParams& params, double u_max) {
    const double norm = gradient.norm();
    if (!(norm >= params.zero_grad_tol) || norm == 0.0) return {};
    return {gradient * (-u_max / norm)};
}

ControlInput safe_control(std::span<const Vec2> positions, const SigmaMatrix& sigma, const PotentialParams& params,
                          std::size_t i, double u_max) {
    return safe_control_from_gradient(grad_psi_agent(positions, sigma, params, i), params, u_max);
}

double tension_energy(std::span<const Vec2> positions, const SigmaMatrix& sigma, const PotentialParams& params) {
    check_pair_state(positions, sigma, params);
    const SoA soa(positions, params.length_unit);
    const auto pair = params.pair();
    std::vector<double> row(positions.size());
    double total = 0.0;
    for (std::size_t i = 0; i < positions.size(); ++i) {
        kernels::active().psi_row(soa.view(), sigma.row(i), i, pair, row);
        for (double v : row) total += v;
    }
    return 0.5 * total;
}

} // namespace swarmsafe
