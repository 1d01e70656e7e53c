#include "swarmsafe/lisic.hpp"

#include <algorithm>
#include <cmath>

namespace swarmsafe {

BlendWeights alpha_weight(double grad_norm, const LisicParams& params) {
    if (!std::isfinite(grad_norm) || grad_norm < 0.0)
        throw DomainError("gradient norm must be finite and non-negative, got " + fmt_sig9(grad_norm));
    if (!std::isfinite(params.rho) || params.rho < 0.0) throw ConfigError("rho must be non-negative");
    const double c1 = 1.0 / (1.0 + std::exp(params.rho - grad_norm));
    return {c1, 1.0 - c1};
}

ControlInput blend(const ControlInput& u_perf, const ControlInput& u_safe, const BlendWeights& w) {
    if (!(w.c1 >= 0.0 && w.c1 <= 1.0 && w.c2 >= 0.0 && w.c2 <= 1.0) || std::abs(w.c1 + w.c2 - 1.0) > 1e-15)
        throw DomainError("blend weights must be in [0,1] and sum to 1, got c1=" + fmt_sig9(w.c1) +
                          " c2=" + fmt_sig9(w.c2));
    const ControlInput u{u_safe.vector * w.c1 + u_perf.vector * w.c2};
    // Convexity bound; a few ulps of slack for the two products and the sum.
    const double bound = std::max(u_perf.norm(), u_safe.norm());
    if (u.norm() > bound * (1.0 + 1e-12) + 1e-300)
        throw DomainError("blended control exceeds the convex bound");
    return u;
}

LisicOutput lisic_policy(const SwarmState& swarm, std::span<const ControlInput> u_perf,
                         const PotentialParams& pot, const LisicParams& lisic, double u_max) {
    const std::size_t n = swarm.size();
    if (u_perf.size() != n) throw DomainError("one performance control per agent is required");
    const auto grads = grad_psi_all(swarm.positions, swarm.sigma, pot);
    LisicOutput out;
    out.controls.resize(n);
    out.weights.resize(n);
    out.grad_norms.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double g = grads[i].norm();
        out.grad_norms[i] = g;
        out.weights[i] = alpha_weight(g, lisic);
        out.controls[i] = blend(u_perf[i], safe_control_from_gradient(grads[i], pot, u_max), out.weights[i]);
    }
    return out;
}

} // namespace swarmsafe
