#pragma once

#include <span>
#include <vector>

#include "swarmsafe/core.hpp"
#include "swarmsafe/potential.hpp"

namespace swarmsafe {

struct LisicParams {
    /// Saturation offset of the safety activation; larger means later activation.
    double rho{2.0};
};

/// c1 weighs the safety control, c2 = 1 - c1 the performance control.
struct BlendWeights {
    double c1{0.0};
    double c2{1.0};
};

/// Logistic safety activation c1 = 1 / (1 + exp(rho - g)). Algebraically the
/// two-way softmax of (g, rho) but free of overflow for large g.
/// Throws DomainError for negative or non-finite g.
BlendWeights alpha_weight(double grad_norm, const LisicParams& params);

/// u = c1 u_safe + c2 u_perf. Throws DomainError when the weights are not a
/// convex pair.
ControlInput blend(const ControlInput& u_perf, const ControlInput& u_safe, const BlendWeights& weights);

struct LisicOutput {
    std::vector<ControlInput> controls;
    std::vector<BlendWeights> weights;
    std::vector<double> grad_norms;
};

/// Per agent: g_i = |grad psi_i|, u_i = blend(u_perf_i, u_safe_i, alpha(g_i)).
LisicOutput lisic_policy(const SwarmState& swarm, std::span<const ControlInput> u_perf,
                         const PotentialParams& pot, const LisicParams& lisic, double u_max);

} // namespace swarmsafe
