#pragma once

#include <span>
#include <vector>

#include "swarmsafe/core.hpp"
#include "swarmsafe/kernels.hpp"

namespace swarmsafe {

/// Tunables of the pairwise potential.
///
/// psi(z) = kappa r_com / (z (r_com - z))   for a connected pair (sigma = 1),
///        = sqrt(z - r_com + epsilon)       for a disconnected pair (sigma = 0).
/// The connected branch is a bowl with its minimum at r_com / 2 and poles at
/// 0 and r_com; the disconnected branch pulls separated agents back together.
struct PotentialParams {
    double kappa{2.0};
    double r_com{9000.0};
    double epsilon{300.0};
    /// Ceiling on |dpsi/dz| per pair and on psi itself near the poles.
    double grad_cap{1e6};
    /// Summed gradients below this norm produce a zero safety control.
    double zero_grad_tol{1e-12};
    /// psi is evaluated on distances expressed in this unit (metres per unit).
    /// Distances passed in and out stay in metres; psi values and gradient
    /// magnitudes are those of the rescaled problem.
    double length_unit{1.0};

    static PotentialParams from(const SimConfig& cfg);
    /// Throws ConfigError when an invariant is violated.
    void validate() const;
    /// Kernel parameters in potential units; positions must be scaled by 1 / length_unit.
    kernels::PairPotential pair() const { return {kappa, r_com / length_unit, epsilon / length_unit, grad_cap}; }
};

struct PsiValue {
    double value;
    bool clamped;  ///< the raw value exceeded grad_cap and was cut to it
};

/// Evaluates psi with clamping. Throws DomainError for z <= 0 and
/// InconsistentStateError when sigma and z disagree (sigma=1 with
/// z >= r_com, or sigma=0 with z < r_com - epsilon).
PsiValue psi_checked(double z, bool sigma, const PotentialParams& params);
inline double psi(double z, bool sigma, const PotentialParams& params) { return psi_checked(z, sigma, params).value; }

/// d psi / dz with z in potential units, unclamped.
double psi_derivative(double z, bool sigma, const PotentialParams& params);

/// Throws if any pair is coincident or its (sigma, distance) is inconsistent.
void check_pair_state(std::span<const Vec2> positions, const SigmaMatrix& sigma, const PotentialParams& params);

/// Sum over j != i of grad_{q_i} psi(|q_ij|), per-pair magnitude capped at grad_cap.
Vec2 grad_psi_agent(std::span<const Vec2> positions, const SigmaMatrix& sigma, const PotentialParams& params,
                    std::size_t i);

/// Gradients for all agents in one pass. Validates the state once.
std::vector<Vec2> grad_psi_all(std::span<const Vec2> positions, const SigmaMatrix& sigma,
                               const PotentialParams& params);

/// u_safe = -g / |g| * u_max, or zero when |g| < zero_grad_tol.
ControlInput safe_control_from_gradient(const Vec2& gradient, const PotentialParams& params, double u_max);

ControlInput safe_control(std::span<const Vec2> positions, const SigmaMatrix& sigma, const PotentialParams& params,
                          std::size_t i, double u_max);

/// Total tension energy H = 1/2 sum_i sum_{j != i} psi(|q_ij|).
double tension_energy(std::span<const Vec2> positions, const SigmaMatrix& sigma, const PotentialParams& params);

} // namespace swarmsafe
