#pragma once

// Data-parallel pairwise kernels behind the potential, graph and energy code.
//
// Every kernel fills one row i of a pairwise quantity: entry j holds the
// value for the pair (i, j) and entry i is 0. Summation over j is left to the
// caller so that each backend produces bit-identical per-pair values and the
// reductions happen in one fixed order.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace swarmsafe::kernels {

enum class Backend { scalar, avx2 };

std::string_view to_string(Backend b);

/// Parameters of the pair potential as seen by the kernels.
struct PairPotential {
    double kappa;
    double r_com;
    double epsilon;
    double cap;  ///< per-pair ceiling for |dpsi/dz| and for psi itself
};

/// Structure-of-arrays view of agent positions.
struct Positions {
    std::span<const double> x;
    std::span<const double> y;
    std::size_t size() const { return x.size(); }
};

/// out[j] = |q_i - q_j|.
using DistanceRowFn = void (*)(Positions, std::size_t i, std::span<double> out);

/// gx[j], gy[j] = capped dpsi/dz(|q_ij|, sigma_ij) * (q_i - q_j) / |q_ij|.
/// sigma=1 uses the connected branch, sigma=0 the square-root branch with its
/// argument floored at 0. Coincident pairs are the caller's responsibility.
using GradientRowFn = void (*)(Positions, std::span<const std::uint8_t> sigma_row, std::size_t i,
                               const PairPotential&, std::span<double> gx, std::span<double> gy);

/// out[j] = min(psi(|q_ij|, sigma_ij), cap).
using PsiRowFn = void (*)(Positions, std::span<const std::uint8_t> sigma_row, std::size_t i,
                          const PairPotential&, std::span<double> out);

struct KernelTable {
    Backend backend;
    DistanceRowFn distance_row;
    GradientRowFn gradient_row;
    PsiRowFn psi_row;
};

namespace scalar {
void distance_row(Positions p, std::size_t i, std::span<double> out);
void gradient_row(Positions p, std::span<const std::uint8_t> sigma_row, std::size_t i, const PairPotential& pp,
                  std::span<double> gx, std::span<double> gy);
void psi_row(Positions p, std::span<const std::uint8_t> sigma_row, std::size_t i, const PairPotential& pp,
             std::span<double> out);
} // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
void distance_row(Positions p, std::size_t i, std::span<double> out);
void gradient_row(Positions p, std::span<const std::uint8_t> sigma_row, std::size_t i, const PairPotential& pp,
                  std::span<double> gx, std::span<double> gy);
void psi_row(Positions p, std::span<const std::uint8_t> sigma_row, std::size_t i, const PairPotential& pp,
             std::span<double> out);
} // namespace avx2
#endif

/// True when the backend is compiled in and the running CPU supports it.
bool available(Backend b);

/// Table for a specific backend. Throws Error if it is not available.
const KernelTable& table(Backend b);

/// The table in use. Chosen once: the SWARMSAFE_KERNELS environment variable
/// (scalar | avx2 | auto) if set, otherwise the widest available backend.
const KernelTable& active();

/// Overrides the active backend for the rest of the process.
void select(Backend b);

} // namespace swarmsafe::kernels
