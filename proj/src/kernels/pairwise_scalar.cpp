#include <cmath>

#include "swarmsafe/kernels.hpp"

namespace swarmsafe::kernels::scalar {

void distance_row(Positions p, std::size_t i, std::span<double> out) {
    const double xi = p.x[i], yi = p.y[i];
    for (std::size_t j = 0; j < p.size(); ++j) {
        const double dx = xi - p.x[j];
        const double dy = yi - p.y[j];
        out[j] = std::sqrt(dx * dx + dy * dy);
    }
    out[i] = 0.0;
}

void gradient_row(Positions p, std::span<const std::uint8_t> sigma_row, std::size_t i, const PairPotential& pp,
                  std::span<double> gx, std::span<double> gy) {
    const double xi = p.x[i], yi = p.y[i];
    const double r = pp.r_com;
    const double kr = pp.kappa * r;
    const double shift = pp.epsilon - r;
    for (std::size_t j = 0; j < p.size(); ++j) {
        const double dx = xi - p.x[j];
        const double dy = yi - p.y[j];
        const double z = std::sqrt(dx * dx + dy * dy);
        double d;
        if (sigma_row[j] != 0) {
            const double a = z * (r - z);
            d = kr * (2.0 * z - r) / (a * a);
        } else {
            double s = z + shift;
            s = s > 0.0 ? s : 0.0;
            d = 1.0 / (2.0 * std::sqrt(s));
        }
        d = d < pp.cap ? d : pp.cap;
        d = d > -pp.cap ? d : -pp.cap;
        gx[j] = d * (dx / z);
        gy[j] = d * (dy / z);
    }
    gx[i] = 0.0;
    gy[i] = 0.0;
}

void psi_row(Positions p, std::span<const std::uint8_t> sigma_row, std::size_t i, const PairPotential& pp,
             std::span<double> out) {
    const double xi = p.x[i], yi = p.y[i];
    const double r = pp.r_com;
    const double kr = pp.kappa * r;
    const double shift = pp.epsilon - r;
    for (std::size_t j = 0; j < p.size(); ++j) {
        const double dx = xi - p.x[j];
        const double dy = yi - p.y[j];
        const double z = std::sqrt(dx * dx + dy * dy);
        double v;
        if (sigma_row[j] != 0) {
            v = kr / (z * (r - z));
        } else {
            double s = z + shift;
            s = s > 0.0 ? s : 0.0;
            v = std::sqrt(s);
        }
        out[j] = v < pp.cap ? v : pp.cap;
    }
    out[i] = 0.0;
}

} // namespace swarmsafe::kernels::scalar
