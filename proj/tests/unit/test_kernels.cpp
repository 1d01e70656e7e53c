#include <doctest.h>

#include <cstring>
#include <vector>

#include "swarmsafe/kernels.hpp"
#include "swarmsafe/missions.hpp"

using namespace swarmsafe;
namespace k = swarmsafe::kernels;

namespace {

bool same_bits(std::span<const double> a, std::span<const double> b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

} // namespace

TEST_CASE("vector kernels reproduce the scalar reference bit for bit") {
    if (!k::available(k::Backend::avx2)) {
        MESSAGE("AVX2 not available on this CPU; equivalence not exercised");
        return;
    }
    const auto& s = k::table(k::Backend::scalar);
    const auto& v = k::table(k::Backend::avx2);
    Rng rng(11);
    const k::PairPotential pp{2.0, 9.0, 0.3, 1e6};
    for (std::size_t n = 1; n <= 19; ++n) {
        for (int rep = 0; rep < 20; ++rep) {
            std::vector<double> x(n), y(n);
            std::vector<std::uint8_t> sigma(n);
            for (std::size_t j = 0; j < n; ++j) {
                x[j] = rng.uniform(-8.0, 8.0);
                y[j] = rng.uniform(-8.0, 8.0);
                sigma[j] = rng.uniform() < 0.5 ? 1 : 0;
            }
            // Include near-pole pairs so the clamp paths run.
            if (n > 2) {
                x[1] = x[0] + 1e-9;
                y[1] = y[0];
            }
            const k::Positions p{x, y};
            for (std::size_t i = 0; i < n; ++i) {
                std::vector<double> a(n), b(n), ax(n), ay(n), bx(n), by(n);
                s.distance_row(p, i, a);
                v.distance_row(p, i, b);
                CHECK(same_bits(a, b));
                s.gradient_row(p, sigma, i, pp, ax, ay);
                v.gradient_row(p, sigma, i, pp, bx, by);
                CHECK(same_bits(ax, bx));
                CHECK(same_bits(ay, by));
                s.psi_row(p, sigma, i, pp, a);
                v.psi_row(p, sigma, i, pp, b);
                CHECK(same_bits(a, b));
            }
        }
    }
}

TEST_CASE("rows zero their own entry") {
    const auto& s = k::table(k::Backend::scalar);
    std::vector<double> x{0.0, 3.0}, y{0.0, 4.0}, out(2, -1.0);
    s.distance_row({x, y}, 1, out);
    CHECK(out[0] == 5.0);
    CHECK(out[1] == 0.0);
}

TEST_CASE("backend selection") {
    CHECK(k::available(k::Backend::scalar));
    CHECK(k::to_string(k::Backend::scalar) == "scalar");
    const auto before = k::active().backend;
    k::select(k::Backend::scalar);
    CHECK(k::active().backend == k::Backend::scalar);
    k::select(before);
}
