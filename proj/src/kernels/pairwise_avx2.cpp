#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cstring>

#include "swarmsafe/kernels.hpp"

// Four pairs per iteration. Each lane performs the same IEEE operations in
// the same order as the scalar kernel, so results match bit for bit; the
// remainder of a row is delegated to the scalar loop body.

#define SWARMSAFE_AVX2 __attribute__((target("avx2")))

namespace swarmsafe::kernels::avx2 {

namespace {

SWARMSAFE_AVX2 inline __m256d load_sigma_mask(const std::uint8_t* s) {
    std::int32_t packed;
    std::memcpy(&packed, s, sizeof packed);
    const __m128i bytes = _mm_cvtsi32_si128(packed);
    const __m256d as_double = _mm256_cvtepi32_pd(_mm_cvtepu8_epi32(bytes));
    return _mm256_cmp_pd(as_double, _mm256_setzero_pd(), _CMP_NEQ_UQ);
}

} // namespace

SWARMSAFE_AVX2 void distance_row(Positions p, std::size_t i, std::span<double> out) {
    const std::size_t n = p.size();
    const __m256d xi = _mm256_set1_pd(p.x[i]);
    const __m256d yi = _mm256_set1_pd(p.y[i]);
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        const __m256d dx = _mm256_sub_pd(xi, _mm256_loadu_pd(p.x.data() + j));
        const __m256d dy = _mm256_sub_pd(yi, _mm256_loadu_pd(p.y.data() + j));
        const __m256d z = _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)));
        _mm256_storeu_pd(out.data() + j, z);
    }
    for (; j < n; ++j) {
        const double ddx = p.x[i] - p.x[j];
        const double ddy = p.y[i] - p.y[j];
        out[j] = __builtin_sqrt(ddx * ddx + ddy * ddy);
    }
    out[i] = 0.0;
}

SWARMSAFE_AVX2 void gradient_row(Positions p, std::span<const std::uint8_t> sigma_row, std::size_t i,
                                 const PairPotential& pp, std::span<double> gx, std::span<double> gy) {
    const std::size_t n = p.size();
    const double r_s = pp.r_com;
    const __m256d xi = _mm256_set1_pd(p.x[i]);
    const __m256d yi = _mm256_set1_pd(p.y[i]);
    const __m256d r = _mm256_set1_pd(r_s);
    const __m256d kr = _mm256_set1_pd(pp.kappa * r_s);
    const __m256d shift = _mm256_set1_pd(pp.epsilon - r_s);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d cap = _mm256_set1_pd(pp.cap);
    const __m256d neg_cap = _mm256_set1_pd(-pp.cap);

    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        const __m256d dx = _mm256_sub_pd(xi, _mm256_loadu_pd(p.x.data() + j));
        const __m256d dy = _mm256_sub_pd(yi, _mm256_loadu_pd(p.y.data() + j));
        const __m256d z = _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)));

        const __m256d a = _mm256_mul_pd(z, _mm256_sub_pd(r, z));
        const __m256d connected =
            _mm256_div_pd(_mm256_mul_pd(kr, _mm256_sub_pd(_mm256_mul_pd(two, z), r)), _mm256_mul_pd(a, a));

        const __m256d s = _mm256_max_pd(_mm256_add_pd(z, shift), zero);
        const __m256d disconnected = _mm256_div_pd(one, _mm256_mul_pd(two, _mm256_sqrt_pd(s)));

        __m256d d = _mm256_blendv_pd(disconnected, connected, load_sigma_mask(sigma_row.data() + j));
        d = _mm256_min_pd(d, cap);
        d = _mm256_max_pd(d, neg_cap);

        _mm256_storeu_pd(gx.data() + j, _mm256_mul_pd(d, _mm256_div_pd(dx, z)));
        _mm256_storeu_pd(gy.data() + j, _mm256_mul_pd(d, _mm256_div_pd(dy, z)));
    }
    if (j < n) {
        const double xs = p.x[i], ys = p.y[i];
        const double krs = pp.kappa * r_s;
        const double shs = pp.epsilon - r_s;
        for (; j < n; ++j) {
            const double ddx = xs - p.x[j];
            const double ddy = ys - p.y[j];
            const double zz = __builtin_sqrt(ddx * ddx + ddy * ddy);
            double d;
            if (sigma_row[j] != 0) {
                const double aa = zz * (r_s - zz);
                d = krs * (2.0 * zz - r_s) / (aa * aa);
            } else {
                double ss = zz + shs;
                ss = ss > 0.0 ? ss : 0.0;
                d = 1.0 / (2.0 * __builtin_sqrt(ss));
            }
            d = d < pp.cap ? d : pp.cap;
            d = d > -pp.cap ? d : -pp.cap;
            gx[j] = d * (ddx / zz);
            gy[j] = d * (ddy / zz);
        }
    }
    gx[i] = 0.0;
    gy[i] = 0.0;
}

SWARMSAFE_AVX2 void psi_row(Positions p, std::span<const std::uint8_t> sigma_row, std::size_t i,
                            const PairPotential& pp, std::span<double> out) {
    const std::size_t n = p.size();
    const double r_s = pp.r_com;
    const __m256d xi = _mm256_set1_pd(p.x[i]);
    const __m256d yi = _mm256_set1_pd(p.y[i]);
    const __m256d r = _mm256_set1_pd(r_s);
    const __m256d kr = _mm256_set1_pd(pp.kappa * r_s);
    const __m256d shift = _mm256_set1_pd(pp.epsilon - r_s);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d cap = _mm256_set1_pd(pp.cap);

    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        const __m256d dx = _mm256_sub_pd(xi, _mm256_loadu_pd(p.x.data() + j));
        const __m256d dy = _mm256_sub_pd(yi, _mm256_loadu_pd(p.y.data() + j));
        const __m256d z = _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)));
        const __m256d connected = _mm256_div_pd(kr, _mm256_mul_pd(z, _mm256_sub_pd(r, z)));
        const __m256d disconnected = _mm256_sqrt_pd(_mm256_max_pd(_mm256_add_pd(z, shift), zero));
        const __m256d v = _mm256_blendv_pd(disconnected, connected, load_sigma_mask(sigma_row.data() + j));
        _mm256_storeu_pd(out.data() + j, _mm256_min_pd(v, cap));
    }
    if (j < n) {
        const double xs = p.x[i], ys = p.y[i];
        const double krs = pp.kappa * r_s;
        const double shs = pp.epsilon - r_s;
        for (; j < n; ++j) {
            const double ddx = xs - p.x[j];
            const double ddy = ys - p.y[j];
            const double zz = __builtin_sqrt(ddx * ddx + ddy * ddy);
            double v;
            if (sigma_row[j] != 0) {
                v = krs / (zz * (r_s - zz));
            } else {
                double ss = zz + shs;
                ss = ss > 0.0 ? ss : 0.0;
                v = __builtin_sqrt(ss);
            }
            out[j] = v < pp.cap ? v : pp.cap;
        }
    }
    out[i] = 0.0;
}

} // namespace swarmsafe::kernels::avx2

#endif
