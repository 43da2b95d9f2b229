#include <immintrin.h>

#include <cmath>
#include <cstddef>

/*
 * AVX2+FMA kernel variants.  This translation unit is compiled with
 * -mavx2 -mfma and must only be entered after the dispatcher has confirmed
 * cpuid support.
 */
namespace uflsim::kernels::detail {

double dot_avx2(const double* a, const double* b, std::size_t n)
{
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    __m256d acc2 = _mm256_setzero_pd();
    __m256d acc3 = _mm256_setzero_pd();

    std::size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i),
                               _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4),
                               _mm256_loadu_pd(b + i + 4), acc1);
        acc2 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 8),
                               _mm256_loadu_pd(b + i + 8), acc2);
        acc3 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 12),
                               _mm256_loadu_pd(b + i + 12), acc3);
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i),
                               _mm256_loadu_pd(b + i), acc0);
    }

    const __m256d acc = _mm256_add_pd(_mm256_add_pd(acc0, acc1),
                                      _mm256_add_pd(acc2, acc3));
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double sum = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);

    for (; i < n; ++i)
        sum += a[i] * b[i];
    return sum;
}

namespace {

// cos(x) for x in [0, pi/2] as a polynomial in x^2.  Taylor terms through
// x^20 leave a truncation error below 2e-17 on this range, well under the
// rounding noise of the evaluation itself.
inline __m256d cos_poly(__m256d z)
{
    const __m256d c20 = _mm256_set1_pd(4.110317623312165e-19);
    const __m256d c18 = _mm256_set1_pd(-1.5619206968586225e-16);
    const __m256d c16 = _mm256_set1_pd(4.779477332387385e-14);
    const __m256d c14 = _mm256_set1_pd(-1.1470745597729725e-11);
    const __m256d c12 = _mm256_set1_pd(2.08767569878681e-9);
    const __m256d c10 = _mm256_set1_pd(-2.7557319223985893e-7);
    const __m256d c8  = _mm256_set1_pd(2.48015873015873e-5);
    const __m256d c6  = _mm256_set1_pd(-1.3888888888888889e-3);
    const __m256d c4  = _mm256_set1_pd(4.1666666666666664e-2);
    const __m256d c2  = _mm256_set1_pd(-0.5);
    const __m256d c0  = _mm256_set1_pd(1.0);

    __m256d p = c20;
    p = _mm256_fmadd_pd(p, z, c18);
    p = _mm256_fmadd_pd(p, z, c16);
    p = _mm256_fmadd_pd(p, z, c14);
    p = _mm256_fmadd_pd(p, z, c12);
    p = _mm256_fmadd_pd(p, z, c10);
    p = _mm256_fmadd_pd(p, z, c8);
    p = _mm256_fmadd_pd(p, z, c6);
    p = _mm256_fmadd_pd(p, z, c4);
    p = _mm256_fmadd_pd(p, z, c2);
    p = _mm256_fmadd_pd(p, z, c0);
    return p;
}

}  // namespace

void cosine_cycles_avx2(const double* phase_cycles, double* out,
                        std::size_t n, double amplitude)
{
    const __m256d two_pi   = _mm256_set1_pd(6.283185307179586476925286766559);
    const __m256d half     = _mm256_set1_pd(0.5);
    const __m256d quarter  = _mm256_set1_pd(0.25);
    const __m256d amp      = _mm256_set1_pd(amplitude);
    const __m256d abs_mask = _mm256_castsi256_pd(
        _mm256_set1_epi64x(0x7fffffffffffffffLL));

    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d p = _mm256_loadu_pd(phase_cycles + i);
        // Reduce to r in [-0.5, 0.5] turns, then fold onto [0, 0.25] where
        // the polynomial argument stays within [0, pi/2]:
        //   cos(2*pi*t) = -cos(2*pi*(0.5 - t)) for t in (0.25, 0.5].
        const __m256d r = _mm256_sub_pd(
            p, _mm256_round_pd(p, _MM_FROUND_TO_NEAREST_INT |
                                      _MM_FROUND_NO_EXC));
        const __m256d t    = _mm256_and_pd(r, abs_mask);
        const __m256d flip = _mm256_cmp_pd(t, quarter, _CMP_GT_OQ);
        const __m256d tf   = _mm256_blendv_pd(t, _mm256_sub_pd(half, t), flip);
        const __m256d x    = _mm256_mul_pd(two_pi, tf);
        __m256d c = cos_poly(_mm256_mul_pd(x, x));
        c = _mm256_blendv_pd(c, _mm256_sub_pd(_mm256_setzero_pd(), c), flip);
        _mm256_storeu_pd(out + i, _mm256_mul_pd(amp, c));
    }

    constexpr double two_pi_s = 6.283185307179586476925286766559;
    for (; i < n; ++i) {
        const double r = phase_cycles[i] - std::nearbyint(phase_cycles[i]);
        out[i] = amplitude * std::cos(two_pi_s * r);
    }
}

}  // namespace uflsim::kernels::detail
