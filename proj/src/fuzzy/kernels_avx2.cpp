// Functions carry target attributes so that inline library code instantiated
// here stays baseline x86-64. Only reached after a runtime CPU check.
#include "subaudit/fuzzy/kernels.hpp"

#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))

#include <immintrin.h>

namespace subaudit::fuzzy::kernels {

#define SUBAUDIT_AVX2 __attribute__((target("avx2,fma")))

namespace {

SUBAUDIT_AVX2 void sample_trapezoid(double a, double b, double c, double d, std::span<const double> xs, std::span<double> out) {
    const std::size_t n = xs.size();
    const __m256d va = _mm256_set1_pd(a);
    const __m256d vb = _mm256_set1_pd(b);
    const __m256d vc = _mm256_set1_pd(c);
    const __m256d vd = _mm256_set1_pd(d);
    const __m256d rise_den = _mm256_set1_pd(b - a);
    const __m256d fall_den = _mm256_set1_pd(d - c);
    const __m256d one = _mm256_set1_pd(1.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d x = _mm256_loadu_pd(xs.data() + i);
        const __m256d plateau = _mm256_and_pd(_mm256_cmp_pd(x, vb, _CMP_GE_OQ), _mm256_cmp_pd(x, vc, _CMP_LE_OQ));
        const __m256d rising = _mm256_and_pd(_mm256_cmp_pd(x, va, _CMP_GT_OQ), _mm256_cmp_pd(x, vb, _CMP_LT_OQ));
        const __m256d falling = _mm256_and_pd(_mm256_cmp_pd(x, vc, _CMP_GT_OQ), _mm256_cmp_pd(x, vd, _CMP_LT_OQ));
        // Masked-out lanes may divide by zero; blending discards them.
        const __m256d up = _mm256_div_pd(_mm256_sub_pd(x, va), rise_den);
        const __m256d down = _mm256_div_pd(_mm256_sub_pd(vd, x), fall_den);
        __m256d mu = _mm256_setzero_pd();
        mu = _mm256_blendv_pd(mu, up, rising);
        mu = _mm256_blendv_pd(mu, down, falling);
        mu = _mm256_blendv_pd(mu, one, plateau);
        _mm256_storeu_pd(out.data() + i, mu);
    }
    if (i < n) scalar().sample_trapezoid(a, b, c, d, xs.subspan(i), out.subspan(i));
}

SUBAUDIT_AVX2 void clip_max(std::span<const double> term, double strength, std::span<double> acc) {
    const std::size_t n = term.size();
    const __m256d s = _mm256_set1_pd(strength);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d t = _mm256_min_pd(_mm256_loadu_pd(term.data() + i), s);
        _mm256_storeu_pd(acc.data() + i, _mm256_max_pd(_mm256_loadu_pd(acc.data() + i), t));
    }
    for (; i < n; ++i) {
        const double t = term[i] < strength ? term[i] : strength;
        acc[i] = acc[i] < t ? t : acc[i];
    }
}

SUBAUDIT_AVX2 double horizontal_sum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

SUBAUDIT_AVX2 Moments centroid_moments(std::span<const double> xs, std::span<const double> mu) {
    const std::size_t n = xs.size();
    if (n < 2) return scalar().centroid_moments(xs, mu);
    __m256d first0 = _mm256_setzero_pd(), first1 = _mm256_setzero_pd();
    __m256d mass0 = _mm256_setzero_pd(), mass1 = _mm256_setzero_pd();
    std::size_t i = 1;
    const std::size_t last = n - 1;  // interior is [1, last)
    for (; i + 8 <= last; i += 8) {
        const __m256d m0 = _mm256_loadu_pd(mu.data() + i);
        const __m256d m1 = _mm256_loadu_pd(mu.data() + i + 4);
        first0 = _mm256_fmadd_pd(_mm256_loadu_pd(xs.data() + i), m0, first0);
        first1 = _mm256_fmadd_pd(_mm256_loadu_pd(xs.data() + i + 4), m1, first1);
        mass0 = _mm256_add_pd(mass0, m0);
        mass1 = _mm256_add_pd(mass1, m1);
    }
    Moments m{horizontal_sum(_mm256_add_pd(first0, first1)), horizontal_sum(_mm256_add_pd(mass0, mass1))};
    for (; i < last; ++i) {
        m.first += xs[i] * mu[i];
        m.mass += mu[i];
    }
    m.first += 0.5 * (xs[0] * mu[0] + xs[last] * mu[last]);
    m.mass += 0.5 * (mu[0] + mu[last]);
    return m;
}

}  // namespace

const KernelTable* avx2_table() {
    static const KernelTable table{"avx2", &sample_trapezoid, &clip_max, &centroid_moments};
    return &table;
}

}  // namespace subaudit::fuzzy::kernels

#else

namespace subaudit::fuzzy::kernels {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace subaudit::fuzzy::kernels

#endif
