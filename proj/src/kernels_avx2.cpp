#include "artforge/kernels.hpp"

#ifdef ARTFORGE_HAVE_AVX2_LANE

#include <immintrin.h>

#include <limits>

// Compiled with -mavx2 -ffp-contract=off. Reductions keep four independent
// accumulators (one vector register) and fold them in a fixed order, so the
// result is deterministic for a given input on this lane.

namespace artforge::kern::avx2 {

namespace {

inline double hadd(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d pair = _mm_add_pd(lo, hi);  // {v0+v2, v1+v3}
    return _mm_cvtsd_f64(pair) + _mm_cvtsd_f64(_mm_unpackhi_pd(pair, pair));
}

}  // namespace

double sum(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    double s = hadd(acc);
    for (; i < n; ++i) s += x[i];
    return s;
}

void minmax(const double* x, std::size_t n, double& mn, double& mx) {
    mn = std::numeric_limits<double>::infinity();
    mx = -std::numeric_limits<double>::infinity();
    std::size_t i = 0;
    if (n >= 4) {
        __m256d vmn = _mm256_loadu_pd(x);
        __m256d vmx = vmn;
        for (i = 4; i + 4 <= n; i += 4) {
            const __m256d v = _mm256_loadu_pd(x + i);
            vmn = _mm256_min_pd(vmn, v);
            vmx = _mm256_max_pd(vmx, v);
        }
        alignas(32) double lanes[4];
        _mm256_store_pd(lanes, vmn);
        for (double v : lanes)
            if (v < mn) mn = v;
        _mm256_store_pd(lanes, vmx);
        for (double v : lanes)
            if (v > mx) mx = v;
    }
    for (; i < n; ++i) {
        if (x[i] < mn) mn = x[i];
        if (x[i] > mx) mx = x[i];
    }
}

double sum_sq_dev(const double* x, std::size_t n, double mean) {
    const __m256d vm = _mm256_set1_pd(mean);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), vm);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
    }
    double s = hadd(acc);
    for (; i < n; ++i) {
        const double d = x[i] - mean;
        s += d * d;
    }
    return s;
}

double squared_distance(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
    }
    double s = hadd(acc);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

void accumulate(double* acc, const double* x, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(acc + i,
                         _mm256_add_pd(_mm256_loadu_pd(acc + i), _mm256_loadu_pd(x + i)));
    }
    for (; i < n; ++i) acc[i] += x[i];
}

void scale_shift(double* x, const double* shift, const double* scale, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(shift + i));
        _mm256_storeu_pd(x + i, _mm256_mul_pd(v, _mm256_loadu_pd(scale + i)));
    }
    for (; i < n; ++i) x[i] = (x[i] - shift[i]) * scale[i];
}

void lerp(double* dst, const double* a, const double* b, double t, std::size_t n) {
    const __m256d vt = _mm256_set1_pd(t);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d va = _mm256_loadu_pd(a + i);
        const __m256d vd = _mm256_sub_pd(_mm256_loadu_pd(b + i), va);
        _mm256_storeu_pd(dst + i, _mm256_add_pd(va, _mm256_mul_pd(vt, vd)));
    }
    for (; i < n; ++i) dst[i] = a[i] + t * (b[i] - a[i]);
}

}  // namespace artforge::kern::avx2

#endif  // ARTFORGE_HAVE_AVX2_LANE
