// AVX2 variants. This translation unit is compiled with -mavx2; it must only
// be entered after a runtime CPUID check (see kernels_dispatch.cpp).

#include "ncksim/kernels.hpp"

#if defined(__AVX2__)

#include <immintrin.h>

#include <algorithm>

namespace ncksim::kernels {
namespace {

void add_avx2(double* dst, const double* src, std::size_t n)
{
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_loadu_pd(dst + i);
        __m256d s = _mm256_loadu_pd(src + i);
        _mm256_storeu_pd(dst + i, _mm256_add_pd(d, s));
    }
    for (; i < n; ++i)
        dst[i] += src[i];
}

void add_clipped_avx2(double* dst, const double* src, std::size_t n, double clip)
{
    const __m256d hi = _mm256_set1_pd(clip);
    const __m256d lo = _mm256_set1_pd(-clip);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_add_pd(_mm256_loadu_pd(dst + i), _mm256_loadu_pd(src + i));
        v = _mm256_min_pd(_mm256_max_pd(v, lo), hi);
        _mm256_storeu_pd(dst + i, v);
    }
    for (; i < n; ++i)
        dst[i] = std::clamp(dst[i] + src[i], -clip, clip);
}

void scale_avx2(double* dst, std::size_t n, double s)
{
    const __m256d f = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(dst + i, _mm256_mul_pd(_mm256_loadu_pd(dst + i), f));
    for (; i < n; ++i)
        dst[i] *= s;
}

double sum_avx2(const double* src, std::size_t n)
{
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_add_pd(acc, _mm256_loadu_pd(src + i));
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; i < n; ++i)
        total += src[i];
    return total;
}

void sq_dist_avx2(double yr, double yi, const double* sr, const double* si,
                  double* out, std::size_t n)
{
    const __m256d vr = _mm256_set1_pd(yr);
    const __m256d vi = _mm256_set1_pd(yi);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d dr = _mm256_sub_pd(vr, _mm256_loadu_pd(sr + i));
        __m256d di = _mm256_sub_pd(vi, _mm256_loadu_pd(si + i));
        _mm256_storeu_pd(out + i,
                         _mm256_add_pd(_mm256_mul_pd(dr, dr), _mm256_mul_pd(di, di)));
    }
    for (; i < n; ++i) {
        double dr = yr - sr[i];
        double di = yi - si[i];
        out[i] = dr * dr + di * di;
    }
}

} // namespace

const Ops* avx2_ops_impl()
{
    static const Ops ops{"avx2", add_avx2, add_clipped_avx2, scale_avx2, sum_avx2, sq_dist_avx2};
    return &ops;
}

} // namespace ncksim::kernels

#else

namespace ncksim::kernels {
const Ops* avx2_ops_impl() { return nullptr; }
} // namespace ncksim::kernels

#endif
