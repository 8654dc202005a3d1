#include "ncksim/kernels.hpp"

#include <algorithm>

namespace ncksim::kernels {
namespace {

void add_ref(double* dst, const double* src, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i)
        dst[i] += src[i];
}

void add_clipped_ref(double* dst, const double* src, std::size_t n, double clip)
{
    for (std::size_t i = 0; i < n; ++i)
        dst[i] = std::clamp(dst[i] + src[i], -clip, clip);
}

void scale_ref(double* dst, std::size_t n, double s)
{
    for (std::size_t i = 0; i < n; ++i)
        dst[i] *= s;
}

double sum_ref(const double* src, std::size_t n)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        acc += src[i];
    return acc;
}

void sq_dist_ref(double yr, double yi, const double* sr, const double* si,
                 double* out, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i) {
        double dr = yr - sr[i];
        double di = yi - si[i];
        out[i] = dr * dr + di * di;
    }
}

} // namespace

const Ops& scalar_ops()
{
    static const Ops ops{"scalar", add_ref, add_clipped_ref, scale_ref, sum_ref, sq_dist_ref};
    return ops;
}

} // namespace ncksim::kernels
