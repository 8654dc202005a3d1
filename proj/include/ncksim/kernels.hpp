#pragma once

#include <cstddef>
#include <string_view>

// Data-parallel inner loops used by the detector. Each kernel has a scalar
// reference implementation and an AVX2 variant; the active set is chosen once
// at startup from CPUID (override with NCKSIM_SIMD=scalar|avx2).

namespace ncksim::kernels {

struct Ops {
    const char* name;
    // dst[i] += src[i]
    void (*add)(double* dst, const double* src, std::size_t n);
    // dst[i] = clamp(dst[i] + src[i], -clip, clip)
    void (*add_clipped)(double* dst, const double* src, std::size_t n, double clip);
    // dst[i] *= s
    void (*scale)(double* dst, std::size_t n, double s);
    double (*sum)(const double* src, std::size_t n);
    // out[i] = (yr - sr[i])^2 + (yi - si[i])^2
    void (*sq_dist)(double yr, double yi, const double* sr, const double* si,
                    double* out, std::size_t n);
};

const Ops& active();

// Testing hooks.
const Ops& scalar_ops();
const Ops* avx2_ops(); // nullptr when unsupported by the build or the CPU
bool select(std::string_view name);

} // namespace ncksim::kernels
