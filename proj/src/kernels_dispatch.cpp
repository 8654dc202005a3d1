#include "ncksim/kernels.hpp"

#include <cstdlib>

namespace ncksim::kernels {

const Ops* avx2_ops_impl(); // defined in kernels_avx2.cpp

const Ops* avx2_ops()
{
#if defined(__x86_64__) || defined(_M_X64)
    if (__builtin_cpu_supports("avx2"))
        return avx2_ops_impl();
#endif
    return nullptr;
}

namespace {

const Ops* g_active = nullptr;

const Ops* pick()
{
    if (const char* env = std::getenv("NCKSIM_SIMD")) {
        std::string_view want(env);
        if (want == "scalar")
            return &scalar_ops();
        if (want == "avx2") {
            if (const Ops* ops = avx2_ops())
                return ops;
            return &scalar_ops();
        }
    }
    if (const Ops* ops = avx2_ops())
        return ops;
    return &scalar_ops();
}

} // namespace

const Ops& active()
{
    if (!g_active)
        g_active = pick();
    return *g_active;
}

bool select(std::string_view name)
{
    if (name == "scalar") {
        g_active = &scalar_ops();
        return true;
    }
    if (name == "avx2") {
        if (const Ops* ops = avx2_ops()) {
            g_active = ops;
            return true;
        }
        return false;
    }
    return false;
}

} // namespace ncksim::kernels
