#include <doctest.h>

#include "ncksim/kernels.hpp"

#include <random>
#include <string>
#include <vector>

using namespace ncksim;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t seed)
{
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> uni(-50.0, 50.0);
    std::vector<double> v(n);
    for (double& x : v)
        x = uni(gen);
    return v;
}

} // namespace

TEST_CASE("scalar kernel semantics")
{
    const auto& ops = kernels::scalar_ops();
    std::vector<double> dst{1.0, -2.0, 3.0};
    std::vector<double> src{0.5, 0.5, -10.0};
    ops.add(dst.data(), src.data(), 3);
    CHECK(dst == std::vector<double>{1.5, -1.5, -7.0});

    dst = {39.5, -39.5, 0.0};
    src = {2.0, -2.0, 1.0};
    ops.add_clipped(dst.data(), src.data(), 3, 40.0);
    CHECK(dst == std::vector<double>{40.0, -40.0, 1.0});

    dst = {2.0, 4.0};
    ops.scale(dst.data(), 2, 0.5);
    CHECK(dst == std::vector<double>{1.0, 2.0});

    src = {1.0, 2.0, 3.0};
    CHECK(ops.sum(src.data(), 3) == doctest::Approx(6.0));

    std::vector<double> sr{1.0, 0.0}, si{0.0, 1.0}, out(2);
    ops.sq_dist(1.0, 1.0, sr.data(), si.data(), out.data(), 2);
    CHECK(out[0] == doctest::Approx(1.0));
    CHECK(out[1] == doctest::Approx(1.0));
}

TEST_CASE("avx2 kernels match scalar reference")
{
    const kernels::Ops* simd = kernels::avx2_ops();
    if (!simd) {
        MESSAGE("AVX2 unavailable; equivalence check skipped");
        return;
    }
    const auto& ref = kernels::scalar_ops();
    // Odd lengths exercise the vector tail handling.
    for (std::size_t n : {1u, 3u, 4u, 7u, 8u, 33u, 257u}) {
        auto a = random_vec(n, 11 * n + 1);
        auto b = random_vec(n, 13 * n + 2);

        auto d1 = a, d2 = a;
        ref.add(d1.data(), b.data(), n);
        simd->add(d2.data(), b.data(), n);
        CHECK(d1 == d2);

        d1 = a;
        d2 = a;
        ref.add_clipped(d1.data(), b.data(), n, 40.0);
        simd->add_clipped(d2.data(), b.data(), n, 40.0);
        CHECK(d1 == d2);

        d1 = a;
        d2 = a;
        ref.scale(d1.data(), n, 0.3125);
        simd->scale(d2.data(), n, 0.3125);
        CHECK(d1 == d2);

        CHECK(ref.sum(a.data(), n) == doctest::Approx(simd->sum(a.data(), n)).epsilon(1e-12));

        std::vector<double> o1(n), o2(n);
        ref.sq_dist(0.7, -1.3, a.data(), b.data(), o1.data(), n);
        simd->sq_dist(0.7, -1.3, a.data(), b.data(), o2.data(), n);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(o1[i] == doctest::Approx(o2[i]).epsilon(1e-13));
    }
}

TEST_CASE("kernel selection")
{
    const std::string before = kernels::active().name;
    CHECK(kernels::select("scalar"));
    CHECK(std::string(kernels::active().name) == "scalar");
    CHECK_FALSE(kernels::select("no-such-backend"));
    if (kernels::avx2_ops()) {
        CHECK(kernels::select("avx2"));
        CHECK(std::string(kernels::active().name) == "avx2");
    }
    kernels::select(before);
}
