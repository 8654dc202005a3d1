#include <doctest.h>

#include "ncksim/codebook.hpp"
#include "ncksim/llr.hpp"

#include <cmath>
#include <random>

using namespace ncksim;

namespace {
const std::string kData = NCKSIM_DATA_DIR;
}

TEST_CASE("bundled codebooks load and are well formed")
{
    const Codebook cb4 = load_codebook(kData + "/codebook_4x6.json");
    CHECK(cb4.J == 6);
    CHECK(cb4.R == 4);
    CHECK(cb4.M == 4);
    CHECK(cb4.b == 2);
    CHECK(cb4.d_v == 2);
    CHECK(cb4.d_f == 3);

    const Codebook cb5 = load_codebook(kData + "/codebook_5x10.json");
    CHECK(cb5.J == 10);
    CHECK(cb5.R == 5);
    CHECK(cb5.d_f == 4);

    // Unit average energy per user.
    for (int j = 0; j < cb4.J; ++j) {
        double e = 0.0;
        for (int m = 0; m < cb4.M; ++m)
            for (int r = 0; r < cb4.R; ++r)
                e += std::norm(cb4.codewords[j][m][r]);
        CHECK(e / cb4.M == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("codebook validation rejects broken inputs")
{
    Codebook cb = load_codebook(kData + "/codebook_4x6.json");
    SUBCASE("sparsity violation")
    {
        int r0 = 0;
        while (cb.signature[r0][0])
            ++r0;
        cb.codewords[0][1][r0] = cplx{0.1, 0.0};
        CHECK_THROWS_AS(validate_codebook(cb), CodebookError);
    }
    SUBCASE("energy violation")
    {
        for (auto& cw : cb.codewords[2])
            for (auto& x : cw)
                x *= 1.01;
        CHECK_THROWS_AS(validate_codebook(cb), CodebookError);
    }
    SUBCASE("irregular signature")
    {
        cb.signature[0][0] = !cb.signature[0][0];
        CHECK_THROWS_AS(validate_codebook(cb), CodebookError);
    }
    SUBCASE("no overloading under strict validation")
    {
        Codebook toy = cb;
        toy.J = 2;
        toy.codewords.resize(2);
        for (auto& row : toy.signature)
            row.resize(2);
        CHECK_THROWS_AS(validate_codebook(toy, true), CodebookError);
    }
    SUBCASE("missing file")
    {
        CHECK_THROWS_AS(load_codebook(kData + "/no_such_codebook.json"), CodebookError);
    }
}

TEST_CASE("bit and symbol conversions are big endian")
{
    const std::uint8_t bits10[] = {1, 0};
    CHECK(bits_to_symbol(bits10) == 2);
    const std::uint8_t bits011[] = {0, 1, 1};
    CHECK(bits_to_symbol(bits011) == 3);
    std::uint8_t out[3];
    symbol_to_bits(5, 3, out);
    CHECK(out[0] == 1);
    CHECK(out[1] == 0);
    CHECK(out[2] == 1);
    CHECK(symbol_bit(2, 2, 0) == 1);
    CHECK(symbol_bit(2, 2, 1) == 0);
}

TEST_CASE("marginalize round trips with inverse_marginalize")
{
    const Codebook cb = load_codebook(kData + "/codebook_4x6.json");
    std::mt19937_64 gen(9);
    std::uniform_real_distribution<double> uni(-6.0, 6.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> llrs(cb.b);
        for (double& l : llrs)
            l = uni(gen);
        const auto probs = inverse_marginalize(cb, llrs);
        double sum = 0.0;
        for (double p : probs)
            sum += p;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        const auto back = marginalize(cb, probs);
        for (int i = 0; i < cb.b; ++i)
            CHECK(back[i] == doctest::Approx(llrs[i]).epsilon(1e-9));
    }
}

TEST_CASE("marginalize handles degenerate inputs")
{
    const Codebook cb = load_codebook(kData + "/codebook_4x6.json");
    std::vector<double> zeros(cb.M, 0.0);
    CHECK_THROWS_AS(marginalize(cb, zeros), CodebookError);

    // A single certain symbol saturates every bit LLR.
    std::vector<double> point(cb.M, 0.0);
    point[3] = 1.0;
    const auto llrs = marginalize(cb, point);
    for (int i = 0; i < cb.b; ++i)
        CHECK(llrs[i] == (symbol_bit(3, cb.b, i) ? -kLlrMax : kLlrMax));
}

TEST_CASE("symbol probability permutation flips bit LLR signs")
{
    const Codebook cb = load_codebook(kData + "/codebook_4x6.json");
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> uni(0.01, 1.0);
    std::vector<double> probs(cb.M);
    for (double& p : probs)
        p = uni(gen);
    const auto base = marginalize(cb, probs);
    for (int i = 0; i < cb.b; ++i) {
        // Swap symbols that differ only in bit i.
        std::vector<double> flipped(cb.M);
        const int mask = 1 << (cb.b - 1 - i);
        for (int m = 0; m < cb.M; ++m)
            flipped[m] = probs[m ^ mask];
        const auto got = marginalize(cb, flipped);
        for (int k = 0; k < cb.b; ++k)
            CHECK(got[k] == doctest::Approx(k == i ? -base[k] : base[k]).epsilon(1e-12));
    }
}

TEST_CASE("map_bits resolves codewords and validates length")
{
    const Codebook cb = load_codebook(kData + "/codebook_4x6.json");
    const std::uint8_t bits[] = {1, 1};
    auto cw = map_bits(cb, 2, bits);
    CHECK(cw.size() == static_cast<std::size_t>(cb.R));
    CHECK(cw.data() == cb.codewords[2][3].data());
    const std::uint8_t one_bit[] = {1};
    CHECK_THROWS_AS(map_bits(cb, 0, one_bit), CodebookError);
}
