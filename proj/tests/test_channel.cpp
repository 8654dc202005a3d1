#include <doctest.h>

#include "ncksim/channel.hpp"

#include <cmath>

using namespace ncksim;

namespace {
const std::string kData = NCKSIM_DATA_DIR;
}

TEST_CASE("rng streams are deterministic and decorrelated")
{
    RngStream a(42, 1, 2), b(42, 1, 2), c(42, 1, 3);
    CHECK(a.uniform_u64() == b.uniform_u64());
    CHECK(a.gauss() == b.gauss());
    RngStream a2(42, 1, 2);
    bool differs = false;
    for (int i = 0; i < 8; ++i)
        differs |= a2.uniform_u64() != c.uniform_u64();
    CHECK(differs);
    CHECK(RngStream::mix(1, 2) != RngStream::mix(2, 1));
}

TEST_CASE("complex gaussian has the requested variance")
{
    RngStream rng(7);
    const double var = 0.25;
    double acc = 0.0;
    cplx mean{};
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const cplx z = rng.cgauss(var);
        acc += std::norm(z);
        mean += z;
    }
    CHECK(acc / n == doctest::Approx(var).epsilon(0.02));
    CHECK(std::abs(mean) / n < 0.01);
}

TEST_CASE("channel realizations respect the signature and fading mode")
{
    const Codebook cb = load_codebook(kData + "/codebook_4x6.json");
    RngStream rng(3);

    SUBCASE("awgn_unit pins every occupied gain to one")
    {
        auto ch = sample_channel(cb, 6, 3, Fading::AwgnUnit, 0.1, rng);
        CHECK(ch.num_slots == 6);
        CHECK(ch.n0 == 0.1);
        for (int l = 0; l < 6; ++l)
            for (int j = 0; j < cb.J; ++j)
                for (int r = 0; r < cb.R; ++r)
                    CHECK(ch.at(l, j, r) == (cb.signature[r][j] ? cplx{1, 0} : cplx{}));
    }

    SUBCASE("rayleigh_iid draws unit-power gains, zero off signature")
    {
        auto ch = sample_channel(cb, 400, 1, Fading::RayleighIid, 1.0, rng);
        double p = 0.0;
        int cnt = 0;
        for (int l = 0; l < 400; ++l)
            for (int j = 0; j < cb.J; ++j)
                for (int r = 0; r < cb.R; ++r) {
                    if (!cb.signature[r][j]) {
                        CHECK(ch.at(l, j, r) == cplx{});
                    } else {
                        p += std::norm(ch.at(l, j, r));
                        ++cnt;
                    }
                }
        CHECK(p / cnt == doctest::Approx(1.0).epsilon(0.05));
    }

    SUBCASE("block fading repeats gains within a TTI and redraws across TTIs")
    {
        auto ch = sample_channel(cb, 12, 4, Fading::BlockPerTti, 1.0, rng);
        for (int tti = 0; tti < 3; ++tti)
            for (int p = 1; p < 4; ++p)
                CHECK(ch.at(4 * tti + p, 0, cb.user_resources[0][0]) ==
                      ch.at(4 * tti, 0, cb.user_resources[0][0]));
        CHECK(ch.at(0, 0, cb.user_resources[0][0]) !=
              ch.at(4, 0, cb.user_resources[0][0]));
    }
}

TEST_CASE("transmit superimposes users and adds noise of variance n0")
{
    const Codebook cb = load_codebook(kData + "/codebook_4x6.json");
    const int slots = 2000;
    RngStream ch_rng(5), noise_rng(6);
    auto ch = sample_channel(cb, slots, 1, Fading::AwgnUnit, 0.04, ch_rng);

    std::vector<std::vector<std::vector<cplx>>> cws(slots,
                                                    std::vector<std::vector<cplx>>(cb.J));
    for (int l = 0; l < slots; ++l)
        for (int j = 0; j < cb.J; ++j)
            cws[l][j].assign(cb.codewords[j][0].begin(), cb.codewords[j][0].end());

    auto rx = transmit(cb, cws, ch, noise_rng);
    CHECK(rx.num_slots == slots);

    // Expected noise power around the deterministic superposition.
    cplx clean[8];
    for (int r = 0; r < cb.R; ++r) {
        clean[r] = {};
        for (int j = 0; j < cb.J; ++j)
            clean[r] += cb.codewords[j][0][r];
    }
    double p = 0.0;
    for (int l = 0; l < slots; ++l)
        for (int r = 0; r < cb.R; ++r)
            p += std::norm(rx.at(l, r) - clean[r]);
    CHECK(p / (slots * cb.R) == doctest::Approx(0.04).epsilon(0.05));
}

TEST_CASE("snr conversion")
{
    CHECK(snr_to_n0(0.0, SnrConvention::EsN0, 0.5, 2) == doctest::Approx(1.0));
    CHECK(snr_to_n0(10.0, SnrConvention::EsN0, 0.5, 2) == doctest::Approx(0.1));
    CHECK(snr_to_n0(-3.0, SnrConvention::EsN0, 0.5, 2) ==
          doctest::Approx(std::pow(10.0, 0.3)));
    // Eb/N0 shifts by rate * bits per symbol: Es = Eb * r * b.
    CHECK(snr_to_n0(0.0, SnrConvention::EbN0, 0.5, 2) == doctest::Approx(1.0));
    CHECK(snr_to_n0(0.0, SnrConvention::EbN0, 0.25, 2) == doctest::Approx(2.0));
}

TEST_CASE("fading and convention strings round trip")
{
    for (auto f : {Fading::RayleighIid, Fading::BlockPerTti, Fading::AwgnUnit})
        CHECK(fading_from_string(to_string(f)) == f);
    CHECK_THROWS_AS(fading_from_string("what"), ChannelError);
    for (auto c : {SnrConvention::EsN0, SnrConvention::EbN0})
        CHECK(snr_convention_from_string(to_string(c)) == c);
    CHECK_THROWS_AS(snr_convention_from_string("what"), ChannelError);
}
