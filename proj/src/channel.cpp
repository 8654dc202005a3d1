#include "ncksim/channel.hpp"

#include <cmath>

namespace ncksim {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

std::uint64_t RngStream::mix(std::uint64_t a, std::uint64_t b)
{
    return splitmix64(splitmix64(a) ^ (b * 0xd1342543de82ef95ULL + 1));
}

RngStream::RngStream(std::uint64_t master, std::uint64_t a, std::uint64_t b, std::uint64_t c)
    : gen_(mix(mix(mix(master, a), b), c))
{
}

cplx RngStream::cgauss(double variance)
{
    double s = std::sqrt(variance / 2.0);
    double re = normal_(gen_) * s;
    double im = normal_(gen_) * s;
    return {re, im};
}

Fading fading_from_string(const std::string& s)
{
    if (s == "rayleigh_iid")
        return Fading::RayleighIid;
    if (s == "block_per_tti")
        return Fading::BlockPerTti;
    if (s == "awgn_unit")
        return Fading::AwgnUnit;
    throw ChannelError("unknown fading model: " + s);
}

std::string to_string(Fading f)
{
    switch (f) {
    case Fading::RayleighIid: return "rayleigh_iid";
    case Fading::BlockPerTti: return "block_per_tti";
    case Fading::AwgnUnit: return "awgn_unit";
    }
    return "?";
}

SnrConvention snr_convention_from_string(const std::string& s)
{
    if (s == "es_n0")
        return SnrConvention::EsN0;
    if (s == "eb_n0")
        return SnrConvention::EbN0;
    throw ChannelError("unknown SNR convention: " + s);
}

std::string to_string(SnrConvention c)
{
    return c == SnrConvention::EsN0 ? "es_n0" : "eb_n0";
}

ChannelRealization sample_channel(const Codebook& cb, int num_slots, int slots_per_tti,
                                  Fading fading, double n0, RngStream& rng)
{
    if (num_slots <= 0 || slots_per_tti <= 0)
        throw ChannelError("sample_channel: invalid dimensions");

    ChannelRealization ch;
    ch.num_slots = num_slots;
    ch.J = cb.J;
    ch.R = cb.R;
    ch.n0 = n0;
    ch.h.assign(static_cast<std::size_t>(num_slots) * cb.J * cb.R, cplx{});

    auto put = [&](int l, int j, int r, cplx v) {
        ch.h[(static_cast<std::size_t>(l) * cb.J + j) * cb.R + r] = v;
    };

    switch (fading) {
    case Fading::AwgnUnit:
        for (int l = 0; l < num_slots; ++l)
            for (int j = 0; j < cb.J; ++j)
                for (int r : cb.user_resources[j])
                    put(l, j, r, cplx{1.0, 0.0});
        break;
    case Fading::RayleighIid:
        for (int l = 0; l < num_slots; ++l)
            for (int j = 0; j < cb.J; ++j)
                for (int r : cb.user_resources[j])
                    put(l, j, r, rng.cgauss(1.0));
        break;
    case Fading::BlockPerTti:
        for (int l0 = 0; l0 < num_slots; l0 += slots_per_tti) {
            for (int j = 0; j < cb.J; ++j)
                for (int r : cb.user_resources[j]) {
                    cplx v = rng.cgauss(1.0);
                    for (int l = l0; l < std::min(l0 + slots_per_tti, num_slots); ++l)
                        put(l, j, r, v);
                }
        }
        break;
    }
    return ch;
}

ReceivedBlock transmit(const Codebook& cb,
                       const std::vector<std::vector<std::vector<cplx>>>& codewords,
                       const ChannelRealization& ch, RngStream& rng)
{
    if (static_cast<int>(codewords.size()) != ch.num_slots)
        throw ChannelError("transmit: slot count mismatch");

    ReceivedBlock rx;
    rx.num_slots = ch.num_slots;
    rx.R = cb.R;
    rx.y.assign(static_cast<std::size_t>(ch.num_slots) * cb.R, cplx{});

    for (int l = 0; l < ch.num_slots; ++l) {
        if (static_cast<int>(codewords[l].size()) != cb.J)
            throw ChannelError("transmit: user count mismatch at slot " + std::to_string(l));
        for (int r = 0; r < cb.R; ++r) {
            cplx acc{};
            for (int j : cb.resource_users[r])
                acc += ch.at(l, j, r) * codewords[l][j][r];
            if (ch.n0 > 0.0)
                acc += rng.cgauss(ch.n0);
            rx.y[static_cast<std::size_t>(l) * cb.R + r] = acc;
        }
    }
    return rx;
}

double snr_to_n0(double snr_db, SnrConvention conv, double ldpc_rate, int bits_per_symbol)
{
    double n0 = std::pow(10.0, -snr_db / 10.0);
    if (conv == SnrConvention::EbN0)
        n0 /= ldpc_rate * bits_per_symbol;
    return n0;
}

} // namespace ncksim

