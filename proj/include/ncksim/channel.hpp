#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "ncksim/codebook.hpp"

namespace ncksim {

struct ChannelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Named, counter-derived RNG stream. Streams built from the same id tuple are
// identical; unrelated tuples are decorrelated by splitmix64 mixing, so trial
// results do not depend on execution order.
class RngStream {
public:
    RngStream(std::uint64_t master, std::uint64_t a = 0, std::uint64_t b = 0,
              std::uint64_t c = 0);

    std::mt19937_64& gen() { return gen_; }
    double gauss() { return normal_(gen_); }
    cplx cgauss(double variance); // circularly-symmetric complex Gaussian
    std::uint64_t uniform_u64() { return gen_(); }

    static std::uint64_t mix(std::uint64_t a, std::uint64_t b);

private:
    std::mt19937_64 gen_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

enum class Fading { RayleighIid, BlockPerTti, AwgnUnit };

Fading fading_from_string(const std::string& s);
std::string to_string(Fading f);

enum class SnrConvention { EsN0, EbN0 };

SnrConvention snr_convention_from_string(const std::string& s);
std::string to_string(SnrConvention c);

// h indexed [codeword slot l][user j][resource r]; entries are zero where the
// user's signature is zero.
struct ChannelRealization {
    int num_slots = 0;
    int J = 0;
    int R = 0;
    std::vector<cplx> h; // flattened (l * J + j) * R + r
    double n0 = 0.0;

    cplx at(int l, int j, int r) const
    {
        return h[(static_cast<std::size_t>(l) * J + j) * R + r];
    }
};

struct ReceivedBlock {
    int num_slots = 0;
    int R = 0;
    std::vector<cplx> y; // flattened l * R + r

    cplx at(int l, int r) const { return y[static_cast<std::size_t>(l) * R + r]; }
};

// num_slots counts SCMA codeword slots (N_R * L); slots_per_tti = L groups
// them for the block fading mode.
ChannelRealization sample_channel(const Codebook& cb, int num_slots, int slots_per_tti,
                                  Fading fading, double n0, RngStream& rng);

// codewords[l][j] is user j's transmitted R-vector in slot l (resolved from
// the codebook); superimposes per resource and adds complex noise of
// variance n0.
ReceivedBlock transmit(const Codebook& cb,
                       const std::vector<std::vector<std::vector<cplx>>>& codewords,
                       const ChannelRealization& ch, RngStream& rng);

double snr_to_n0(double snr_db, SnrConvention conv, double ldpc_rate, int bits_per_symbol);

} // namespace ncksim
