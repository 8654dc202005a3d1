#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ncksim/llr.hpp" // soft_xor lives with the LLR helpers

namespace ncksim {

struct ScheduleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Layout { TypeA, TypeB, TypeC, KScma };

Layout layout_from_string(const std::string& s);
std::string to_string(Layout l);

// Resolved (K_eq, T, K_in) triple. Pairs are ordered lexicographically so the
// codeword-offset maps are deterministic.
struct NckConfig {
    int K_eq = 0;
    int T = 0;
    int K_in = 0;
    int K_nc = 0;
    int W = 0;
    int N_R = 0;
    double N_R_bar = 0.0;
    std::vector<std::pair<int, int>> pairs; // Xi, 0-based packet indices
    int N = 0; // coded bits per packet, multiple of b
    int b = 0;
    int L = 0; // SCMA codewords per packet, N / b
};

// Validates and resolves the scheme triple. T = 1 is the plain K-SCMA
// degenerate case (requires K_in = K_eq). Infeasible triples (non-integer or
// negative K_nc) throw.
NckConfig derive_config(int K_eq, int T, int K_in, int N_bits, int bits_per_symbol);

struct Slot {
    enum class Kind { Initial, Coded };
    Kind kind;
    int index; // packet t (Initial) or pair w (Coded), 0-based
    int rep;   // k_in or k_nc, 0-based
    int offset; // codeword base offset l1 / l2 for this slot
};

struct Schedule {
    std::vector<Slot> slots;              // transmission order, N_R entries
    std::vector<int> feedback_points;     // TTI indices after which feedback applies
};

Schedule build_schedule(const NckConfig& cfg, Layout layout);

std::vector<std::uint8_t> xor_packets(std::span<const std::uint8_t> a,
                                      std::span<const std::uint8_t> b);

} // namespace ncksim
