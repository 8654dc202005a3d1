#pragma once

#include <algorithm>
#include <cmath>

namespace ncksim {

// Saturation for every bit-LLR produced by a domain conversion. 40 puts the
// corresponding probability below double-precision noise.
inline constexpr double kLlrMax = 40.0;

// tanh/atanh guards for the soft-XOR / check-node product.
inline constexpr double kTanhArgMax = 19.0;
inline constexpr double kAtanhArgMax = 1.0 - 1e-12;

inline double clip_llr(double l) { return std::clamp(l, -kLlrMax, kLlrMax); }

inline double clipped_tanh_half(double l)
{
    return std::tanh(std::clamp(l, -2.0 * kTanhArgMax, 2.0 * kTanhArgMax) / 2.0);
}

// L1 [+] L2 = 2 atanh(tanh(L1/2) tanh(L2/2)), the LLR of b1 XOR b2.
inline double soft_xor(double l1, double l2)
{
    double p = clipped_tanh_half(l1) * clipped_tanh_half(l2);
    p = std::clamp(p, -kAtanhArgMax, kAtanhArgMax);
    return 2.0 * std::atanh(p);
}

// P(bit = 0 | L) with the convention L = log(P0/P1).
inline double prob_bit0(double llr)
{
    return 1.0 / (1.0 + std::exp(-llr));
}

// Hard decision: L >= 0 -> bit 0.
inline int hard_bit(double llr) { return llr >= 0.0 ? 0 : 1; }

} // namespace ncksim
