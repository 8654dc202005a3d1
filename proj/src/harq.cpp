#include "ncksim/harq.hpp"

#include <algorithm>
#include <numeric>

namespace ncksim {

NcnCase classify_case(std::span<const std::uint8_t> packet_failed, bool first_round)
{
    if (first_round)
        return NcnCase::AllSuccess;
    bool any_fail = false, any_ok = false;
    for (auto f : packet_failed)
        (f ? any_fail : any_ok) = true;
    if (!any_fail)
        return NcnCase::AllSuccess;
    if (!any_ok)
        return NcnCase::AllFail;
    return NcnCase::PartialFail;
}

std::vector<int> make_interleaver(int n, std::uint64_t seed)
{
    std::vector<int> pi(n);
    std::iota(pi.begin(), pi.end(), 0);
    std::mt19937_64 gen(seed);
    std::shuffle(pi.begin(), pi.end(), gen);
    return pi;
}

void update_buffers(SoftBuffer& buffers, const RoundResult& evidence,
                    std::span<const std::uint8_t> packet_pending,
                    std::span<const std::uint8_t> packet_refilled,
                    const NckConfig& cfg, int J)
{
    for (int j = 0; j < J; ++j) {
        for (int t = 0; t < cfg.T; ++t) {
            const int k = j * cfg.T + t;
            auto& f = buffers.initial[k];
            auto& prev = buffers.initial_prev[k];
            const auto& ev = evidence.evidence_initial[k];
            for (int i = 0; i < cfg.N; ++i)
                prev[i] = std::clamp(f[i] + ev[i], -kLlrMax, kLlrMax);
            if (packet_refilled[k])
                std::fill(f.begin(), f.end(), 0.0);
            else if (packet_pending[k])
                f = prev;
        }
        for (int w = 0; w < cfg.W; ++w) {
            const int kw = j * cfg.W + w;
            const auto [ta, tb] = cfg.pairs[w];
            auto& f = buffers.coded[kw];
            auto& prev = buffers.coded_prev[kw];
            const auto& ev = evidence.evidence_coded[kw];
            for (int i = 0; i < cfg.N; ++i)
                prev[i] = std::clamp(f[i] + ev[i], -kLlrMax, kLlrMax);
            // The pair restarts whenever either member is a fresh packet.
            if (packet_refilled[j * cfg.T + ta] || packet_refilled[j * cfg.T + tb])
                std::fill(f.begin(), f.end(), 0.0);
            else
                f = prev;
        }
    }
}

HarqController::HarqController(const Codebook& cb, const LdpcCode& code, const NckConfig& cfg,
                               const Schedule& sched, const JointDetector& detector, int n_re,
                               Fading fading)
    : cb_(cb), code_(code), cfg_(cfg), sched_(sched), detector_(detector), n_re_(n_re),
      fading_(fading)
{
    if (n_re_ < 0)
        throw HarqError("run_group: N_re must be >= 0");
}

GroupResult HarqController::run_group(std::uint64_t group_seed, double n0) const
{
    const int J = cb_.J;
    const int T = cfg_.T;
    const int JT = J * T;
    const int num_slots = cfg_.N_R * cfg_.L;

    // Interleavers are fixed per (t, j) slot for the whole group.
    std::vector<std::vector<int>> interleavers(JT);
    for (int j = 0; j < J; ++j)
        for (int t = 0; t < T; ++t)
            interleavers[j * T + t] =
                make_interleaver(cfg_.N, RngStream::mix(RngStream::mix(group_seed, 0x17), j * T + t));

    // Per-packet truth, visible only to outcome scoring.
    std::vector<std::vector<std::uint8_t>> tx_bits(JT);  // interleaved coded bits
    std::vector<std::vector<std::uint8_t>> cw_bits(JT);  // coded bits, LDPC order
    std::vector<PacketOutcome> live(JT);
    std::vector<std::uint8_t> prev_failed(JT, 0);
    std::vector<std::uint8_t> pending(JT, 0);

    long long next_id = 0;
    RngStream payload_rng(group_seed, 0x50);

    auto fill_packet = [&](int j, int t, int entry_round) {
        const int k = j * T + t;
        std::vector<std::uint8_t> info(code_.info_len());
        for (auto& bit : info)
            bit = static_cast<std::uint8_t>(payload_rng.uniform_u64() & 1);
        cw_bits[k] = code_.encode(info);
        auto& tx = tx_bits[k];
        tx.assign(cfg_.N, 0);
        for (int i = 0; i < cfg_.N; ++i)
            tx[i] = cw_bits[k][interleavers[k][i]];
        // rounds_used holds the entry round until the packet is scored.
        live[k] = PacketOutcome{j, t, next_id++, false, entry_round};
    };

    for (int j = 0; j < J; ++j)
        for (int t = 0; t < T; ++t)
            fill_packet(j, t, 0);

    SoftBuffer buffers = SoftBuffer::zeros(J, T, cfg_.W, cfg_.N);
    GroupResult result;

    std::vector<std::vector<std::uint8_t>> pair_bits(static_cast<std::size_t>(J) *
                                                     std::max(cfg_.W, 1));
    std::vector<std::uint8_t> bits_buf(cb_.b);

    for (int round = 0;; ++round) {
        // NC combine the in-flight packets.
        for (int j = 0; j < J; ++j)
            for (int w = 0; w < cfg_.W; ++w) {
                const auto [ta, tb] = cfg_.pairs[w];
                pair_bits[j * cfg_.W + w] =
                    xor_packets(tx_bits[j * T + ta], tx_bits[j * T + tb]);
            }

        // Map every slot to SCMA codewords.
        std::vector<std::vector<std::vector<cplx>>> codewords(
            num_slots, std::vector<std::vector<cplx>>(J));
        for (const Slot& slot : sched_.slots) {
            for (int p = 0; p < cfg_.L; ++p) {
                const int l = slot.offset + p;
                for (int j = 0; j < J; ++j) {
                    const auto& bits = slot.kind == Slot::Kind::Initial
                                           ? tx_bits[j * T + slot.index]
                                           : pair_bits[j * cfg_.W + slot.index];
                    for (int i = 0; i < cb_.b; ++i)
                        bits_buf[i] = bits[static_cast<std::size_t>(p) * cb_.b + i];
                    auto cw = map_bits(cb_, j, bits_buf);
                    codewords[l][j].assign(cw.begin(), cw.end());
                }
            }
        }

        RngStream ch_rng(group_seed, 0xC4, static_cast<std::uint64_t>(round));
        RngStream noise_rng(group_seed, 0xA0, static_cast<std::uint64_t>(round));
        ChannelRealization ch = sample_channel(cb_, num_slots, cfg_.L, fading_, n0, ch_rng);
        ReceivedBlock rx = transmit(cb_, codewords, ch, noise_rng);

        std::vector<NcnCase> cases(J);
        for (int j = 0; j < J; ++j)
            cases[j] = classify_case({prev_failed.data() + j * T, static_cast<std::size_t>(T)},
                                     round == 0);

        RoundResult rr = detector_.detect_round(rx, ch, buffers, cases, pending, interleavers);
        result.rounds = round + 1;
        result.ttis += cfg_.N_R;
        result.detector_iterations += rr.iterations;

        // Score: success needs both a zero syndrome and the true codeword.
        std::vector<std::uint8_t> failed(JT, 0);
        for (int k = 0; k < JT; ++k)
            failed[k] = !(rr.syndrome_passed[k] && rr.bits[k] == cw_bits[k]);

        bool any_fail = false;
        for (int k = 0; k < JT; ++k) {
            if (!failed[k]) {
                live[k].success = true;
                live[k].rounds_used = round + 1 - live[k].rounds_used;
                result.outcomes.push_back(live[k]);
            } else {
                any_fail = true;
            }
        }

        if (!any_fail || round == n_re_) {
            for (int k = 0; k < JT; ++k)
                if (failed[k]) {
                    live[k].success = false;
                    live[k].rounds_used = round + 1 - live[k].rounds_used;
                    result.outcomes.push_back(live[k]);
                }
            break;
        }

        // Prepare the next round: accumulate buffers, refill succeeded slots.
        std::vector<std::uint8_t> refilled(JT, 0);
        for (int k = 0; k < JT; ++k)
            refilled[k] = !failed[k];
        update_buffers(buffers, rr, failed, refilled, cfg_, J);
        for (int j = 0; j < J; ++j)
            for (int t = 0; t < T; ++t) {
                const int k = j * T + t;
                if (refilled[k])
                    fill_packet(j, t, round + 1);
            }
        prev_failed = failed;
        pending = failed;
    }

    return result;
}

} // namespace ncksim
