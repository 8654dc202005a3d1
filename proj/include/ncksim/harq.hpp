#pragma once

#include <cstdint>
#include <vector>

#include "ncksim/detector.hpp"

namespace ncksim {

struct HarqError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PacketOutcome {
    int user = 0;
    int slot_t = 0;     // packet position within the group
    long long id = 0;   // unique within the group run
    bool success = false;
    int rounds_used = 0;
};

struct GroupResult {
    std::vector<PacketOutcome> outcomes;
    int rounds = 0;
    long long ttis = 0;             // rounds * N_R
    long long detector_iterations = 0;
};

// Maps one user's previous-round packet flags onto the NCN combining case.
// The first round has no history and uses the all-success (zero-buffer) path.
NcnCase classify_case(std::span<const std::uint8_t> packet_failed, bool first_round);

// F <- F + I for pending packets and pairs; refilled slots are snapshotted
// into the _prev buffers (the partial-fail rule consumes them next round) and
// restart from zero.
void update_buffers(SoftBuffer& buffers, const RoundResult& evidence,
                    std::span<const std::uint8_t> packet_pending,
                    std::span<const std::uint8_t> packet_refilled,
                    const NckConfig& cfg, int J);

// Runs one HARQ group for all J users: transmits per the schedule, applies
// ideal instantaneous feedback, retransmits with soft buffers for up to n_re
// extra rounds, refills succeeded slots with fresh payloads, and scores every
// packet that entered the air.
class HarqController {
public:
    HarqController(const Codebook& cb, const LdpcCode& code, const NckConfig& cfg,
                   const Schedule& sched, const JointDetector& detector, int n_re,
                   Fading fading);

    GroupResult run_group(std::uint64_t group_seed, double n0) const;

private:
    const Codebook& cb_;
    const LdpcCode& code_;
    const NckConfig& cfg_;
    const Schedule& sched_;
    const JointDetector& detector_;
    int n_re_;
    Fading fading_;
};

std::vector<int> make_interleaver(int n, std::uint64_t seed);

} // namespace ncksim
