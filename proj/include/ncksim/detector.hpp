#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ncksim/channel.hpp"
#include "ncksim/codebook.hpp"
#include "ncksim/ldpc.hpp"
#include "ncksim/schedule.hpp"

namespace ncksim {

struct DetectorError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DetectorConfig {
    int max_iter = 50;
    double llr_clip = kLlrMax;
    double damping = 1.0;    // fraction of the new SVN message kept; 1.0 = no damping
    bool max_log = false;    // max-log FN combining instead of exact sum-product
    bool early_stop = true;  // stop on all-zero syndromes
    // Fold the NCN prior into the soft-combination evidence (experimental;
    // the default keeps the plain product over the user's resources).
    bool evidence_includes_prior = false;
};

// State of the previous HARQ rounds, per user. All bit LLRs live in the
// transmitted (interleaved) bit order. `initial`/`coded` accumulate across
// rounds; the `_prev` snapshots hold the last round's values of buffers whose
// packet slot has since been refilled (consumed by the partial-fail rule).
struct SoftBuffer {
    int J = 0, T = 0, W = 0, N = 0;
    std::vector<std::vector<double>> initial;      // [j*T + t][N]
    std::vector<std::vector<double>> coded;        // [j*W + w][N]
    std::vector<std::vector<double>> initial_prev; // [j*T + t][N]
    std::vector<std::vector<double>> coded_prev;   // [j*W + w][N]

    static SoftBuffer zeros(int J, int T, int W, int N);
};

enum class NcnCase { AllFail, AllSuccess, PartialFail };

struct RoundResult {
    // Indexed [j*T + t].
    std::vector<std::vector<std::uint8_t>> bits; // hard coded bits, LDPC bit order
    std::vector<std::uint8_t> syndrome_passed;
    std::vector<std::vector<double>> llr_totals; // accumulated decision LLRs
    // Soft-combination outputs for HARQ buffering, transmitted bit order.
    std::vector<std::vector<double>> evidence_initial; // [j*T + t][N]
    std::vector<std::vector<double>> evidence_coded;   // [j*W + w][N]
    int iterations = 0;
    bool all_passed = false;
};

// All belief messages of one detection round plus preallocated scratch.
// Probability-domain messages are flattened per codeword slot and edge.
struct MessageState {
    std::vector<double> fn_to_svn;   // I, per (slot, resource edge, symbol)
    std::vector<double> svn_to_fn;   // G, same shape
    std::vector<double> pn_to_lvn;   // Q, [k][ldpc edge]
    std::vector<double> lvn_to_pn;   // S, [k][ldpc edge]
    std::vector<std::vector<double>> ncn_to_lvn;  // Lambda, [k][N], transmitted order
    std::vector<std::vector<double>> ncn_to_svn;  // Lambda, [k][N], transmitted order
    std::vector<std::vector<double>> ev_initial;  // [k][N]
    std::vector<std::vector<double>> ev_coded;    // [j*W + w][N]
    std::vector<std::vector<double>> totals;      // [k][N], LDPC bit order
    std::vector<std::vector<int>> interleavers;   // [k][N]: transmitted[i] = coded[pi[i]]

    std::vector<double> scratch;
};

// The joint SCMA-NC-LDPC iterative receiver. One instance per worker; a
// detect_round call owns its MessageState, so independent trials can run
// concurrently on separate instances.
class JointDetector {
public:
    JointDetector(const Codebook& cb, const LdpcCode& code, const NckConfig& cfg,
                  const Schedule& sched, DetectorConfig dcfg);

    MessageState make_state(std::vector<std::vector<int>> interleavers) const;

    // `user_cases` holds one combining case per user (network coding pairs
    // packets of the same user); `packet_pending` flags, indexed [j*T + t],
    // mark packets carried over from the previous round.
    RoundResult detect_round(const ReceivedBlock& rx, const ChannelRealization& ch,
                             const SoftBuffer& buffers, std::span<const NcnCase> user_cases,
                             std::span<const std::uint8_t> packet_pending,
                             std::vector<std::vector<int>> interleavers) const;

    // Individual passes, exposed for the oracle tests. All operate on a state
    // produced by make_state.
    void initialize(MessageState& st) const;
    void fn_update(MessageState& st, const ReceivedBlock& rx,
                   const ChannelRealization& ch) const;
    void pn_update(MessageState& st) const;
    void accumulate_evidence(MessageState& st) const;
    void ncn_update(MessageState& st, const SoftBuffer& buffers,
                    std::span<const NcnCase> user_cases,
                    std::span<const std::uint8_t> packet_pending) const;
    void lvn_update(MessageState& st) const;
    void compute_totals(MessageState& st) const;
    void ncn_feedback_to_svn(MessageState& st) const;
    void svn_update(MessageState& st) const;

    int num_codeword_slots() const { return num_slots_; }
    int num_instances() const { return cb_.J * cfg_.T; }

    // Message accessors used by tests.
    std::span<const double> fn_message(const MessageState& st, int l, int r, int ui) const;
    std::span<double> svn_message(MessageState& st, int l, int j, int vi) const;

private:
    const Codebook& cb_;
    const LdpcCode& code_;
    const NckConfig& cfg_;
    const Schedule& sched_;
    DetectorConfig dcfg_;

    int num_slots_ = 0;       // N_R * L codeword slots
    int edges_per_slot_ = 0;  // nnz of the signature
    std::vector<int> res_edge_off_;   // per resource, edge base within a slot
    std::vector<int> user_edge_off_;  // per user, edge base within a slot
    std::vector<std::vector<int>> pos_in_resource_;  // [j][r] -> index of j in xi_r
    std::vector<std::vector<int>> res_pos_in_user_;  // [j][r] -> index of r in zeta_j
    std::vector<int> sched_slot_of_;  // codeword slot -> schedule slot index
    std::vector<std::vector<int>> pairs_of_packet_; // t -> pair indices w

    std::size_t fn_idx(int l, int r, int ui) const;
    std::size_t svn_idx(int l, int j, int vi) const;
    void slot_prior(const MessageState& st, int sched_slot, int j, int p,
                    double* prior_llrs) const;
};

} // namespace ncksim
