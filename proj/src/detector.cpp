#include "ncksim/detector.hpp"
#include "ncksim/kernels.hpp"

#include <array>
#include <cmath>
#include <cstring>

namespace ncksim {

namespace {

// In-place variants of the M / M^-1 operators, allocation-free for the inner
// loops. Conventions match codebook.cpp.
void marginalize_into(const Codebook& cb, const double* probs, double* llrs)
{
    for (int i = 0; i < cb.b; ++i) {
        double p0 = 0.0, p1 = 0.0;
        for (int m = 0; m < cb.M; ++m)
            (symbol_bit(m, cb.b, i) ? p1 : p0) += probs[m];
        double l;
        if (p1 <= 0.0)
            l = kLlrMax;
        else if (p0 <= 0.0)
            l = -kLlrMax;
        else
            l = std::log(p0 / p1);
        llrs[i] = clip_llr(l);
    }
}

void inverse_marginalize_into(const Codebook& cb, const double* llrs, double* probs)
{
    for (int m = 0; m < cb.M; ++m)
        probs[m] = 1.0;
    for (int i = 0; i < cb.b; ++i) {
        double p0 = prob_bit0(llrs[i]);
        for (int m = 0; m < cb.M; ++m)
            probs[m] *= symbol_bit(m, cb.b, i) ? (1.0 - p0) : p0;
    }
    double total = 0.0;
    for (int m = 0; m < cb.M; ++m)
        total += probs[m];
    if (total > 0.0)
        for (int m = 0; m < cb.M; ++m)
            probs[m] /= total;
    else
        for (int m = 0; m < cb.M; ++m)
            probs[m] = 1.0 / cb.M;
}

void normalize_or_uniform(double* v, int m)
{
    double total = kernels::active().sum(v, static_cast<std::size_t>(m));
    if (total > 0.0)
        kernels::active().scale(v, static_cast<std::size_t>(m), 1.0 / total);
    else
        for (int i = 0; i < m; ++i)
            v[i] = 1.0 / m;
}

} // namespace

SoftBuffer SoftBuffer::zeros(int J, int T, int W, int N)
{
    SoftBuffer f;
    f.J = J;
    f.T = T;
    f.W = W;
    f.N = N;
    f.initial.assign(static_cast<std::size_t>(J) * T, std::vector<double>(N, 0.0));
    f.initial_prev = f.initial;
    f.coded.assign(static_cast<std::size_t>(J) * std::max(W, 1), {});
    for (auto& v : f.coded)
        v.assign(N, 0.0);
    f.coded_prev = f.coded;
    return f;
}

JointDetector::JointDetector(const Codebook& cb, const LdpcCode& code, const NckConfig& cfg,
                             const Schedule& sched, DetectorConfig dcfg)
    : cb_(cb), code_(code), cfg_(cfg), sched_(sched), dcfg_(std::move(dcfg))
{
    if (code_.n() != cfg_.N)
        throw DetectorError("detector: LDPC length " + std::to_string(code_.n()) +
                            " != configured N " + std::to_string(cfg_.N));
    if (cb_.b != cfg_.b)
        throw DetectorError("detector: codebook b mismatch");

    num_slots_ = cfg_.N_R * cfg_.L;

    res_edge_off_.assign(cb_.R, 0);
    int off = 0;
    for (int r = 0; r < cb_.R; ++r) {
        res_edge_off_[r] = off;
        off += static_cast<int>(cb_.resource_users[r].size());
    }
    edges_per_slot_ = off;

    user_edge_off_.assign(cb_.J, 0);
    off = 0;
    for (int j = 0; j < cb_.J; ++j) {
        user_edge_off_[j] = off;
        off += static_cast<int>(cb_.user_resources[j].size());
    }
    if (off != edges_per_slot_)
        throw DetectorError("detector: signature adjacency inconsistent");

    pos_in_resource_.assign(cb_.J, std::vector<int>(cb_.R, -1));
    for (int r = 0; r < cb_.R; ++r)
        for (std::size_t ui = 0; ui < cb_.resource_users[r].size(); ++ui)
            pos_in_resource_[cb_.resource_users[r][ui]][r] = static_cast<int>(ui);

    res_pos_in_user_.assign(cb_.J, std::vector<int>(cb_.R, -1));
    for (int j = 0; j < cb_.J; ++j)
        for (std::size_t vi = 0; vi < cb_.user_resources[j].size(); ++vi)
            res_pos_in_user_[j][cb_.user_resources[j][vi]] = static_cast<int>(vi);

    sched_slot_of_.assign(num_slots_, -1);
    for (std::size_t s = 0; s < sched_.slots.size(); ++s)
        for (int p = 0; p < cfg_.L; ++p)
            sched_slot_of_[sched_.slots[s].offset + p] = static_cast<int>(s);
    for (int l = 0; l < num_slots_; ++l)
        if (sched_slot_of_[l] < 0)
            throw DetectorError("detector: schedule offsets do not cover all slots");

    pairs_of_packet_.assign(cfg_.T, {});
    for (std::size_t w = 0; w < cfg_.pairs.size(); ++w) {
        pairs_of_packet_[cfg_.pairs[w].first].push_back(static_cast<int>(w));
        pairs_of_packet_[cfg_.pairs[w].second].push_back(static_cast<int>(w));
    }
}

std::size_t JointDetector::fn_idx(int l, int r, int ui) const
{
    return (static_cast<std::size_t>(l) * edges_per_slot_ + res_edge_off_[r] + ui) * cb_.M;
}

std::size_t JointDetector::svn_idx(int l, int j, int vi) const
{
    return (static_cast<std::size_t>(l) * edges_per_slot_ + user_edge_off_[j] + vi) * cb_.M;
}

std::span<const double> JointDetector::fn_message(const MessageState& st, int l, int r,
                                                  int ui) const
{
    return {st.fn_to_svn.data() + fn_idx(l, r, ui), static_cast<std::size_t>(cb_.M)};
}

std::span<double> JointDetector::svn_message(MessageState& st, int l, int j, int vi) const
{
    return {st.svn_to_fn.data() + svn_idx(l, j, vi), static_cast<std::size_t>(cb_.M)};
}

MessageState JointDetector::make_state(std::vector<std::vector<int>> interleavers) const
{
    const int JT = num_instances();
    if (static_cast<int>(interleavers.size()) != JT)
        throw DetectorError("make_state: expected " + std::to_string(JT) + " interleavers");
    for (const auto& pi : interleavers)
        if (static_cast<int>(pi.size()) != cfg_.N)
            throw DetectorError("make_state: interleaver length mismatch");

    MessageState st;
    st.fn_to_svn.assign(static_cast<std::size_t>(num_slots_) * edges_per_slot_ * cb_.M, 0.0);
    st.svn_to_fn = st.fn_to_svn;
    st.pn_to_lvn.assign(static_cast<std::size_t>(JT) * code_.num_edges(), 0.0);
    st.lvn_to_pn = st.pn_to_lvn;
    st.ncn_to_lvn.assign(JT, std::vector<double>(cfg_.N, 0.0));
    st.ncn_to_svn = st.ncn_to_lvn;
    st.ev_initial = st.ncn_to_lvn;
    st.ev_coded.assign(static_cast<std::size_t>(cb_.J) * std::max(cfg_.W, 1),
                       std::vector<double>(cfg_.N, 0.0));
    st.totals = st.ncn_to_lvn;
    st.interleavers = std::move(interleavers);

    int max_df = 0;
    for (int r = 0; r < cb_.R; ++r)
        max_df = std::max(max_df, static_cast<int>(cb_.resource_users[r].size()));
    std::size_t ncombo = 1;
    for (int i = 0; i < max_df; ++i)
        ncombo *= cb_.M;
    st.scratch.assign(4 * ncombo + 4 * cfg_.N + 2 * cb_.M, 0.0);
    return st;
}

void JointDetector::initialize(MessageState& st) const
{
    const double u = 1.0 / cb_.M;
    std::fill(st.fn_to_svn.begin(), st.fn_to_svn.end(), u);
    std::fill(st.svn_to_fn.begin(), st.svn_to_fn.end(), u);
    std::fill(st.pn_to_lvn.begin(), st.pn_to_lvn.end(), 0.0);
    std::fill(st.lvn_to_pn.begin(), st.lvn_to_pn.end(), 0.0);
    for (auto* group : {&st.ncn_to_lvn, &st.ncn_to_svn, &st.ev_initial, &st.ev_coded, &st.totals})
        for (auto& v : *group)
            std::fill(v.begin(), v.end(), 0.0);
}

void JointDetector::fn_update(MessageState& st, const ReceivedBlock& rx,
                              const ChannelRealization& ch) const
{
    if (rx.num_slots != num_slots_ || ch.num_slots != num_slots_)
        throw DetectorError("fn_update: slot count mismatch");
    const int M = cb_.M;
    const double n0 = ch.n0 > 0.0 ? ch.n0 : 1e-12;
    const auto& ops = kernels::active();

    std::array<const double*, 8> gp{};
    std::array<cplx, 8 * 64> contrib{}; // [i * M + m], d_f <= 8, M <= 64
    std::array<double, 9> pref{}, suf{};
    std::array<int, 8> digits{};
    std::array<double, 8 * 64> bins{};

    for (int l = 0; l < num_slots_; ++l) {
        for (int r = 0; r < cb_.R; ++r) {
            const auto& users = cb_.resource_users[r];
            const int d = static_cast<int>(users.size());
            if (d == 0)
                continue;

            std::size_t ncombo = 1;
            for (int i = 0; i < d; ++i)
                ncombo *= M;

            for (int i = 0; i < d; ++i) {
                const int j = users[i];
                const cplx h = ch.at(l, j, r);
                for (int m = 0; m < M; ++m)
                    contrib[i * 64 + m] = h * cb_.codewords[j][m][r];
                gp[i] = st.svn_to_fn.data() + svn_idx(l, j, res_pos_in_user_[j][r]);
            }

            double* sr = st.scratch.data();
            double* si = sr + ncombo;
            double* dist = si + ncombo;
            double* wgt = dist + ncombo;

            digits.fill(0);
            for (std::size_t c = 0; c < ncombo; ++c) {
                cplx s{};
                for (int i = 0; i < d; ++i)
                    s += contrib[i * 64 + digits[i]];
                sr[c] = s.real();
                si[c] = s.imag();
                for (int i = d - 1; i >= 0; --i) {
                    if (++digits[i] < M)
                        break;
                    digits[i] = 0;
                }
            }

            const cplx y = rx.at(l, r);
            ops.sq_dist(y.real(), y.imag(), sr, si, dist, ncombo);
            double dmin = dist[0];
            for (std::size_t c = 1; c < ncombo; ++c)
                dmin = std::min(dmin, dist[c]);
            for (std::size_t c = 0; c < ncombo; ++c)
                wgt[c] = std::exp(-(dist[c] - dmin) / n0);

            std::fill(bins.begin(), bins.begin() + static_cast<std::size_t>(d) * M, 0.0);
            digits.fill(0);
            for (std::size_t c = 0; c < ncombo; ++c) {
                pref[0] = 1.0;
                for (int i = 0; i < d; ++i)
                    pref[i + 1] = pref[i] * gp[i][digits[i]];
                suf[d] = 1.0;
                for (int i = d - 1; i >= 0; --i)
                    suf[i] = suf[i + 1] * gp[i][digits[i]];
                for (int i = 0; i < d; ++i) {
                    const double v = wgt[c] * pref[i] * suf[i + 1];
                    double& bin = bins[static_cast<std::size_t>(i) * M + digits[i]];
                    if (dcfg_.max_log)
                        bin = std::max(bin, v);
                    else
                        bin += v;
                }
                for (int i = d - 1; i >= 0; --i) {
                    if (++digits[i] < M)
                        break;
                    digits[i] = 0;
                }
            }

            for (int i = 0; i < d; ++i) {
                double* out = st.fn_to_svn.data() + fn_idx(l, r, i);
                std::memcpy(out, bins.data() + static_cast<std::size_t>(i) * M,
                            sizeof(double) * M);
                normalize_or_uniform(out, M);
            }
        }
    }
}

void JointDetector::pn_update(MessageState& st) const
{
    const int ne = code_.num_edges();
    std::array<double, 64> th{}, prefp{}, sufp{};
    for (int k = 0; k < num_instances(); ++k) {
        double* q = st.pn_to_lvn.data() + static_cast<std::size_t>(k) * ne;
        const double* s = st.lvn_to_pn.data() + static_cast<std::size_t>(k) * ne;
        for (int ci = 0; ci < code_.c(); ++ci) {
            const auto& edges = code_.check_edges(ci);
            const int deg = static_cast<int>(edges.size());
            for (int i = 0; i < deg; ++i)
                th[i] = clipped_tanh_half(s[edges[i]]);
            prefp[0] = 1.0;
            for (int i = 0; i < deg; ++i)
                prefp[i + 1] = prefp[i] * th[i];
            sufp[deg] = 1.0;
            for (int i = deg - 1; i >= 0; --i)
                sufp[i] = sufp[i + 1] * th[i];
            for (int i = 0; i < deg; ++i) {
                double p = std::clamp(prefp[i] * sufp[i + 1], -kAtanhArgMax, kAtanhArgMax);
                q[edges[i]] = 2.0 * std::atanh(p);
            }
        }
    }
}

void JointDetector::accumulate_evidence(MessageState& st) const
{
    const int M = cb_.M;
    for (auto& v : st.ev_initial)
        std::fill(v.begin(), v.end(), 0.0);
    for (auto& v : st.ev_coded)
        std::fill(v.begin(), v.end(), 0.0);

    double* post = st.scratch.data();
    double* prior = post + M;
    std::array<double, 16> bit_llrs{};
    std::array<double, 16> prior_llrs{};

    for (std::size_t s = 0; s < sched_.slots.size(); ++s) {
        const Slot& slot = sched_.slots[s];
        for (int j = 0; j < cb_.J; ++j) {
            const auto& zr = cb_.user_resources[j];
            std::vector<double>& ev = slot.kind == Slot::Kind::Initial
                                          ? st.ev_initial[j * cfg_.T + slot.index]
                                          : st.ev_coded[j * cfg_.W + slot.index];
            for (int p = 0; p < cfg_.L; ++p) {
                const int l = slot.offset + p;
                for (int m = 0; m < M; ++m)
                    post[m] = 1.0;
                for (std::size_t vi = 0; vi < zr.size(); ++vi) {
                    const double* msg =
                        st.fn_to_svn.data() + fn_idx(l, zr[vi], pos_in_resource_[j][zr[vi]]);
                    for (int m = 0; m < M; ++m)
                        post[m] *= msg[m];
                }
                if (dcfg_.evidence_includes_prior) {
                    slot_prior(st, static_cast<int>(s), j, p, prior_llrs.data());
                    inverse_marginalize_into(cb_, prior_llrs.data(), prior);
                    for (int m = 0; m < M; ++m)
                        post[m] *= prior[m];
                }
                normalize_or_uniform(post, M);
                marginalize_into(cb_, post, bit_llrs.data());
                for (int i = 0; i < cb_.b; ++i) {
                    double& e = ev[static_cast<std::size_t>(p) * cb_.b + i];
                    e = std::clamp(e + bit_llrs[i], -dcfg_.llr_clip, dcfg_.llr_clip);
                }
            }
        }
    }
}

void JointDetector::ncn_update(MessageState& st, const SoftBuffer& buffers,
                               std::span<const NcnCase> user_cases,
                               std::span<const std::uint8_t> packet_pending) const
{
    const int N = cfg_.N;
    if (static_cast<int>(user_cases.size()) != cb_.J)
        throw DetectorError("ncn_update: expected one case per user");
    if (static_cast<int>(packet_pending.size()) != num_instances())
        throw DetectorError("ncn_update: pending flags missing");

    for (int j = 0; j < cb_.J; ++j) {
        const NcnCase group_case = user_cases[j];
        for (int t = 0; t < cfg_.T; ++t) {
            const int k = j * cfg_.T + t;
            auto& lam = st.ncn_to_lvn[k];
            const auto& ev_self = st.ev_initial[k];
            const bool pending =
                group_case == NcnCase::AllFail ||
                (group_case == NcnCase::PartialFail && packet_pending[k]);

            for (int i = 0; i < N; ++i)
                lam[i] = ev_self[i];
            if (pending) {
                const auto& f_self = buffers.initial[k];
                for (int i = 0; i < N; ++i)
                    lam[i] += f_self[i];
            }

            for (int w : pairs_of_packet_[t]) {
                const int partner =
                    cfg_.pairs[w].first == t ? cfg_.pairs[w].second : cfg_.pairs[w].first;
                const auto& ev_partner = st.ev_initial[j * cfg_.T + partner];
                const auto& ev_pair = st.ev_coded[j * cfg_.W + w];
                switch (group_case) {
                case NcnCase::AllSuccess:
                    for (int i = 0; i < N; ++i)
                        lam[i] += soft_xor(ev_partner[i], ev_pair[i]);
                    break;
                case NcnCase::AllFail: {
                    const auto& f_partner = buffers.initial[j * cfg_.T + partner];
                    const auto& f_pair = buffers.coded[j * cfg_.W + w];
                    for (int i = 0; i < N; ++i)
                        lam[i] += soft_xor(ev_partner[i] + f_partner[i],
                                           ev_pair[i] + f_pair[i]);
                    break;
                }
                case NcnCase::PartialFail:
                    if (pending) {
                        const auto& f_partner = buffers.initial_prev[j * cfg_.T + partner];
                        const auto& f_pair = buffers.coded_prev[j * cfg_.W + w];
                        for (int i = 0; i < N; ++i)
                            lam[i] += soft_xor(ev_partner[i], ev_pair[i]) +
                                      soft_xor(f_partner[i], f_pair[i]);
                    } else {
                        for (int i = 0; i < N; ++i)
                            lam[i] += soft_xor(ev_partner[i], ev_pair[i]);
                    }
                    break;
                }
            }

            for (int i = 0; i < N; ++i)
                lam[i] = std::clamp(lam[i], -dcfg_.llr_clip, dcfg_.llr_clip);
        }
    }
}

void JointDetector::lvn_update(MessageState& st) const
{
    const int ne = code_.num_edges();
    double* lam_n = st.scratch.data(); // deinterleaved NCN prior
    for (int k = 0; k < num_instances(); ++k) {
        const auto& pi = st.interleavers[k];
        const auto& lam = st.ncn_to_lvn[k];
        for (int i = 0; i < cfg_.N; ++i)
            lam_n[pi[i]] = lam[i];

        const double* q = st.pn_to_lvn.data() + static_cast<std::size_t>(k) * ne;
        double* s = st.lvn_to_pn.data() + static_cast<std::size_t>(k) * ne;
        auto& tot = st.totals[k];
        for (int n = 0; n < code_.n(); ++n) {
            double total = lam_n[n];
            for (int e : code_.var_edges(n))
                total += q[e];
            tot[n] = total;
            for (int e : code_.var_edges(n))
                s[e] = std::clamp(total - q[e], -dcfg_.llr_clip, dcfg_.llr_clip);
        }
    }
}

void JointDetector::compute_totals(MessageState& st) const
{
    const int ne = code_.num_edges();
    double* lam_n = st.scratch.data();
    for (int k = 0; k < num_instances(); ++k) {
        const auto& pi = st.interleavers[k];
        for (int i = 0; i < cfg_.N; ++i)
            lam_n[pi[i]] = st.ncn_to_lvn[k][i];
        const double* q = st.pn_to_lvn.data() + static_cast<std::size_t>(k) * ne;
        for (int n = 0; n < code_.n(); ++n) {
            double total = lam_n[n];
            for (int e : code_.var_edges(n))
                total += q[e];
            st.totals[k][n] = total;
        }
    }
}

void JointDetector::ncn_feedback_to_svn(MessageState& st) const
{
    const int ne = code_.num_edges();
    double* qtot = st.scratch.data();
    for (int k = 0; k < num_instances(); ++k) {
        const double* q = st.pn_to_lvn.data() + static_cast<std::size_t>(k) * ne;
        for (int n = 0; n < code_.n(); ++n) {
            double total = 0.0;
            for (int e : code_.var_edges(n))
                total += q[e];
            qtot[n] = std::clamp(total, -dcfg_.llr_clip, dcfg_.llr_clip);
        }
        const auto& pi = st.interleavers[k];
        auto& lam = st.ncn_to_svn[k];
        for (int i = 0; i < cfg_.N; ++i)
            lam[i] = qtot[pi[i]];
    }
}

void JointDetector::slot_prior(const MessageState& st, int sched_slot, int j, int p,
                               double* prior_llrs) const
{
    const Slot& slot = sched_.slots[sched_slot];
    if (slot.kind == Slot::Kind::Initial) {
        const auto& lam = st.ncn_to_svn[j * cfg_.T + slot.index];
        for (int i = 0; i < cb_.b; ++i)
            prior_llrs[i] = lam[static_cast<std::size_t>(p) * cb_.b + i];
    } else {
        const auto [ta, tb] = cfg_.pairs[slot.index];
        const auto& la = st.ncn_to_svn[j * cfg_.T + ta];
        const auto& lb = st.ncn_to_svn[j * cfg_.T + tb];
        for (int i = 0; i < cb_.b; ++i) {
            const std::size_t eta = static_cast<std::size_t>(p) * cb_.b + i;
            prior_llrs[i] = soft_xor(la[eta], lb[eta]);
        }
    }
}

void JointDetector::svn_update(MessageState& st) const
{
    const int M = cb_.M;
    double* prior = st.scratch.data();
    double* newmsg = prior + M;
    std::array<double, 16> prior_llrs{};
    std::array<const double*, 8> ip{};

    for (std::size_t s = 0; s < sched_.slots.size(); ++s) {
        for (int j = 0; j < cb_.J; ++j) {
            const auto& zr = cb_.user_resources[j];
            const int dv = static_cast<int>(zr.size());
            for (int p = 0; p < cfg_.L; ++p) {
                const int l = sched_.slots[s].offset + p;
                slot_prior(st, static_cast<int>(s), j, p, prior_llrs.data());
                inverse_marginalize_into(cb_, prior_llrs.data(), prior);

                for (int vi = 0; vi < dv; ++vi)
                    ip[vi] = st.fn_to_svn.data() +
                             fn_idx(l, zr[vi], pos_in_resource_[j][zr[vi]]);

                for (int vi = 0; vi < dv; ++vi) {
                    for (int m = 0; m < M; ++m) {
                        double g = prior[m];
                        for (int vo = 0; vo < dv; ++vo)
                            if (vo != vi)
                                g *= ip[vo][m];
                        newmsg[m] = g;
                    }
                    normalize_or_uniform(newmsg, M);
                    double* out = st.svn_to_fn.data() + svn_idx(l, j, vi);
                    if (dcfg_.damping < 1.0) {
                        const double a = dcfg_.damping;
                        for (int m = 0; m < M; ++m)
                            out[m] = a * newmsg[m] + (1.0 - a) * out[m];
                        normalize_or_uniform(out, M);
                    } else {
                        std::memcpy(out, newmsg, sizeof(double) * M);
                    }
                }
            }
        }
    }
}

RoundResult JointDetector::detect_round(const ReceivedBlock& rx, const ChannelRealization& ch,
                                        const SoftBuffer& buffers,
                                        std::span<const NcnCase> user_cases,
                                        std::span<const std::uint8_t> packet_pending,
                                        std::vector<std::vector<int>> interleavers) const
{
    MessageState st = make_state(std::move(interleavers));
    initialize(st);

    const int JT = num_instances();
    RoundResult res;
    res.bits.assign(JT, std::vector<std::uint8_t>(code_.n(), 0));
    res.syndrome_passed.assign(JT, 0);

    for (int it = 1; it <= dcfg_.max_iter; ++it) {
        fn_update(st, rx, ch);
        pn_update(st);
        accumulate_evidence(st);
        ncn_update(st, buffers, user_cases, packet_pending);
        lvn_update(st);

        res.all_passed = true;
        for (int k = 0; k < JT; ++k) {
            for (int n = 0; n < code_.n(); ++n)
                res.bits[k][n] = static_cast<std::uint8_t>(hard_bit(st.totals[k][n]));
            res.syndrome_passed[k] = code_.syndrome_ok(res.bits[k]) ? 1 : 0;
            res.all_passed &= res.syndrome_passed[k] != 0;
        }
        res.iterations = it;
        if (res.all_passed && dcfg_.early_stop)
            break;
        if (it < dcfg_.max_iter) {
            ncn_feedback_to_svn(st);
            svn_update(st);
        }
    }

    res.llr_totals = st.totals;
    res.evidence_initial = st.ev_initial;
    res.evidence_coded = st.ev_coded;
    return res;
}

} // namespace ncksim
