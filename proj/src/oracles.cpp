#include "ncksim/oracles.hpp"

#include "ncksim/channel.hpp"
#include "ncksim/detector.hpp"
#include "ncksim/harq.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace ncksim::oracles {

namespace {

// ---- toy fixtures ---------------------------------------------------------

// Two users on two resources with a tree-shaped signature: resource 0 carries
// both users, resource 1 only user 0. BP is exact on this graph.
Codebook toy_codebook_2x2()
{
    Codebook cb;
    cb.J = 2;
    cb.R = 2;
    cb.M = 4;
    cb.b = 2;
    cb.signature = {{1, 1}, {1, 0}};
    const double a = 1.0 / std::sqrt(2.0);
    auto qpsk = [](int m, double rot) {
        const double phi = M_PI * (2 * m + 1) / 4.0 + rot;
        return cplx{std::cos(phi), std::sin(phi)};
    };
    cb.codewords.assign(2, std::vector<std::vector<cplx>>(4));
    for (int m = 0; m < 4; ++m) {
        cb.codewords[0][m] = {a * qpsk(m, 0.0), a * qpsk(m, M_PI / 8.0)};
        cb.codewords[1][m] = {qpsk(m, M_PI / 16.0), cplx{}};
    }
    validate_codebook(cb, false);
    cb.build_adjacency();
    return cb;
}

// One BPSK-like user spread over two resources.
Codebook toy_codebook_1x2()
{
    Codebook cb;
    cb.J = 1;
    cb.R = 2;
    cb.M = 2;
    cb.b = 1;
    cb.signature = {{1}, {1}};
    const double a = 1.0 / std::sqrt(2.0);
    cb.codewords = {{{cplx{a, 0}, cplx{a, 0}}, {cplx{-a, 0}, cplx{-a, 0}}}};
    validate_codebook(cb, false);
    cb.build_adjacency();
    return cb;
}

// Plain BPSK: one user, one resource.
Codebook toy_codebook_1x1()
{
    Codebook cb;
    cb.J = 1;
    cb.R = 1;
    cb.M = 2;
    cb.b = 1;
    cb.signature = {{1}};
    cb.codewords = {{{cplx{1, 0}}, {cplx{-1, 0}}}};
    validate_codebook(cb, false);
    cb.build_adjacency();
    return cb;
}

std::vector<std::vector<int>> identity_interleavers(int count, int n)
{
    std::vector<int> id(n);
    std::iota(id.begin(), id.end(), 0);
    return std::vector<std::vector<int>>(count, id);
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Direct soft-XOR evaluation, written out independently of llr.hpp.
double direct_xor(double l1, double l2)
{
    double p = std::tanh(l1 / 2.0) * std::tanh(l2 / 2.0);
    p = std::clamp(p, -(1.0 - 1e-12), 1.0 - 1e-12);
    return 2.0 * std::atanh(p);
}

// ---- suites ---------------------------------------------------------------

bool soft_xor_suite(std::string& detail)
{
    std::mt19937_64 gen(0x5f0f);
    std::uniform_real_distribution<double> uni(-10.0, 10.0);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double l1 = uni(gen), l2 = uni(gen);
        const double p_impl = sigmoid(-soft_xor(l1, l2));
        // Enumerate the four joint outcomes of (b1, b2).
        const double q1 = sigmoid(-l1), q2 = sigmoid(-l2);
        const double p_ref = q1 * (1.0 - q2) + (1.0 - q1) * q2;
        worst = std::max(worst, std::abs(p_impl - p_ref));
    }
    std::ostringstream os;
    os << "max |P_xor deviation| = " << worst << " over 10^4 pairs (tol 1e-9)";
    detail = os.str();
    return worst <= 1e-9;
}

bool mpa_suite(std::string& detail)
{
    const Codebook cb = toy_codebook_2x2();
    const LdpcCode code = LdpcCode::from_rows(2, {{0, 1}});
    const NckConfig cfg = derive_config(1, 1, 1, 2, 2);
    const Schedule sched = build_schedule(cfg, Layout::KScma);
    DetectorConfig dcfg;
    const JointDetector det(cb, code, cfg, sched, dcfg);

    std::mt19937_64 gen(0x3a21);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_int_distribution<int> sym(0, cb.M - 1);
    const double n0 = 0.5;
    double worst = 0.0;

    for (int trial = 0; trial < 100; ++trial) {
        ChannelRealization ch;
        ch.num_slots = 1;
        ch.J = cb.J;
        ch.R = cb.R;
        ch.n0 = n0;
        ch.h.assign(static_cast<std::size_t>(cb.J) * cb.R, cplx{});
        for (int j = 0; j < cb.J; ++j)
            for (int r = 0; r < cb.R; ++r)
                if (cb.signature[r][j])
                    ch.h[static_cast<std::size_t>(j) * cb.R + r] =
                        cplx{gauss(gen), gauss(gen)} / std::sqrt(2.0);

        const int m0 = sym(gen), m1 = sym(gen);
        ReceivedBlock rx;
        rx.num_slots = 1;
        rx.R = cb.R;
        rx.y.assign(cb.R, cplx{});
        for (int r = 0; r < cb.R; ++r) {
            cplx y = ch.at(0, 0, r) * cb.codewords[0][m0][r] +
                     ch.at(0, 1, r) * cb.codewords[1][m1][r];
            y += cplx{gauss(gen), gauss(gen)} * std::sqrt(n0 / 2.0);
            rx.y[r] = y;
        }

        MessageState st = det.make_state(identity_interleavers(cb.J, cfg.N));
        det.initialize(st);
        for (int it = 0; it < 8; ++it) {
            det.fn_update(st, rx, ch);
            det.svn_update(st);
        }

        // Implementation posterior: product of incoming FN messages.
        std::vector<std::vector<double>> post(cb.J, std::vector<double>(cb.M, 1.0));
        for (int j = 0; j < cb.J; ++j) {
            for (int r : cb.user_resources[j]) {
                int ui = 0;
                while (cb.resource_users[r][ui] != j)
                    ++ui;
                auto msg = det.fn_message(st, 0, r, ui);
                for (int m = 0; m < cb.M; ++m)
                    post[j][m] *= msg[m];
            }
            double tot = std::accumulate(post[j].begin(), post[j].end(), 0.0);
            for (double& p : post[j])
                p /= tot;
        }

        // Brute force over all M^2 hypotheses.
        std::vector<std::vector<double>> ref(cb.J, std::vector<double>(cb.M, 0.0));
        for (int a = 0; a < cb.M; ++a)
            for (int b = 0; b < cb.M; ++b) {
                double d = 0.0;
                for (int r = 0; r < cb.R; ++r) {
                    const cplx s = ch.at(0, 0, r) * cb.codewords[0][a][r] +
                                   ch.at(0, 1, r) * cb.codewords[1][b][r];
                    d += std::norm(rx.at(0, r) - s);
                }
                const double w = std::exp(-d / n0);
                ref[0][a] += w;
                ref[1][b] += w;
            }
        for (int j = 0; j < cb.J; ++j) {
            double tot = std::accumulate(ref[j].begin(), ref[j].end(), 0.0);
            for (int m = 0; m < cb.M; ++m)
                worst = std::max(worst, std::abs(post[j][m] - ref[j][m] / tot));
        }
    }

    std::ostringstream os;
    os << "max |posterior deviation| = " << worst << " over 100 draws (tol 1e-6)";
    detail = os.str();
    return worst <= 1e-6;
}

bool joint_map_suite(std::string& detail)
{
    const Codebook cb = toy_codebook_1x2();
    // Cycle-free (7,4) code: chained degree-3 checks.
    const LdpcCode code = LdpcCode::from_rows(7, {{0, 1, 2}, {2, 3, 4}, {4, 5, 6}});
    const NckConfig cfg = derive_config(1, 1, 1, 7, 1);
    const Schedule sched = build_schedule(cfg, Layout::KScma);
    DetectorConfig dcfg;
    dcfg.early_stop = false;
    dcfg.max_iter = 25;
    const JointDetector det(cb, code, cfg, sched, dcfg);

    // All 2^4 codewords.
    std::vector<std::vector<std::uint8_t>> words;
    for (int u = 0; u < 16; ++u) {
        std::vector<std::uint8_t> info(4);
        for (int i = 0; i < 4; ++i)
            info[i] = static_cast<std::uint8_t>((u >> i) & 1);
        words.push_back(code.encode(info));
    }

    std::mt19937_64 gen(0x77aa);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double n0 = 0.8;
    const SoftBuffer buffers = SoftBuffer::zeros(1, 1, 0, 7);
    const std::vector<NcnCase> cases{NcnCase::AllSuccess};
    const std::vector<std::uint8_t> pending{0};
    double worst = 0.0;

    for (int trial = 0; trial < 25; ++trial) {
        const auto& tx = words[static_cast<std::size_t>(gen() % 16)];

        ChannelRealization ch;
        ch.num_slots = 7;
        ch.J = 1;
        ch.R = 2;
        ch.n0 = n0;
        ch.h.assign(static_cast<std::size_t>(7) * 2, cplx{});
        for (int l = 0; l < 7; ++l)
            for (int r = 0; r < 2; ++r)
                ch.h[static_cast<std::size_t>(l) * 2 + r] =
                    cplx{gauss(gen), gauss(gen)} / std::sqrt(2.0);

        ReceivedBlock rx;
        rx.num_slots = 7;
        rx.R = 2;
        rx.y.assign(14, cplx{});
        for (int l = 0; l < 7; ++l)
            for (int r = 0; r < 2; ++r) {
                cplx y = ch.at(l, 0, r) * cb.codewords[0][tx[l]][r];
                y += cplx{gauss(gen), gauss(gen)} * std::sqrt(n0 / 2.0);
                rx.y[static_cast<std::size_t>(l) * 2 + r] = y;
            }

        RoundResult rr = det.detect_round(rx, ch, buffers, cases, pending,
                                          identity_interleavers(1, 7));

        // Exhaustive joint posterior over the 16 codewords.
        std::vector<double> p1(7, 0.0);
        double tot = 0.0;
        for (const auto& w : words) {
            double d = 0.0;
            for (int l = 0; l < 7; ++l)
                for (int r = 0; r < 2; ++r)
                    d += std::norm(rx.at(l, r) - ch.at(l, 0, r) * cb.codewords[0][w[l]][r]);
            const double lik = std::exp(-d / n0);
            tot += lik;
            for (int l = 0; l < 7; ++l)
                if (w[l])
                    p1[l] += lik;
        }
        for (int n = 0; n < 7; ++n) {
            const double ref = p1[n] / tot;
            const double impl = sigmoid(-rr.llr_totals[0][n]);
            worst = std::max(worst, std::abs(impl - ref));
        }
    }

    std::ostringstream os;
    os << "max |bit posterior deviation| = " << worst << " over 25 draws (tol 1e-6)";
    detail = os.str();
    return worst <= 1e-6;
}

bool ncn_cases_suite(std::string& detail)
{
    const Codebook cb = toy_codebook_2x2();
    const LdpcCode code = LdpcCode::from_rows(4, {{0, 1}, {2, 3}});
    const NckConfig cfg = derive_config(4, 2, 2, 4, 2);
    const Schedule sched = build_schedule(cfg, Layout::TypeA);
    DetectorConfig dcfg;
    const JointDetector det(cb, code, cfg, sched, dcfg);

    const int JT = cb.J * cfg.T;
    const int N = cfg.N;
    std::mt19937_64 gen(0x90ce);
    std::uniform_real_distribution<double> uni(-8.0, 8.0);
    auto randomize = [&](std::vector<std::vector<double>>& vv) {
        for (auto& v : vv)
            for (double& x : v)
                x = uni(gen);
    };

    double worst_identity = 0.0, worst_direct = 0.0;
    const std::vector<std::uint8_t> none(JT, 0);

    for (int rep = 0; rep < 1000; ++rep) {
        MessageState st = det.make_state(identity_interleavers(JT, N));
        det.initialize(st);
        randomize(st.ev_initial);
        randomize(st.ev_coded);

        SoftBuffer zero = SoftBuffer::zeros(cb.J, cfg.T, cfg.W, N);
        SoftBuffer rnd = zero;
        randomize(rnd.initial);
        randomize(rnd.coded);
        randomize(rnd.initial_prev);
        randomize(rnd.coded_prev);

        // Identity: the all-fail combining with zero buffers must equal the
        // all-success formula bit for bit.
        std::vector<NcnCase> all_fail(cb.J, NcnCase::AllFail);
        std::vector<NcnCase> all_ok(cb.J, NcnCase::AllSuccess);
        const std::vector<std::uint8_t> all(JT, 1);
        det.ncn_update(st, zero, all_fail, all);
        auto lam_fail = st.ncn_to_lvn;
        det.ncn_update(st, zero, all_ok, none);
        for (int k = 0; k < JT; ++k)
            for (int i = 0; i < N; ++i)
                worst_identity = std::max(
                    worst_identity, std::abs(lam_fail[k][i] - st.ncn_to_lvn[k][i]));

        // Direct formula checks on random buffers.
        det.ncn_update(st, rnd, all_fail, all);
        for (int j = 0; j < cb.J; ++j)
            for (int t = 0; t < cfg.T; ++t) {
                const int k = j * cfg.T + t, kp = j * cfg.T + (1 - t);
                for (int i = 0; i < N; ++i) {
                    const double ref =
                        st.ev_initial[k][i] + rnd.initial[k][i] +
                        direct_xor(st.ev_initial[kp][i] + rnd.initial[kp][i],
                                   st.ev_coded[j][i] + rnd.coded[j][i]);
                    worst_direct = std::max(
                        worst_direct,
                        std::abs(std::clamp(ref, -40.0, 40.0) - st.ncn_to_lvn[k][i]));
                }
            }

        // Partial fail: packet 0 pending, packet 1 fresh.
        std::vector<NcnCase> part(cb.J, NcnCase::PartialFail);
        std::vector<std::uint8_t> pend(JT, 0);
        for (int j = 0; j < cb.J; ++j)
            pend[j * cfg.T] = 1;
        det.ncn_update(st, rnd, part, pend);
        for (int j = 0; j < cb.J; ++j)
            for (int i = 0; i < N; ++i) {
                const int k0 = j * cfg.T, k1 = j * cfg.T + 1;
                const double ref0 =
                    st.ev_initial[k0][i] + rnd.initial[k0][i] +
                    direct_xor(st.ev_initial[k1][i], st.ev_coded[j][i]) +
                    direct_xor(rnd.initial_prev[k1][i], rnd.coded_prev[j][i]);
                const double ref1 =
                    st.ev_initial[k1][i] +
                    direct_xor(st.ev_initial[k0][i], st.ev_coded[j][i]);
                worst_direct = std::max(
                    worst_direct,
                    std::abs(std::clamp(ref0, -40.0, 40.0) - st.ncn_to_lvn[k0][i]));
                worst_direct = std::max(
                    worst_direct,
                    std::abs(std::clamp(ref1, -40.0, 40.0) - st.ncn_to_lvn[k1][i]));
            }
    }

    std::ostringstream os;
    os << "all-fail/all-success identity dev = " << worst_identity
       << ", direct formula dev = " << worst_direct << " (tol 1e-12)";
    detail = os.str();
    return worst_identity <= 1e-12 && worst_direct <= 1e-12;
}

// Collects combined bit LLRs for one scheme over enough batches to reach
// `samples` values. All transmitted bits are zero, unit AWGN channel.
std::vector<double> mrc_llrs(int k_in, double n0, int samples, std::uint64_t seed)
{
    const Codebook cb = toy_codebook_1x1();
    const int N = 500;
    std::vector<std::vector<int>> rows(1);
    rows[0] = {0, 1};
    const LdpcCode code = LdpcCode::from_rows(N, rows);
    const NckConfig cfg = derive_config(k_in, 1, k_in, N, 1);
    const Schedule sched = build_schedule(cfg, Layout::KScma);
    DetectorConfig dcfg;
    const JointDetector det(cb, code, cfg, sched, dcfg);

    const int num_slots = cfg.N_R * cfg.L;
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    ChannelRealization ch;
    ch.num_slots = num_slots;
    ch.J = 1;
    ch.R = 1;
    ch.n0 = n0;
    ch.h.assign(num_slots, cplx{1.0, 0.0});

    std::vector<double> out;
    out.reserve(samples);
    while (static_cast<int>(out.size()) < samples) {
        ReceivedBlock rx;
        rx.num_slots = num_slots;
        rx.R = 1;
        rx.y.assign(num_slots, cplx{});
        for (int l = 0; l < num_slots; ++l)
            rx.y[l] = cplx{1.0, 0.0} + cplx{gauss(gen), gauss(gen)} * std::sqrt(n0 / 2.0);

        MessageState st = det.make_state(identity_interleavers(1, N));
        det.initialize(st);
        det.fn_update(st, rx, ch);
        det.accumulate_evidence(st);
        for (int i = 0; i < N && static_cast<int>(out.size()) < samples; ++i)
            out.push_back(st.ev_initial[0][i]);
    }
    return out;
}

bool mrc_suite(std::string& detail)
{
    const int samples = 100000;
    // Two identical-channel repetitions vs one transmission at +3 dB.
    const auto twice = mrc_llrs(2, 1.0, samples, 0xd00d);
    const auto boosted = mrc_llrs(1, 0.5, samples, 0xbeef);

    auto moments = [](const std::vector<double>& v) {
        double mean = 0.0;
        for (double x : v)
            mean += x;
        mean /= v.size();
        double var = 0.0;
        for (double x : v)
            var += (x - mean) * (x - mean);
        var /= v.size() - 1;
        return std::pair{mean, var};
    };
    const auto [m1, v1] = moments(twice);
    const auto [m2, v2] = moments(boosted);
    const double mean_dev = std::abs(m1 - m2) / std::abs(m2);
    const double var_dev = std::abs(v1 - v2) / v2;

    std::ostringstream os;
    os << "mean " << m1 << " vs " << m2 << " (rel dev " << mean_dev << "), var " << v1
       << " vs " << v2 << " (rel dev " << var_dev << "), tol 2%";
    detail = os.str();
    return mean_dev <= 0.02 && var_dev <= 0.02;
}

struct Suite {
    const char* name;
    bool (*fn)(std::string&);
};

constexpr Suite kSuites[] = {
    {"soft-xor", soft_xor_suite},
    {"mpa", mpa_suite},
    {"joint-map", joint_map_suite},
    {"ncn-cases", ncn_cases_suite},
    {"mrc", mrc_suite},
};

} // namespace

std::vector<std::string> names()
{
    std::vector<std::string> out;
    for (const auto& s : kSuites)
        out.emplace_back(s.name);
    return out;
}

Report run(const std::string& name)
{
    for (const auto& s : kSuites)
        if (name == s.name) {
            Report r;
            r.name = s.name;
            r.passed = s.fn(r.detail);
            return r;
        }
    throw std::invalid_argument("unknown oracle: " + name);
}

std::vector<Report> run_all()
{
    std::vector<Report> out;
    for (const auto& s : kSuites)
        out.push_back(run(s.name));
    return out;
}

} // namespace ncksim::oracles
