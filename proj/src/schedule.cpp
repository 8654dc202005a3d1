#include "ncksim/schedule.hpp"

namespace ncksim {

Layout layout_from_string(const std::string& s)
{
    if (s == "type_a" || s == "TypeA")
        return Layout::TypeA;
    if (s == "type_b" || s == "TypeB")
        return Layout::TypeB;
    if (s == "type_c" || s == "TypeC")
        return Layout::TypeC;
    if (s == "k_scma" || s == "KScma")
        return Layout::KScma;
    throw ScheduleError("unknown layout: " + s);
}

std::string to_string(Layout l)
{
    switch (l) {
    case Layout::TypeA: return "type_a";
    case Layout::TypeB: return "type_b";
    case Layout::TypeC: return "type_c";
    case Layout::KScma: return "k_scma";
    }
    return "?";
}

NckConfig derive_config(int K_eq, int T, int K_in, int N_bits, int bits_per_symbol)
{
    if (T < 1)
        throw ScheduleError("derive_config: T must be >= 1");
    if (K_in < 1 || K_eq < K_in)
        throw ScheduleError("derive_config: need K_eq >= K_in >= 1");
    if (bits_per_symbol < 1 || N_bits < 1)
        throw ScheduleError("derive_config: need positive N and b");
    if (N_bits % bits_per_symbol != 0)
        throw ScheduleError("derive_config: N = " + std::to_string(N_bits) +
                            " must be a multiple of b = " + std::to_string(bits_per_symbol));

    NckConfig cfg;
    cfg.K_eq = K_eq;
    cfg.T = T;
    cfg.K_in = K_in;
    cfg.N = N_bits;
    cfg.b = bits_per_symbol;
    cfg.L = N_bits / bits_per_symbol;

    if (T == 1) {
        if (K_eq != K_in)
            throw ScheduleError("derive_config: T = 1 is plain K-SCMA and requires "
                                "K_in = K_eq");
        cfg.K_nc = 0;
        cfg.W = 0;
        cfg.N_R = K_eq;
    } else {
        int num = K_eq - K_in;
        if (num % (T - 1) != 0)
            throw ScheduleError("derive_config: infeasible triple (" + std::to_string(K_eq) +
                                "," + std::to_string(T) + "," + std::to_string(K_in) +
                                "): K_nc = (K_eq - K_in)/(T - 1) is not an integer");
        cfg.K_nc = num / (T - 1);
        if (cfg.K_nc < 0)
            throw ScheduleError("derive_config: negative K_nc");
        cfg.W = T * (T - 1) / 2;
        cfg.N_R = T * K_in + cfg.W * cfg.K_nc;
        for (int a = 0; a < T; ++a)
            for (int b2 = a + 1; b2 < T; ++b2)
                cfg.pairs.emplace_back(a, b2);
    }
    cfg.N_R_bar = static_cast<double>(cfg.N_R) / cfg.T;
    return cfg;
}

Schedule build_schedule(const NckConfig& cfg, Layout layout)
{
    if (layout == Layout::KScma && cfg.T != 1)
        throw ScheduleError("build_schedule: k_scma layout requires T = 1");
    if (layout != Layout::KScma && cfg.T < 2)
        throw ScheduleError("build_schedule: NCK layouts require T >= 2");
    if (layout == Layout::TypeC && cfg.T < 3)
        throw ScheduleError("build_schedule: type_c requires T >= 3");

    // Offsets depend only on the slot identity, never on transmission order,
    // so layouts are pure reorderings of the same slot multiset.
    auto initial_slot = [&](int t, int rep) {
        return Slot{Slot::Kind::Initial, t, rep, (t * cfg.K_in + rep) * cfg.L};
    };
    auto coded_slot = [&](int w, int rep) {
        return Slot{Slot::Kind::Coded, w, rep,
                    cfg.T * cfg.K_in * cfg.L + (w * cfg.K_nc + rep) * cfg.L};
    };

    Schedule sched;
    switch (layout) {
    case Layout::KScma:
        for (int rep = 0; rep < cfg.K_in; ++rep)
            sched.slots.push_back(initial_slot(0, rep));
        sched.feedback_points.push_back(cfg.K_in - 1);
        break;

    case Layout::TypeA:
    case Layout::TypeC:
        for (int t = 0; t < cfg.T; ++t)
            for (int rep = 0; rep < cfg.K_in; ++rep)
                sched.slots.push_back(initial_slot(t, rep));
        sched.feedback_points.push_back(cfg.T * cfg.K_in - 1);
        for (int w = 0; w < cfg.W; ++w)
            for (int rep = 0; rep < cfg.K_nc; ++rep)
                sched.slots.push_back(coded_slot(w, rep));
        break;

    case Layout::TypeB: {
        // One RTT per packet: its K_in initial repetitions plus a share of the
        // coded slots, front-loaded (ceil of the remaining share per RTT).
        std::vector<Slot> coded;
        for (int w = 0; w < cfg.W; ++w)
            for (int rep = 0; rep < cfg.K_nc; ++rep)
                coded.push_back(coded_slot(w, rep));
        std::size_t next = 0;
        for (int t = 0; t < cfg.T; ++t) {
            for (int rep = 0; rep < cfg.K_in; ++rep)
                sched.slots.push_back(initial_slot(t, rep));
            std::size_t remaining = coded.size() - next;
            std::size_t share = (remaining + static_cast<std::size_t>(cfg.T - t) - 1) /
                                static_cast<std::size_t>(cfg.T - t);
            for (std::size_t i = 0; i < share; ++i)
                sched.slots.push_back(coded[next++]);
            sched.feedback_points.push_back(static_cast<int>(sched.slots.size()) - 1);
        }
        break;
    }
    }

    if (static_cast<int>(sched.slots.size()) != cfg.N_R)
        throw ScheduleError("build_schedule: internal slot count mismatch");
    return sched;
}

std::vector<std::uint8_t> xor_packets(std::span<const std::uint8_t> a,
                                      std::span<const std::uint8_t> b)
{
    if (a.size() != b.size())
        throw ScheduleError("xor_packets: length mismatch");
    std::vector<std::uint8_t> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = (a[i] ^ b[i]) & 1;
    return out;
}

} // namespace ncksim
