#include <doctest.h>

#include "ncksim/schedule.hpp"

#include <algorithm>
#include <set>

using namespace ncksim;

TEST_CASE("config derivation reproduces the reference triples")
{
    auto c = derive_config(4, 2, 2, 264, 2);
    CHECK(c.K_nc == 2);
    CHECK(c.W == 1);
    CHECK(c.N_R == 6);
    CHECK(c.N_R_bar == doctest::Approx(3.0));

    c = derive_config(4, 2, 3, 264, 2);
    CHECK(c.K_nc == 1);
    CHECK(c.N_R == 7);
    CHECK(c.N_R_bar == doctest::Approx(3.5));

    c = derive_config(4, 3, 2, 264, 2);
    CHECK(c.K_nc == 1);
    CHECK(c.W == 3);
    CHECK(c.N_R == 9);
    CHECK(c.N_R_bar == doctest::Approx(3.0));

    c = derive_config(5, 2, 3, 264, 2);
    CHECK(c.K_nc == 2);
    CHECK(c.N_R == 8);
    CHECK(c.N_R_bar == doctest::Approx(4.0));

    c = derive_config(3, 2, 1, 264, 2);
    CHECK(c.K_eq == 3);
    CHECK(c.N_R == 4);

    c = derive_config(3, 3, 1, 264, 2);
    CHECK(c.N_R == 6);
    CHECK(c.K_nc == 1);

    // Plain K-repetition.
    c = derive_config(3, 1, 3, 264, 2);
    CHECK(c.W == 0);
    CHECK(c.N_R == 3);
    CHECK(c.pairs.empty());
}

TEST_CASE("equivalent repetition identity holds across a triple grid")
{
    for (int T = 2; T <= 4; ++T)
        for (int K_in = 1; K_in <= 4; ++K_in)
            for (int K_nc = 0; K_nc <= 3; ++K_nc) {
                const int K_eq = K_in + K_nc * (T - 1);
                const auto c = derive_config(K_eq, T, K_in, 8, 2);
                CHECK(c.K_nc == K_nc);
                CHECK(c.K_in + c.K_nc * (T - 1) == K_eq);
                CHECK(c.N_R == T * K_in + c.W * K_nc);
                CHECK(c.N_R <= T * K_eq); // never worse than plain repetition
            }
}

TEST_CASE("config derivation rejects invalid triples")
{
    CHECK_THROWS_AS(derive_config(4, 3, 2, 264, 0), ScheduleError);
    CHECK_THROWS_AS(derive_config(4, 2, 5, 264, 2), ScheduleError);  // K_in > K_eq
    CHECK_THROWS_AS(derive_config(4, 3, 3, 264, 2), ScheduleError);  // non-integer K_nc
    CHECK_THROWS_AS(derive_config(4, 1, 3, 264, 2), ScheduleError);  // T=1 needs K_in=K_eq
    CHECK_THROWS_AS(derive_config(4, 2, 2, 263, 2), ScheduleError);  // N not multiple of b
}

namespace {

std::multiset<std::tuple<int, int, int, int>> slot_multiset(const Schedule& s)
{
    std::multiset<std::tuple<int, int, int, int>> out;
    for (const auto& sl : s.slots)
        out.insert({static_cast<int>(sl.kind), sl.index, sl.rep, sl.offset});
    return out;
}

} // namespace

TEST_CASE("layouts are reorderings of the same slot multiset")
{
    const auto cfg = derive_config(4, 2, 2, 8, 2);
    const auto a = build_schedule(cfg, Layout::TypeA);
    const auto b = build_schedule(cfg, Layout::TypeB);
    CHECK(a.slots.size() == 6);
    CHECK(b.slots.size() == 6);
    CHECK(slot_multiset(a) == slot_multiset(b));
    CHECK(a.feedback_points.size() == 1);
    CHECK(b.feedback_points.size() == 2);

    const auto cfg3 = derive_config(4, 3, 2, 8, 2);
    const auto c3 = build_schedule(cfg3, Layout::TypeC);
    const auto a3 = build_schedule(cfg3, Layout::TypeA);
    CHECK(slot_multiset(c3) == slot_multiset(a3));
}

TEST_CASE("slot offsets follow the packet and pair maps")
{
    const auto cfg = derive_config(4, 2, 2, 8, 2); // L = 4
    const auto s = build_schedule(cfg, Layout::TypeA);
    // Initial slots first: (t, rep) offsets (t K_in + rep) L.
    CHECK(s.slots[0].kind == Slot::Kind::Initial);
    CHECK(s.slots[0].offset == 0);
    CHECK(s.slots[1].offset == 4);
    CHECK(s.slots[2].offset == 8);
    CHECK(s.slots[3].offset == 12);
    // Coded slots after T K_in L.
    CHECK(s.slots[4].kind == Slot::Kind::Coded);
    CHECK(s.slots[4].offset == 16);
    CHECK(s.slots[5].offset == 20);

    // All offsets distinct and covering.
    std::set<int> offs;
    for (const auto& sl : s.slots)
        offs.insert(sl.offset);
    CHECK(offs.size() == s.slots.size());
}

TEST_CASE("layout constraints")
{
    const auto cfg = derive_config(4, 2, 2, 8, 2);
    CHECK_THROWS_AS(build_schedule(cfg, Layout::TypeC), ScheduleError); // T < 3
    CHECK_THROWS_AS(build_schedule(cfg, Layout::KScma), ScheduleError); // T != 1
    const auto k = derive_config(3, 1, 3, 8, 2);
    CHECK_THROWS_AS(build_schedule(k, Layout::TypeA), ScheduleError);
    CHECK(build_schedule(k, Layout::KScma).slots.size() == 3);
}

TEST_CASE("layout and string conversions round trip")
{
    for (auto l : {Layout::TypeA, Layout::TypeB, Layout::TypeC, Layout::KScma})
        CHECK(layout_from_string(to_string(l)) == l);
    CHECK_THROWS_AS(layout_from_string("nope"), ScheduleError);
}

TEST_CASE("xor_packets")
{
    const std::vector<std::uint8_t> a{0, 1, 1, 0}, b{1, 1, 0, 0};
    CHECK(xor_packets(a, b) == std::vector<std::uint8_t>{1, 0, 1, 0});
    CHECK(xor_packets(a, a) == std::vector<std::uint8_t>{0, 0, 0, 0});
    const std::vector<std::uint8_t> c{1};
    CHECK_THROWS_AS(xor_packets(a, c), ScheduleError);
}
