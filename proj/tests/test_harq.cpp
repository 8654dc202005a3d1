#include <doctest.h>

#include "ncksim/harq.hpp"

#include <algorithm>
#include <numeric>

using namespace ncksim;

namespace {
const std::string kData = NCKSIM_DATA_DIR;
}

TEST_CASE("case classification")
{
    const std::vector<std::uint8_t> none{0, 0}, all{1, 1}, some{1, 0};
    CHECK(classify_case(all, true) == NcnCase::AllSuccess); // first round has no history
    CHECK(classify_case(none, false) == NcnCase::AllSuccess);
    CHECK(classify_case(all, false) == NcnCase::AllFail);
    CHECK(classify_case(some, false) == NcnCase::PartialFail);
}

TEST_CASE("interleavers are deterministic permutations")
{
    const auto a = make_interleaver(64, 9);
    const auto b = make_interleaver(64, 9);
    const auto c = make_interleaver(64, 10);
    CHECK(a == b);
    CHECK(a != c);
    auto sorted = a;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> want(64);
    std::iota(want.begin(), want.end(), 0);
    CHECK(sorted == want);
}

TEST_CASE("soft buffer bookkeeping across a round boundary")
{
    const auto cfg = derive_config(4, 2, 2, 4, 2);
    const int J = 2, JT = J * cfg.T;

    auto buffers = SoftBuffer::zeros(J, cfg.T, cfg.W, cfg.N);
    RoundResult rr;
    rr.evidence_initial.assign(JT, std::vector<double>(cfg.N, 1.0));
    rr.evidence_coded.assign(J * cfg.W, std::vector<double>(cfg.N, 0.5));

    // User 0: packet 0 pending, packet 1 refilled. User 1: both pending.
    std::vector<std::uint8_t> pending{1, 0, 1, 1};
    std::vector<std::uint8_t> refilled{0, 1, 0, 0};
    buffers.initial[0].assign(cfg.N, 2.0);
    buffers.initial[1].assign(cfg.N, 3.0);
    buffers.coded[0].assign(cfg.N, 1.5);

    update_buffers(buffers, rr, pending, refilled, cfg, J);

    // Pending packet accumulates: F = F + evidence.
    CHECK(buffers.initial[0][0] == doctest::Approx(3.0));
    // Refilled packet restarts from zero but its history is snapshotted.
    CHECK(buffers.initial[1][0] == 0.0);
    CHECK(buffers.initial_prev[1][0] == doctest::Approx(4.0));
    // The pair buffer resets because one member was refilled.
    CHECK(buffers.coded[0][0] == 0.0);
    CHECK(buffers.coded_prev[0][0] == doctest::Approx(2.0));
    // User 1: nothing refilled, pair accumulates.
    CHECK(buffers.initial[2][0] == doctest::Approx(1.0));
    CHECK(buffers.coded[1][0] == doctest::Approx(0.5));
}

TEST_CASE("buffer accumulation saturates at the clip")
{
    const auto cfg = derive_config(4, 2, 2, 4, 2);
    auto buffers = SoftBuffer::zeros(1, cfg.T, cfg.W, cfg.N);
    RoundResult rr;
    rr.evidence_initial.assign(cfg.T, std::vector<double>(cfg.N, 30.0));
    rr.evidence_coded.assign(cfg.W, std::vector<double>(cfg.N, 30.0));
    buffers.initial[0].assign(cfg.N, 30.0);
    const std::vector<std::uint8_t> pending{1, 1}, refilled{0, 0};
    update_buffers(buffers, rr, pending, refilled, cfg, 1);
    CHECK(buffers.initial[0][0] == kLlrMax);
}

TEST_CASE("group run scores every launched packet exactly once")
{
    const Codebook cb = load_codebook(std::string(kData) + "/codebook_4x6.json");
    const LdpcCode code = LdpcCode::load_alist(std::string(kData) + "/ldpc_n264_r12.alist");
    const auto cfg = derive_config(4, 2, 2, code.n(), cb.b);
    const auto sched = build_schedule(cfg, Layout::TypeA);
    JointDetector det(cb, code, cfg, sched, DetectorConfig{});

    SUBCASE("n_re = 0 is a single round")
    {
        HarqController harq(cb, code, cfg, sched, det, 0, Fading::RayleighIid);
        const auto g = harq.run_group(9, 0.4);
        CHECK(g.rounds == 1);
        CHECK(g.ttis == cfg.N_R);
        CHECK(g.outcomes.size() == static_cast<std::size_t>(cb.J * cfg.T));
        std::vector<long long> ids;
        for (const auto& o : g.outcomes) {
            CHECK(o.rounds_used == 1);
            ids.push_back(o.id);
        }
        std::sort(ids.begin(), ids.end());
        CHECK(std::adjacent_find(ids.begin(), ids.end()) == ids.end());
    }

    SUBCASE("retransmissions extend the group and refill cleared slots")
    {
        HarqController harq(cb, code, cfg, sched, det, 2, Fading::RayleighIid);
        // Noisy enough that some packets fail round 1.
        const auto g = harq.run_group(9, 1.2);
        CHECK(g.rounds >= 1);
        CHECK(g.rounds <= 3);
        CHECK(g.ttis == static_cast<long long>(g.rounds) * cfg.N_R);
        // Refills mean at least J*T packets entered the air.
        CHECK(g.outcomes.size() >= static_cast<std::size_t>(cb.J * cfg.T));
        for (const auto& o : g.outcomes) {
            CHECK(o.rounds_used >= 1);
            CHECK(o.rounds_used <= g.rounds);
        }
    }

    SUBCASE("same seed reproduces the run exactly")
    {
        HarqController harq(cb, code, cfg, sched, det, 1, Fading::RayleighIid);
        const auto g1 = harq.run_group(77, 0.9);
        const auto g2 = harq.run_group(77, 0.9);
        REQUIRE(g1.outcomes.size() == g2.outcomes.size());
        for (std::size_t i = 0; i < g1.outcomes.size(); ++i) {
            CHECK(g1.outcomes[i].success == g2.outcomes[i].success);
            CHECK(g1.outcomes[i].id == g2.outcomes[i].id);
        }
        CHECK(g1.detector_iterations == g2.detector_iterations);
    }
}

TEST_CASE("negative retransmission budget is rejected")
{
    const Codebook cb = load_codebook(std::string(kData) + "/codebook_4x6.json");
    const LdpcCode code = LdpcCode::load_alist(std::string(kData) + "/ldpc_n264_r12.alist");
    const auto cfg = derive_config(4, 2, 2, code.n(), cb.b);
    const auto sched = build_schedule(cfg, Layout::TypeA);
    JointDetector det(cb, code, cfg, sched, DetectorConfig{});
    CHECK_THROWS_AS(HarqController(cb, code, cfg, sched, det, -1, Fading::RayleighIid),
                    HarqError);
}
