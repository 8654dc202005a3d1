#include <doctest.h>

#include "ncksim/harness.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace ncksim;

namespace {
const std::string kData = NCKSIM_DATA_DIR;

ExperimentConfig tiny_config()
{
    ExperimentConfig cfg;
    cfg.codebook_path = kData + "/codebook_4x6.json";
    cfg.ldpc_path = kData + "/ldpc_n264_r12.alist";
    cfg.scheme = {4, 2, 2, Layout::TypeA};
    cfg.n_re = 1;
    cfg.snr_db = {4.0};
    cfg.trials = 6;
    cfg.fading = Fading::RayleighIid;
    cfg.master_seed = 99;
    return cfg;
}

std::string write_temp(const std::string& body)
{
    const auto path =
        (std::filesystem::temp_directory_path() / "ncksim_cfg_test.json").string();
    std::ofstream out(path);
    out << body;
    return path;
}

} // namespace

TEST_CASE("throughput ratio")
{
    CHECK(compute_throughput(8, 10) == doctest::Approx(0.8));
    CHECK(compute_throughput(0, 5) == 0.0);
    CHECK(compute_throughput(5, 5) == 1.0);
    CHECK_THROWS_AS(compute_throughput(1, 0), HarnessError);
    CHECK_THROWS_AS(compute_throughput(6, 5), HarnessError);
    CHECK_THROWS_AS(compute_throughput(-1, 5), HarnessError);
}

TEST_CASE("config parsing")
{
    SUBCASE("valid file with defaults")
    {
        const auto path = write_temp(R"({
            "codebook": "cb.json", "ldpc": "h.alist",
            "scheme": {"K_eq": 4, "T": 2, "K_in": 2, "layout": "type_a"},
            "snr_db": [1, 2], "trials": 10})");
        const auto cfg = ExperimentConfig::from_json_file(path);
        CHECK(cfg.scheme.K_eq == 4);
        CHECK(cfg.n_re == 0);
        CHECK(cfg.fading == Fading::RayleighIid);
        CHECK(cfg.snr_convention == SnrConvention::EsN0);
        CHECK(cfg.threads == 1);
        CHECK(cfg.detector.max_iter == 50);
        std::remove(path.c_str());
    }
    SUBCASE("missing file")
    {
        CHECK_THROWS_AS(ExperimentConfig::from_json_file("/nonexistent/cfg.json"),
                        HarnessError);
    }
    SUBCASE("malformed json")
    {
        const auto path = write_temp("{not json");
        CHECK_THROWS_AS(ExperimentConfig::from_json_file(path), HarnessError);
        std::remove(path.c_str());
    }
    SUBCASE("missing required key")
    {
        const auto path = write_temp(R"({"codebook": "cb.json"})");
        CHECK_THROWS_AS(ExperimentConfig::from_json_file(path), HarnessError);
        std::remove(path.c_str());
    }
    SUBCASE("invalid trials")
    {
        const auto path = write_temp(R"({
            "codebook": "cb.json", "ldpc": "h.alist",
            "scheme": {"K_eq": 4, "T": 2, "K_in": 2, "layout": "type_a"},
            "snr_db": [1], "trials": 0})");
        CHECK_THROWS_AS(ExperimentConfig::from_json_file(path), HarnessError);
        std::remove(path.c_str());
    }
}

TEST_CASE("experiments are deterministic and thread-count independent")
{
    auto cfg = tiny_config();
    cfg.threads = 1;
    const auto m1 = run_experiment(cfg);
    const auto csv1 = format_csv(m1, cfg);

    cfg.threads = 4;
    const auto m4 = run_experiment(cfg);
    auto cfg_echo = cfg;
    cfg_echo.threads = 1; // metadata echoes the config; normalize for the byte check
    REQUIRE(m1.points.size() == m4.points.size());
    CHECK(m1.points[0].t_total == m4.points[0].t_total);
    CHECK(m1.points[0].t_correct == m4.points[0].t_correct);
    CHECK(m1.points[0].throughput == m4.points[0].throughput);

    const auto m1b = run_experiment(tiny_config());
    CHECK(format_csv(m1b, tiny_config()) == csv1);
}

TEST_CASE("metrics are internally consistent")
{
    auto cfg = tiny_config();
    cfg.snr_db = {2.0, 6.0};
    const auto m = run_experiment(cfg);
    REQUIRE(m.points.size() == 2);
    for (const auto& p : m.points) {
        CHECK(p.per == doctest::Approx(1.0 - p.throughput));
        CHECK(p.t_correct <= p.t_total);
        CHECK(p.mean_ttis_per_packet >= 0.0);
        CHECK(p.ci95_per >= 0.0);
        CHECK(p.throughput_res <= p.throughput);
    }
}

TEST_CASE("csv emission")
{
    auto cfg = tiny_config();
    const auto m = run_experiment(cfg);
    const auto csv = format_csv(m, cfg);
    CHECK(csv.find("# ncksim") == 0);
    CHECK(csv.find("# seed=99") != std::string::npos);
    CHECK(csv.find("snr_db,trials,t_total,t_correct,throughput,per,mean_iters,"
                   "mean_ttis_per_packet,ci95_per,throughput_res") != std::string::npos);

    const auto path = (std::filesystem::temp_directory_path() / "ncksim_out.csv").string();
    emit_csv(m, cfg, path);
    std::ifstream in(path);
    std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(body == csv);
    std::remove(path.c_str());

    // Empty metrics never create a file.
    const auto missing =
        (std::filesystem::temp_directory_path() / "ncksim_should_not_exist.csv").string();
    std::remove(missing.c_str());
    CHECK_THROWS_AS(emit_csv(Metrics{}, cfg, missing), HarnessError);
    CHECK_FALSE(std::filesystem::exists(missing));
}

TEST_CASE("confidence interval shrinks with trial count")
{
    auto cfg = tiny_config();
    cfg.snr_db = {-1.0};
    cfg.trials = 4;
    const auto small = run_experiment(cfg);
    cfg.trials = 16;
    const auto big = run_experiment(cfg);
    if (small.points[0].per > 0.0 && big.points[0].per > 0.0)
        CHECK(big.points[0].ci95_per < small.points[0].ci95_per);
}
