#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ncksim/channel.hpp"
#include "ncksim/detector.hpp"
#include "ncksim/harq.hpp"
#include "ncksim/schedule.hpp"

namespace ncksim {

struct HarnessError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SchemeSpec {
    int K_eq = 0;
    int T = 0;
    int K_in = 0;
    Layout layout = Layout::KScma;
};

struct ExperimentConfig {
    std::string codebook_path;
    std::string ldpc_path;
    SchemeSpec scheme;
    int n_re = 0;
    std::vector<double> snr_db;
    int trials = 1;
    Fading fading = Fading::RayleighIid;
    SnrConvention snr_convention = SnrConvention::EsN0;
    std::uint64_t master_seed = 1;
    std::string output_path;
    int threads = 1;
    DetectorConfig detector;

    static ExperimentConfig from_json_file(const std::string& path);
    std::string to_json() const;
};

struct SnrPointMetrics {
    double snr_db = 0.0;
    long long trials = 0;
    long long t_total = 0;
    long long t_correct = 0;
    double throughput = 0.0;       // Eq.-style packet ratio, the headline column
    double per = 0.0;
    double mean_iters = 0.0;       // detector iterations per round
    double mean_ttis_per_packet = 0.0;
    double ci95_per = 0.0;
    double throughput_res = 0.0;   // correct packets per consumed user-TTI
};

struct Metrics {
    std::vector<SnrPointMetrics> points;
};

double compute_throughput(long long t_correct, long long t_total);

// Runs the full SNR sweep. Deterministic for a fixed master seed regardless
// of the worker count: per-trial RNG streams are derived from
// (seed, snr index, trial index) and aggregation is exact integer summation
// in trial order.
Metrics run_experiment(const ExperimentConfig& cfg);

void emit_csv(const Metrics& metrics, const ExperimentConfig& cfg, const std::string& path);
std::string format_csv(const Metrics& metrics, const ExperimentConfig& cfg);

} // namespace ncksim
