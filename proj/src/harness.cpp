#include "ncksim/harness.hpp"
#include "ncksim/codebook.hpp"
#include "ncksim/ldpc.hpp"

#include <json.hpp>

#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

namespace ncksim {

namespace {
constexpr const char* kVersion = "ncksim 1.0.0";
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw HarnessError("config: cannot open " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw HarnessError("config: parse failure in " + path + ": " + e.what());
    }

    ExperimentConfig cfg;
    try {
        cfg.codebook_path = doc.at("codebook").get<std::string>();
        cfg.ldpc_path = doc.at("ldpc").get<std::string>();
        const auto& s = doc.at("scheme");
        cfg.scheme.K_eq = s.at("K_eq").get<int>();
        cfg.scheme.T = s.at("T").get<int>();
        cfg.scheme.K_in = s.at("K_in").get<int>();
        cfg.scheme.layout = layout_from_string(s.at("layout").get<std::string>());
        cfg.n_re = doc.value("n_re", 0);
        cfg.snr_db = doc.at("snr_db").get<std::vector<double>>();
        cfg.trials = doc.at("trials").get<int>();
        cfg.fading = fading_from_string(doc.value("fading", std::string("rayleigh_iid")));
        cfg.snr_convention =
            snr_convention_from_string(doc.value("snr_convention", std::string("es_n0")));
        cfg.master_seed = doc.value("seed", std::uint64_t{1});
        cfg.output_path = doc.value("out", std::string{});
        cfg.threads = doc.value("threads", 1);
        if (doc.contains("detector")) {
            const auto& d = doc.at("detector");
            cfg.detector.max_iter = d.value("max_iter", 50);
            cfg.detector.damping = d.value("damping", 1.0);
            cfg.detector.max_log = d.value("max_log", false);
        }
    } catch (const nlohmann::json::exception& e) {
        throw HarnessError("config: malformed structure in " + path + ": " + e.what());
    }

    if (cfg.trials < 1)
        throw HarnessError("config: trials must be >= 1");
    if (cfg.snr_db.empty())
        throw HarnessError("config: snr_db must be nonempty");
    if (cfg.threads < 1)
        throw HarnessError("config: threads must be >= 1");
    return cfg;
}

std::string ExperimentConfig::to_json() const
{
    nlohmann::json doc;
    doc["codebook"] = codebook_path;
    doc["ldpc"] = ldpc_path;
    doc["scheme"] = {{"K_eq", scheme.K_eq},
                     {"T", scheme.T},
                     {"K_in", scheme.K_in},
                     {"layout", to_string(scheme.layout)}};
    doc["n_re"] = n_re;
    doc["snr_db"] = snr_db;
    doc["trials"] = trials;
    doc["fading"] = to_string(fading);
    doc["snr_convention"] = to_string(snr_convention);
    doc["seed"] = master_seed;
    doc["detector"] = {{"max_iter", detector.max_iter},
                       {"damping", detector.damping},
                       {"max_log", detector.max_log}};
    return doc.dump();
}

double compute_throughput(long long t_correct, long long t_total)
{
    if (t_total < 1)
        throw HarnessError("compute_throughput: T_total must be >= 1");
    if (t_correct < 0 || t_correct > t_total)
        throw HarnessError("compute_throughput: T_correct out of range");
    return static_cast<double>(t_correct) / static_cast<double>(t_total);
}

namespace {

struct TrialResult {
    long long packets = 0;
    long long correct = 0;
    long long rounds = 0;
    long long iterations = 0;
    long long ttis = 0;
};

} // namespace

Metrics run_experiment(const ExperimentConfig& cfg)
{
    Codebook cb = load_codebook(cfg.codebook_path);
    LdpcCode code = LdpcCode::load_alist(cfg.ldpc_path);

    NckConfig nck = derive_config(cfg.scheme.K_eq, cfg.scheme.T, cfg.scheme.K_in,
                                  code.n(), cb.b);
    Schedule sched = build_schedule(nck, cfg.scheme.layout);
    JointDetector detector(cb, code, nck, sched, cfg.detector);
    HarqController harq(cb, code, nck, sched, detector, cfg.n_re, cfg.fading);

    const double rate = static_cast<double>(code.info_len()) / code.n();

    Metrics metrics;
    for (std::size_t si = 0; si < cfg.snr_db.size(); ++si) {
        const double snr = cfg.snr_db[si];
        const double n0 = snr_to_n0(snr, cfg.snr_convention, rate, cb.b);

        std::vector<TrialResult> results(cfg.trials);
        auto run_trial = [&](int trial) {
            const std::uint64_t group_seed =
                RngStream::mix(RngStream::mix(cfg.master_seed, si), trial);
            GroupResult g = harq.run_group(group_seed, n0);
            TrialResult& tr = results[trial];
            tr.packets = static_cast<long long>(g.outcomes.size());
            for (const auto& o : g.outcomes)
                tr.correct += o.success ? 1 : 0;
            tr.rounds = g.rounds;
            tr.iterations = g.detector_iterations;
            tr.ttis = g.ttis * cb.J; // user-TTI accounting: all J users share each TTI
        };

        if (cfg.threads == 1) {
            for (int trial = 0; trial < cfg.trials; ++trial)
                run_trial(trial);
        } else {
            std::atomic<int> next{0};
            std::vector<std::thread> workers;
            const int nthreads = std::min(cfg.threads, cfg.trials);
            workers.reserve(nthreads);
            for (int w = 0; w < nthreads; ++w)
                workers.emplace_back([&] {
                    for (int trial = next.fetch_add(1); trial < cfg.trials;
                         trial = next.fetch_add(1))
                        run_trial(trial);
                });
            for (auto& th : workers)
                th.join();
        }

        SnrPointMetrics pt;
        pt.snr_db = snr;
        pt.trials = cfg.trials;
        long long rounds = 0, iters = 0, ttis = 0;
        for (const auto& tr : results) {
            pt.t_total += tr.packets;
            pt.t_correct += tr.correct;
            rounds += tr.rounds;
            iters += tr.iterations;
            ttis += tr.ttis;
        }
        pt.throughput = compute_throughput(pt.t_correct, pt.t_total);
        pt.per = 1.0 - pt.throughput;
        pt.mean_iters = rounds > 0 ? static_cast<double>(iters) / rounds : 0.0;
        pt.mean_ttis_per_packet =
            pt.t_total > 0 ? static_cast<double>(ttis) / pt.t_total : 0.0;
        pt.throughput_res = ttis > 0 ? static_cast<double>(pt.t_correct) / ttis : 0.0;
        const double p = pt.per;
        pt.ci95_per = 1.96 * std::sqrt(std::max(p * (1.0 - p), 0.0) /
                                       static_cast<double>(pt.t_total));
        metrics.points.push_back(pt);
    }
    return metrics;
}

std::string format_csv(const Metrics& metrics, const ExperimentConfig& cfg)
{
    if (metrics.points.empty())
        throw HarnessError("emit_csv: empty metrics");
    std::ostringstream out;
    out.setf(std::ios::fmtflags(0), std::ios::floatfield);
    out.precision(12);
    out << "# " << kVersion << "\n";
    out << "# seed=" << cfg.master_seed << "\n";
    out << "# config=" << cfg.to_json() << "\n";
    out << "snr_db,trials,t_total,t_correct,throughput,per,mean_iters,"
           "mean_ttis_per_packet,ci95_per,throughput_res\n";
    for (const auto& p : metrics.points) {
        out << p.snr_db << ',' << p.trials << ',' << p.t_total << ',' << p.t_correct << ','
            << p.throughput << ',' << p.per << ',' << p.mean_iters << ','
            << p.mean_ttis_per_packet << ',' << p.ci95_per << ',' << p.throughput_res
            << "\n";
    }
    return out.str();
}

void emit_csv(const Metrics& metrics, const ExperimentConfig& cfg, const std::string& path)
{
    std::string body = format_csv(metrics, cfg); // throws before the file is touched
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw HarnessError("emit_csv: cannot open " + path);
    out << body;
    if (!out)
        throw HarnessError("emit_csv: write failure on " + path);
}

} // namespace ncksim
