#include "ncksim/harness.hpp"
#include "ncksim/oracles.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;

// "a:b:step" -> inclusive sweep. Step may be negative-free; a <= b required.
std::vector<double> parse_sweep(const std::string& s)
{
    double a = 0, b = 0, step = 0;
    char tail = 0;
    if (std::sscanf(s.c_str(), "%lf:%lf:%lf%c", &a, &b, &step, &tail) != 3 || step <= 0 ||
        b < a)
        throw std::invalid_argument("bad sweep '" + s + "', expected a:b:step with step > 0");
    std::vector<double> out;
    for (double v = a; v <= b + 1e-9; v += step)
        out.push_back(v);
    return out;
}

int run_simulate(const std::string& config_path, const std::string& snr_override,
                 int trials_override, long long seed_override, const std::string& out_override,
                 int threads_override, bool verbose)
{
    ncksim::ExperimentConfig cfg;
    try {
        cfg = ncksim::ExperimentConfig::from_json_file(config_path);
        if (!snr_override.empty())
            cfg.snr_db = parse_sweep(snr_override);
        if (trials_override > 0)
            cfg.trials = trials_override;
        if (seed_override >= 0)
            cfg.master_seed = static_cast<std::uint64_t>(seed_override);
        if (!out_override.empty())
            cfg.output_path = out_override;
        if (threads_override > 0)
            cfg.threads = threads_override;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        if (verbose)
            std::cerr << "config: " << cfg.to_json() << "\n";
        ncksim::Metrics metrics = ncksim::run_experiment(cfg);
        const std::string csv = ncksim::format_csv(metrics, cfg);
        if (cfg.output_path.empty()) {
            std::cout << csv;
        } else {
            ncksim::emit_csv(metrics, cfg, cfg.output_path);
            if (verbose)
                std::cerr << "wrote " << cfg.output_path << "\n";
        }
    } catch (const ncksim::HarnessError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitOk;
}

int run_validate(const std::string& config_path)
{
    try {
        ncksim::ExperimentConfig cfg = ncksim::ExperimentConfig::from_json_file(config_path);
        ncksim::Codebook cb = ncksim::load_codebook(cfg.codebook_path);
        ncksim::LdpcCode code = ncksim::LdpcCode::load_alist(cfg.ldpc_path);
        ncksim::NckConfig nck = ncksim::derive_config(cfg.scheme.K_eq, cfg.scheme.T,
                                                      cfg.scheme.K_in, code.n(), cb.b);
        ncksim::Schedule sched = ncksim::build_schedule(nck, cfg.scheme.layout);
        std::cout << "ok: J=" << cb.J << " R=" << cb.R << " M=" << cb.M << ", N=" << code.n()
                  << " info=" << code.info_len() << ", K_nc=" << nck.K_nc
                  << " N_R=" << nck.N_R << " slots=" << sched.slots.size() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitOk;
}

int run_oracle(const std::string& name)
{
    std::vector<ncksim::oracles::Report> reports;
    try {
        if (name == "all")
            reports = ncksim::oracles::run_all();
        else
            reports.push_back(ncksim::oracles::run(name));
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "; known:";
        for (const auto& n : ncksim::oracles::names())
            std::cerr << " " << n;
        std::cerr << "\n";
        return kExitConfig;
    }
    bool all_ok = true;
    for (const auto& r : reports) {
        std::cout << r.name << ": " << (r.passed ? "pass" : "FAIL") << " (" << r.detail
                  << ")\n";
        all_ok &= r.passed;
    }
    return all_ok ? kExitOk : kExitConfig;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"LDPC-coded SCMA uplink simulator with network-coded K-repetition HARQ"};
    app.require_subcommand(1);

    std::string config_path, snr_override, out_override, oracle_name;
    int trials_override = 0, threads_override = 0;
    long long seed_override = -1;
    bool verbose = false;

    auto* sim = app.add_subcommand("simulate", "run an SNR sweep and emit CSV");
    sim->add_option("--config", config_path, "experiment config (JSON)")->required();
    sim->add_option("--snr-override", snr_override, "sweep a:b:step in dB");
    sim->add_option("--trials", trials_override, "override trial count");
    sim->add_option("--seed", seed_override, "override master seed");
    sim->add_option("--out", out_override, "CSV output path (default stdout)");
    sim->add_option("--threads", threads_override, "worker thread count");
    sim->add_flag("--verbose", verbose, "progress output on stderr");

    auto* val = app.add_subcommand("validate", "dry-run config and file checks");
    val->add_option("--config", config_path, "experiment config (JSON)")->required();

    auto* orc = app.add_subcommand("oracle", "run a named brute-force oracle suite");
    orc->add_option("name", oracle_name, "suite name or 'all'")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    if (sim->parsed())
        return run_simulate(config_path, snr_override, trials_override, seed_override,
                            out_override, threads_override, verbose);
    if (val->parsed())
        return run_validate(config_path);
    return run_oracle(oracle_name);
}
