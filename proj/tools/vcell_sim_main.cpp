// vcell-sim: run seeded virtual-cell resource allocation experiments and
// write raw/aggregate sum-rate CSVs, or just validate a config file.

#include <chrono>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "vcell/harness.hpp"

namespace {

int run_command(const std::string& config_path, int trials, std::int64_t seed,
                const std::vector<std::size_t>& cells,
                const std::vector<std::string>& schemes,
                const std::vector<std::string>& affiliations,
                const std::vector<std::string>& clusterings,
                const std::vector<double>& sigmas, const std::string& eval,
                const std::string& out_path, const std::string& agg_path, int threads) {
    vcell::ExperimentConfig cfg = vcell::load_experiment_config(config_path);

    if (trials > 0) cfg.trials = trials;
    if (seed >= 0) cfg.master_seed = std::uint64_t(seed);
    if (!cells.empty()) cfg.cell_counts = cells;
    if (!schemes.empty()) {
        cfg.schemes.clear();
        for (const auto& s : schemes) cfg.schemes.push_back(vcell::parse_scheme(s));
    }
    if (!affiliations.empty()) {
        cfg.affiliations.clear();
        for (const auto& a : affiliations)
            cfg.affiliations.push_back(vcell::parse_affiliation(a));
    }
    if (!clusterings.empty()) {
        cfg.clusterings.clear();
        for (const auto& c : clusterings)
            cfg.clusterings.push_back(vcell::parse_cluster_algo(c));
    }
    if (!sigmas.empty()) cfg.spectral_sigmas = sigmas;
    if (!eval.empty()) cfg.eval_mode = vcell::parse_eval_mode(eval);
    cfg.validate();

    std::ofstream raw(out_path, std::ios::binary);
    if (!raw) throw std::runtime_error("cannot open output file: " + out_path);

    const auto t0 = std::chrono::steady_clock::now();
    const vcell::ExperimentResult result = vcell::run_experiment(cfg, threads, &raw);
    raw.close();
    if (!raw) throw std::runtime_error("error writing output file: " + out_path);

    std::ofstream agg(agg_path, std::ios::binary);
    if (!agg) throw std::runtime_error("cannot open aggregate file: " + agg_path);
    vcell::write_aggregate_csv(agg, result.aggregate, cfg.eval_mode);
    agg.close();
    if (!agg) throw std::runtime_error("error writing aggregate file: " + agg_path);

    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "ran " << cfg.trials << " trials x " << result.combos.size()
              << " configurations in " << secs << " s\n"
              << "raw rows:  " << out_path << "\naggregate: " << agg_path << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"virtual-cell uplink resource allocation simulator"};
    app.require_subcommand(1);

    std::string config_path;
    int trials = 0;
    std::int64_t seed = -1;
    std::vector<std::size_t> cells;
    std::vector<std::string> schemes, affiliations, clusterings;
    std::vector<double> sigmas;
    std::string eval;
    std::string out_path = "raw.csv", agg_path = "agg.csv";
    int threads = int(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;

    CLI::App* run = app.add_subcommand("run", "run an experiment sweep");
    run->add_option("--config", config_path, "experiment config JSON")->required();
    run->add_option("--trials", trials, "override the number of trials");
    run->add_option("--seed", seed, "override the master seed");
    run->add_option("--cells", cells, "numbers of virtual cells, e.g. 1,2,5,10")
        ->delimiter(',');
    run->add_option("--scheme", schemes, "continuous,uc,bsc,msrm")->delimiter(',');
    run->add_option("--affiliation", affiliations, "closest,best")->delimiter(',');
    run->add_option("--clustering", clusterings, "hierarchical,kmeans,spectral")
        ->delimiter(',');
    run->add_option("--sigma", sigmas, "spectral kernel widths")->delimiter(',');
    run->add_option("--eval", eval, "global|local interference at evaluation");
    run->add_option("--out", out_path, "raw per-trial CSV path");
    run->add_option("--agg", agg_path, "aggregate CSV path");
    run->add_option("--threads", threads, "worker threads");

    std::string validate_config;
    CLI::App* validate = app.add_subcommand("validate", "check a config file");
    validate->add_option("--config", validate_config, "experiment config JSON")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(run))
            return run_command(config_path, trials, seed, cells, schemes, affiliations,
                               clusterings, sigmas, eval, out_path, agg_path, threads);
        vcell::ExperimentConfig cfg = vcell::load_experiment_config(validate_config);
        std::cout << "ok: " << cfg.system.num_bs << " BSs, " << cfg.system.num_users
                  << " users, " << cfg.system.num_bands << " bands, " << cfg.trials
                  << " trials, " << vcell::enumerate_combos(cfg).size()
                  << " configurations\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
