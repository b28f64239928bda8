#pragma once
// Seeded Monte Carlo experiment runner. A run sweeps clustering algorithm x
// affiliation rule x allocation scheme x number of virtual cells over many
// independent system realizations and reports per-trial and aggregate sum
// rates as CSV.
//
// Reproducibility: trial t draws everything from split_seed(master_seed, t),
// so results are byte-identical for any worker-thread count and any subset
// of trials re-run later.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "vcell/channel_alloc.hpp"
#include "vcell/power_solver.hpp"
#include "vcell/scenario.hpp"

namespace vcell {

enum class ClusterAlgo { Hierarchical, KMeans, Spectral };
enum class Affiliation { Closest, BestChannel };
enum class Scheme { Continuous, Uc, Bsc, Msrm };
enum class EvalMode { Global, Local };

std::string to_string(ClusterAlgo a);
std::string to_string(Affiliation a);
std::string to_string(Scheme s);
std::string to_string(EvalMode m);

ClusterAlgo parse_cluster_algo(const std::string& s);
Affiliation parse_affiliation(const std::string& s); // accepts "best" for "best-channel"
Scheme parse_scheme(const std::string& s);
EvalMode parse_eval_mode(const std::string& s);

struct ExperimentConfig {
    SystemConfig system;
    int trials = 100;
    std::uint64_t master_seed = 1;
    std::vector<std::size_t> cell_counts;       // numbers of virtual cells to sweep
    std::vector<ClusterAlgo> clusterings;
    std::vector<double> spectral_sigmas;        // used when Spectral is enabled
    std::vector<Affiliation> affiliations;
    std::vector<Scheme> schemes;
    EvalMode eval_mode = EvalMode::Global;
    SolverSettings solver;
    AlternatingSettings alternating;

    void validate() const; // throws std::invalid_argument
};

// one evaluated configuration; sigma is meaningful only for Spectral
struct Combo {
    ClusterAlgo algo = ClusterAlgo::Hierarchical;
    double sigma = 0.0;
    Affiliation affiliation = Affiliation::Closest;
    Scheme scheme = Scheme::Continuous;
    std::size_t num_cells = 1;
};

// canonical enumeration order; CSV rows follow it
std::vector<Combo> enumerate_combos(const ExperimentConfig& cfg);

struct ComboOutcome {
    double sum_rate_bps = 0.0;
    bool converged = false;
    int iterations = 0; // solver outer iterations summed over cells
};

struct TrialResult {
    int trial = 0;
    std::vector<ComboOutcome> outcomes; // aligned with enumerate_combos
};

TrialResult run_trial(const ExperimentConfig& cfg, int trial_index);

struct AggregateRow {
    Combo combo;
    double mean_bps = 0.0;
    double std_bps = 0.0;    // sample standard deviation (0 for a single trial)
    double stderr_bps = 0.0; // std / sqrt(trials)
    int trials = 0;
};

struct ExperimentResult {
    std::vector<Combo> combos;
    std::vector<TrialResult> trials;
    std::vector<AggregateRow> aggregate;
};

// Runs all trials on `threads` workers (1 = inline). When raw_csv is given,
// finished trials are flushed to it incrementally in trial order.
ExperimentResult run_experiment(const ExperimentConfig& cfg, int threads = 1,
                                std::ostream* raw_csv = nullptr);

void write_raw_header(std::ostream& out);
void write_raw_rows(std::ostream& out, const std::vector<Combo>& combos,
                    const TrialResult& trial, EvalMode mode);
void write_raw_csv(std::ostream& out, const std::vector<Combo>& combos,
                   const std::vector<TrialResult>& trials, EvalMode mode);
void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows,
                         EvalMode mode);

std::vector<AggregateRow> aggregate_results(const std::vector<Combo>& combos,
                                            const std::vector<TrialResult>& trials);

ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

} // namespace vcell
