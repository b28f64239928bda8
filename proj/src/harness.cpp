#include "vcell/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "vcell/clustering.hpp"
#include "vcell/format.hpp"
#include "vcell/rate_core.hpp"
#include "vcell/virtual_cells.hpp"

namespace vcell {

std::string to_string(ClusterAlgo a) {
    switch (a) {
        case ClusterAlgo::Hierarchical: return "hierarchical";
        case ClusterAlgo::KMeans: return "kmeans";
        case ClusterAlgo::Spectral: return "spectral";
    }
    return "?";
}

std::string to_string(Affiliation a) {
    return a == Affiliation::Closest ? "closest" : "best-channel";
}

std::string to_string(Scheme s) {
    switch (s) {
        case Scheme::Continuous: return "continuous";
        case Scheme::Uc: return "uc";
        case Scheme::Bsc: return "bsc";
        case Scheme::Msrm: return "msrm";
    }
    return "?";
}

std::string to_string(EvalMode m) { return m == EvalMode::Global ? "global" : "local"; }

ClusterAlgo parse_cluster_algo(const std::string& s) {
    if (s == "hierarchical") return ClusterAlgo::Hierarchical;
    if (s == "kmeans") return ClusterAlgo::KMeans;
    if (s == "spectral") return ClusterAlgo::Spectral;
    throw std::invalid_argument("unknown clustering algorithm: " + s);
}

Affiliation parse_affiliation(const std::string& s) {
    if (s == "closest") return Affiliation::Closest;
    if (s == "best-channel" || s == "best") return Affiliation::BestChannel;
    throw std::invalid_argument("unknown affiliation rule: " + s);
}

Scheme parse_scheme(const std::string& s) {
    if (s == "continuous") return Scheme::Continuous;
    if (s == "uc") return Scheme::Uc;
    if (s == "bsc") return Scheme::Bsc;
    if (s == "msrm") return Scheme::Msrm;
    throw std::invalid_argument("unknown scheme: " + s);
}

EvalMode parse_eval_mode(const std::string& s) {
    if (s == "global") return EvalMode::Global;
    if (s == "local") return EvalMode::Local;
    throw std::invalid_argument("unknown eval mode: " + s);
}

void ExperimentConfig::validate() const {
    system.validate();
    auto fail = [](const std::string& msg) {
        throw std::invalid_argument("ExperimentConfig: " + msg);
    };
    if (trials < 1) fail("trials must be >= 1");
    if (cell_counts.empty()) fail("cell_counts must not be empty");
    for (std::size_t m : cell_counts)
        if (m < 1 || m > system.num_bs) fail("cell count " + std::to_string(m) +
                                             " outside [1, num_bs]");
    if (clusterings.empty()) fail("at least one clustering algorithm required");
    if (affiliations.empty()) fail("at least one affiliation rule required");
    if (schemes.empty()) fail("at least one scheme required");
    const bool wants_spectral =
        std::find(clusterings.begin(), clusterings.end(), ClusterAlgo::Spectral) !=
        clusterings.end();
    if (wants_spectral) {
        if (spectral_sigmas.empty()) fail("spectral clustering requires sigmas");
        for (double s : spectral_sigmas)
            if (!(s > 0.0)) fail("spectral sigma must be > 0");
    }
    if (solver.outer_max < 1 || solver.inner_max < 1) fail("solver iteration caps must be >= 1");
    if (!(solver.fp_tol > 0.0) || !(solver.power_floor > 0.0) || !(solver.lambda_tol > 0.0))
        fail("solver tolerances must be > 0");
    if (!(alternating.delta > 0.0) || alternating.n_max < 1)
        fail("alternating settings must be positive");
}

std::vector<Combo> enumerate_combos(const ExperimentConfig& cfg) {
    // canonical order, independent of the order lists appear in the config
    std::vector<ClusterAlgo> algos;
    for (auto a : {ClusterAlgo::Hierarchical, ClusterAlgo::KMeans, ClusterAlgo::Spectral})
        if (std::find(cfg.clusterings.begin(), cfg.clusterings.end(), a) != cfg.clusterings.end())
            algos.push_back(a);
    std::vector<double> sigmas = cfg.spectral_sigmas;
    std::sort(sigmas.begin(), sigmas.end());
    std::vector<Affiliation> affils;
    for (auto a : {Affiliation::Closest, Affiliation::BestChannel})
        if (std::find(cfg.affiliations.begin(), cfg.affiliations.end(), a) != cfg.affiliations.end())
            affils.push_back(a);
    std::vector<Scheme> schemes;
    for (auto s : {Scheme::Continuous, Scheme::Uc, Scheme::Bsc, Scheme::Msrm})
        if (std::find(cfg.schemes.begin(), cfg.schemes.end(), s) != cfg.schemes.end())
            schemes.push_back(s);
    std::vector<std::size_t> cells = cfg.cell_counts;
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());

    std::vector<Combo> out;
    for (auto algo : algos) {
        const std::vector<double> svals =
            algo == ClusterAlgo::Spectral ? sigmas : std::vector<double>{0.0};
        for (double sigma : svals)
            for (auto aff : affils)
                for (auto scheme : schemes)
                    for (std::size_t m : cells) out.push_back({algo, sigma, aff, scheme, m});
    }
    return out;
}

namespace {

// sub-stream positions within a trial seed
constexpr std::uint64_t kStreamDeployment = 0;
constexpr std::uint64_t kStreamChannels = 1;
constexpr std::uint64_t kStreamKMeansBase = 100;    // + m
constexpr std::uint64_t kStreamSpectralBase = 1000; // + 64*sigma_index + m

std::string partition_signature(const VirtualCellPartition& p) {
    std::string s;
    for (const auto& c : p.cells) {
        s += 'b';
        for (auto b : c.bs) {
            s += std::to_string(b);
            s += ',';
        }
        s += 'u';
        for (auto u : c.users) {
            s += std::to_string(u);
            s += ',';
        }
        s += '|';
    }
    return s;
}

AllocationRule rule_of(Scheme s) {
    switch (s) {
        case Scheme::Uc: return AllocationRule::UserCentric;
        case Scheme::Bsc: return AllocationRule::BsCentric;
        case Scheme::Msrm: return AllocationRule::MaxSumRateMatching;
        default: throw std::logic_error("rule_of: continuous scheme has no rule");
    }
}

ComboOutcome solve_partition(const ExperimentConfig& cfg, const ChannelRealization& chan,
                             const VirtualCellPartition& partition,
                             const std::vector<CellView>& views, Scheme scheme) {
    std::vector<CellSolution> solutions;
    solutions.reserve(partition.cells.size());
    ComboOutcome out;
    out.converged = true;
    double local_rate = 0.0;
    for (const auto& view : views) {
        if (scheme == Scheme::Continuous) {
            PowerSolveResult ps = solve_power_continuous(view, cfg.solver);
            local_rate += ps.rate_bps;
            out.converged = out.converged && ps.converged;
            out.iterations += ps.outer_iters;
            solutions.push_back({std::nullopt, std::move(ps.power)});
        } else {
            AlternatingResult ar =
                alternating_solve(view, rule_of(scheme), cfg.alternating, cfg.solver);
            local_rate += ar.rate_bps;
            out.converged = out.converged && !ar.hit_iteration_cap;
            out.iterations += ar.iterations;
            solutions.push_back({std::move(ar.gamma), std::move(ar.power)});
        }
    }
    out.sum_rate_bps = cfg.eval_mode == EvalMode::Global
                           ? system_sum_rate(partition, chan, cfg.system, solutions)
                           : local_rate;
    return out;
}

} // namespace

TrialResult run_trial(const ExperimentConfig& cfg, int trial_index) {
    const std::uint64_t trial_seed = split_seed(cfg.master_seed, std::uint64_t(trial_index));

    Rng rng_dep(split_seed(trial_seed, kStreamDeployment));
    Rng rng_chan(split_seed(trial_seed, kStreamChannels));
    const Deployment dep = generate_deployment(cfg.system, rng_dep);
    const ChannelRealization chan = generate_channels(cfg.system, dep, rng_chan);

    const auto combos = enumerate_combos(cfg);

    const bool wants_hier =
        std::any_of(combos.begin(), combos.end(),
                    [](const Combo& c) { return c.algo == ClusterAlgo::Hierarchical; });
    Dendrogram dendro;
    if (wants_hier) dendro = hierarchical_cluster(dep.bs);

    std::vector<double> sigmas = cfg.spectral_sigmas;
    std::sort(sigmas.begin(), sigmas.end());
    auto sigma_index = [&](double sigma) {
        return std::size_t(std::find(sigmas.begin(), sigmas.end(), sigma) - sigmas.begin());
    };

    // caches; everything is deterministic per trial, so combo order is free
    std::map<std::tuple<int, std::size_t, std::size_t>, Clustering> clusterings;
    std::map<std::tuple<int, std::size_t, std::size_t, int>, VirtualCellPartition> partitions;
    std::map<std::string, std::vector<CellView>> view_cache;
    std::map<std::pair<std::string, int>, ComboOutcome> solved;

    TrialResult result;
    result.trial = trial_index;
    result.outcomes.reserve(combos.size());

    for (const auto& combo : combos) {
        try {
            const std::size_t sidx =
                combo.algo == ClusterAlgo::Spectral ? sigma_index(combo.sigma) : 0;
            const auto ckey = std::make_tuple(int(combo.algo), sidx, combo.num_cells);
            auto cit = clusterings.find(ckey);
            if (cit == clusterings.end()) {
                Clustering cl;
                switch (combo.algo) {
                    case ClusterAlgo::Hierarchical:
                        cl = cut_dendrogram(dendro, combo.num_cells);
                        break;
                    case ClusterAlgo::KMeans: {
                        Rng rng(split_seed(trial_seed, kStreamKMeansBase + combo.num_cells));
                        cl = kmeans_cluster(dep.bs, combo.num_cells, rng);
                        break;
                    }
                    case ClusterAlgo::Spectral: {
                        Rng rng(split_seed(trial_seed,
                                           kStreamSpectralBase + 64 * sidx + combo.num_cells));
                        cl = spectral_cluster(dep.bs, combo.num_cells, combo.sigma, rng);
                        break;
                    }
                }
                cit = clusterings.emplace(ckey, std::move(cl)).first;
            }

            const auto pkey =
                std::make_tuple(int(combo.algo), sidx, combo.num_cells, int(combo.affiliation));
            auto pit = partitions.find(pkey);
            if (pit == partitions.end()) {
                VirtualCellPartition p =
                    combo.affiliation == Affiliation::Closest
                        ? affiliate_closest(dep, cit->second)
                        : affiliate_best_channel(chan, cit->second);
                pit = partitions.emplace(pkey, std::move(p)).first;
            }
            const VirtualCellPartition& partition = pit->second;

            const std::string sig = partition_signature(partition);
            const auto skey = std::make_pair(sig, int(combo.scheme));
            auto sit = solved.find(skey);
            if (sit == solved.end()) {
                auto vit = view_cache.find(sig);
                if (vit == view_cache.end()) {
                    std::vector<CellView> views;
                    views.reserve(partition.cells.size());
                    for (const auto& cell : partition.cells)
                        views.push_back(make_cell_view(cell, chan, cfg.system));
                    vit = view_cache.emplace(sig, std::move(views)).first;
                }
                sit = solved
                          .emplace(skey, solve_partition(cfg, chan, partition, vit->second,
                                                         combo.scheme))
                          .first;
            }
            result.outcomes.push_back(sit->second);
        } catch (const std::exception&) {
            // a failed solve is recorded, never fatal for the trial
            result.outcomes.push_back(
                {std::numeric_limits<double>::quiet_NaN(), false, 0});
        }
    }
    return result;
}

void write_raw_header(std::ostream& out) {
    out << "trial,clustering,sigma,affiliation,scheme,num_cells,eval_mode,"
           "sum_rate_bps,converged\n";
}

void write_raw_rows(std::ostream& out, const std::vector<Combo>& combos,
                    const TrialResult& trial, EvalMode mode) {
    for (std::size_t i = 0; i < combos.size(); ++i) {
        const Combo& c = combos[i];
        const ComboOutcome& o = trial.outcomes.at(i);
        out << trial.trial << ',' << to_string(c.algo) << ',';
        if (c.algo == ClusterAlgo::Spectral) out << format_double(c.sigma);
        out << ',' << to_string(c.affiliation) << ',' << to_string(c.scheme) << ','
            << c.num_cells << ',' << to_string(mode) << ','
            << format_double(o.sum_rate_bps) << ',' << (o.converged ? 1 : 0) << '\n';
    }
}

void write_raw_csv(std::ostream& out, const std::vector<Combo>& combos,
                   const std::vector<TrialResult>& trials, EvalMode mode) {
    write_raw_header(out);
    for (const auto& t : trials) write_raw_rows(out, combos, t, mode);
}

std::vector<AggregateRow> aggregate_results(const std::vector<Combo>& combos,
                                            const std::vector<TrialResult>& trials) {
    std::vector<AggregateRow> rows(combos.size());
    const std::size_t n = trials.size();
    for (std::size_t i = 0; i < combos.size(); ++i) {
        AggregateRow& r = rows[i];
        r.combo = combos[i];
        r.trials = int(n);
        double sum = 0.0;
        for (const auto& t : trials) sum += t.outcomes.at(i).sum_rate_bps;
        r.mean_bps = sum / double(n);
        if (n > 1) {
            double ss = 0.0;
            for (const auto& t : trials) {
                const double d = t.outcomes.at(i).sum_rate_bps - r.mean_bps;
                ss += d * d;
            }
            r.std_bps = std::sqrt(ss / double(n - 1));
            r.stderr_bps = r.std_bps / std::sqrt(double(n));
        }
    }
    return rows;
}

void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows,
                         EvalMode mode) {
    out << "clustering,sigma,affiliation,scheme,num_cells,eval_mode,mean_bps,"
           "std_bps,stderr_bps,trials\n";
    for (const auto& r : rows) {
        out << to_string(r.combo.algo) << ',';
        if (r.combo.algo == ClusterAlgo::Spectral) out << format_double(r.combo.sigma);
        out << ',' << to_string(r.combo.affiliation) << ',' << to_string(r.combo.scheme)
            << ',' << r.combo.num_cells << ',' << to_string(mode) << ','
            << format_double(r.mean_bps) << ',' << format_double(r.std_bps) << ','
            << format_double(r.stderr_bps) << ',' << r.trials << '\n';
    }
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, int threads,
                                std::ostream* raw_csv) {
    cfg.validate();

    ExperimentResult res;
    res.combos = enumerate_combos(cfg);
    res.trials.resize(std::size_t(cfg.trials));
    if (raw_csv) write_raw_header(*raw_csv);

    std::atomic<int> next{0};
    std::vector<char> done(std::size_t(cfg.trials), 0);
    std::mutex mu;
    std::condition_variable cv;
    std::exception_ptr first_error;

    auto worker = [&] {
        for (;;) {
            const int t = next.fetch_add(1);
            if (t >= cfg.trials) return;
            try {
                TrialResult tr = run_trial(cfg, t);
                {
                    std::lock_guard lock(mu);
                    res.trials[std::size_t(t)] = std::move(tr);
                    done[std::size_t(t)] = 1;
                }
            } catch (...) {
                {
                    std::lock_guard lock(mu);
                    if (!first_error) first_error = std::current_exception();
                    done[std::size_t(t)] = 2;
                }
            }
            cv.notify_all();
        }
    };

    std::vector<std::thread> pool;
    const int n_workers = std::max(1, threads);
    pool.reserve(std::size_t(n_workers));
    for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);

    // flush finished trials in index order so output bytes never depend on
    // the schedule
    {
        std::unique_lock lock(mu);
        for (int t = 0; t < cfg.trials; ++t) {
            cv.wait(lock, [&] { return done[std::size_t(t)] != 0; });
            if (done[std::size_t(t)] == 1 && raw_csv)
                write_raw_rows(*raw_csv, res.combos, res.trials[std::size_t(t)],
                               cfg.eval_mode);
        }
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
    if (raw_csv) raw_csv->flush();

    res.aggregate = aggregate_results(res.combos, res.trials);
    return res;
}

namespace {

template <typename T, typename F>
std::vector<T> parse_list(const nlohmann::json& j, F&& parse_one) {
    std::vector<T> out;
    for (const auto& item : j) out.push_back(parse_one(item.get<std::string>()));
    return out;
}

} // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("ExperimentConfig: invalid JSON: ") + e.what());
    }

    ExperimentConfig cfg;
    try {
        if (!j.contains("system"))
            throw std::invalid_argument("ExperimentConfig: missing \"system\" object");
        cfg.system = parse_system_config(j.at("system").dump());

        if (j.contains("trials")) cfg.trials = j.at("trials").get<int>();
        if (j.contains("master_seed")) cfg.master_seed = j.at("master_seed").get<std::uint64_t>();

        if (j.contains("cell_counts")) {
            cfg.cell_counts = j.at("cell_counts").get<std::vector<std::size_t>>();
        } else {
            for (std::size_t m = 1; m <= cfg.system.num_bs; ++m) cfg.cell_counts.push_back(m);
        }

        cfg.clusterings = j.contains("clusterings")
                              ? parse_list<ClusterAlgo>(j.at("clusterings"), parse_cluster_algo)
                              : std::vector<ClusterAlgo>{ClusterAlgo::Hierarchical};
        cfg.spectral_sigmas = j.contains("sigmas")
                                  ? j.at("sigmas").get<std::vector<double>>()
                                  : std::vector<double>{std::sqrt(1000.0), 1000.0};
        cfg.affiliations =
            j.contains("affiliations")
                ? parse_list<Affiliation>(j.at("affiliations"), parse_affiliation)
                : std::vector<Affiliation>{Affiliation::Closest, Affiliation::BestChannel};
        cfg.schemes = j.contains("schemes")
                          ? parse_list<Scheme>(j.at("schemes"), parse_scheme)
                          : std::vector<Scheme>{Scheme::Continuous, Scheme::Uc, Scheme::Bsc,
                                                Scheme::Msrm};
        if (j.contains("eval_mode"))
            cfg.eval_mode = parse_eval_mode(j.at("eval_mode").get<std::string>());

        if (j.contains("solver")) {
            const auto& s = j.at("solver");
            if (s.contains("outer_max")) cfg.solver.outer_max = s.at("outer_max").get<int>();
            if (s.contains("inner_max")) cfg.solver.inner_max = s.at("inner_max").get<int>();
            if (s.contains("fp_tol")) cfg.solver.fp_tol = s.at("fp_tol").get<double>();
            if (s.contains("power_floor"))
                cfg.solver.power_floor = s.at("power_floor").get<double>();
            if (s.contains("lambda_tol"))
                cfg.solver.lambda_tol = s.at("lambda_tol").get<double>();
        }
        if (j.contains("alternating")) {
            const auto& a = j.at("alternating");
            if (a.contains("delta")) cfg.alternating.delta = a.at("delta").get<double>();
            if (a.contains("n_max")) cfg.alternating.n_max = a.at("n_max").get<int>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("ExperimentConfig: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_experiment_config(ss.str());
}

} // namespace vcell
