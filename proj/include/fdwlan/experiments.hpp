#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fdwlan/simulator.hpp"

namespace fdwlan {

/// One curve of an experiment: duplex mode, aggregation scheme, rho assignment.
struct Variant {
    std::string name;
    Duplex duplex = Duplex::Ibfd;
    AggregationMode aggregation = AggregationMode::None;
    RhoSpec rho = RhoSpec::deterministic(0.3);
};

struct ExperimentSpec {
    enum class Kind {
        Sweep,             // throughput/latency vs n, analytic + simulated
        AggregationTable,  // per-mode gamma/rho_new/phi/eta at fixed rho
        RuleTable,         // gamma/rho_new over the whole rho grid
        TrafficTable,      // E[gamma], phi, eta under random rho, many runs
    };

    std::string name;
    Kind kind = Kind::Sweep;
    std::vector<int> sweep;  // node counts (Sweep); single n otherwise
    std::vector<Variant> variants;
    int runs = 1;
    int64_t horizon_events = 1000000;
    uint64_t master_seed = kDefaultSeed;
    PhyMacParams phy_mac;
    BackoffParams backoff;

    void validate() const;
};

struct ResultRow {
    std::string experiment;
    std::string variant;
    int n = 0;
    std::string metric;
    double analytical = 0.0;
    double sim_mean = 0.0;
    double sim_stderr = 0.0;
    double rel_err = 0.0;
};

/// Names of the experiments shipped with the tool.
std::vector<std::string> builtin_experiment_names();

/// Builds a shipped experiment by name ("fig5", ..., "table4").
ExperimentSpec builtin_experiment(const std::string& name);

/// Loads a custom spec from an INI file ([experiment] + optional [scenario],
/// [phy_mac], [backoff] sections).
ExperimentSpec experiment_from_file(const std::string& path);

/// Runs every (variant, n) cell: analytic model + replications.
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec, int jobs = 0);

/// Writes the rows as CSV, sorted by (experiment, variant, n, metric), with
/// shortest-round-trip number formatting (locale independent).
void emit_csv(const std::vector<ResultRow>& rows, const std::filesystem::path& path);

std::string to_csv(const std::vector<ResultRow>& rows);

/// Writes one whitespace-separated file per (metric, source) with x = n and a
/// column per variant, plus MANIFEST.txt describing the files.
void emit_plot_data(const std::vector<ResultRow>& rows, const std::filesystem::path& dir);

}  // namespace fdwlan
