#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fdwlan/aggregation.hpp"
#include "fdwlan/timing.hpp"

namespace fdwlan {

enum class Duplex { Hd, Ibfd };

Duplex parse_duplex(const std::string& s);
std::string to_string(Duplex d);

inline constexpr uint64_t kDefaultSeed = 0x5eed0f1d2c3b4a59ull;

/// One simulation setup: an AP plus n-1 saturated client STAs.
struct Scenario {
    int n = 10;
    Duplex duplex = Duplex::Ibfd;
    AggregationMode aggregation = AggregationMode::None;
    RhoSpec rho = RhoSpec::deterministic(0.3);
    PhyMacParams phy_mac;
    BackoffParams backoff;
    int64_t horizon_events = 200000;  // channel events (idle slots included)
    uint64_t seed = kDefaultSeed;
    int runs = 1;

    void validate() const;
};

struct NodeCounters {
    int64_t direct_tx = 0;
    int64_t successes = 0;
    int64_t collisions = 0;
    int64_t drops = 0;
    int64_t frames_delivered = 0;
};

struct SimStats {
    int64_t dl_frames = 0, ul_frames = 0;
    int64_t dl_bits = 0, ul_bits = 0;
    int64_t busy_success_ns = 0, busy_collision_ns = 0, idle_ns = 0;
    int64_t latency_sum_ns = 0;
    int64_t latency_count = 0;
    int64_t events = 0, successes = 0, collisions = 0;
    std::vector<NodeCounters> per_node;

    // traffic realization of this run (post-aggregation)
    double phi = 0.0;
    double exp_gamma = 1.0;

    int64_t elapsed_ns() const { return busy_success_ns + busy_collision_ns + idle_ns; }
    double throughput_mbps() const;
    double mean_latency_us() const;
};

/// Runs one replication. The RNG stream is Philox(scenario.seed, run_index),
/// consumed as: per-STA rho draws (random rho only), initial backoff counters
/// in node order, then event-loop draws in event order.
SimStats run(const Scenario& scenario, uint64_t run_index = 0);

struct MetricSummary {
    double mean = 0.0;
    double stderr_of_mean = 0.0;
};

struct ReplicationSummary {
    MetricSummary throughput_mbps;
    MetricSummary latency_us;
    MetricSummary phi;
    MetricSummary exp_gamma;
    MetricSummary utilization_percent;
    std::vector<SimStats> per_run;
};

/// Runs scenario.runs independent replications (in parallel when jobs > 1;
/// results are merged in run order, so the outcome is thread-count invariant).
ReplicationSummary run_replications(const Scenario& scenario, int jobs = 0);

}  // namespace fdwlan
