#include "fdwlan/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <thread>

#include "fdwlan/errors.hpp"
#include "fdwlan/rng.hpp"

namespace fdwlan {

Duplex parse_duplex(const std::string& s) {
    if (s == "hd") return Duplex::Hd;
    if (s == "ibfd") return Duplex::Ibfd;
    throw InvalidParameter("unknown duplex mode '" + s + "' (hd|ibfd)");
}

std::string to_string(Duplex d) { return d == Duplex::Hd ? "hd" : "ibfd"; }

void Scenario::validate() const {
    phy_mac.validate();
    backoff.validate();
    rho.validate();
    if (n < 1) throw InvalidParameter("node count must be >= 1");
    if (duplex == Duplex::Ibfd && n < 2) throw InvalidParameter("full-duplex needs n >= 2");
    if (duplex == Duplex::Hd && aggregation != AggregationMode::None)
        throw InvalidParameter("frame aggregation applies to full-duplex scenarios only");
    if (horizon_events < 1) throw InvalidParameter("horizon must be at least one event");
    if (runs < 1) throw InvalidParameter("replication count must be >= 1");
}

double SimStats::throughput_mbps() const {
    if (elapsed_ns() <= 0) throw InvalidParameter("no elapsed time");
    return static_cast<double>(dl_bits + ul_bits) / (elapsed_ns() / 1000.0);
}

double SimStats::mean_latency_us() const {
    if (latency_count <= 0) throw InvalidParameter("no delivered frames");
    return static_cast<double>(latency_sum_ns) / latency_count / 1000.0;
}

namespace {

struct Node {
    int stage = 0;
    int counter = 0;
    int64_t hol_ns = 0;       // when the current head-of-line frame became HOL
    int64_t load_bytes = 0;   // direct-transmission payload
    int gamma = 1;            // UL frames per transmission opportunity
};

/**
 * Slot-synchronous engine. One loop iteration handles one channel event:
 * an idle slot, a successful exchange, or a collision. Runs of idle slots
 * are batched (every backoff counter falls together while nobody is at 0).
 */
class Engine {
public:
    Engine(const Scenario& sc, uint64_t run_index)
        : sc_(sc), rng_(sc.seed, run_index) {
        sigma_ns_ = us_to_ns(sc.phy_mac.slot_us);

        std::vector<double> rhos(sc.n - 1, sc.rho.value);
        if (sc.rho.random()) {
            const auto grid = sc.rho.grid_points();
            for (auto& r : rhos) r = grid[rng_.uniform_int(static_cast<uint32_t>(grid.size()))];
        }
        TrafficProfile traffic =
            sc.n > 1 ? TrafficProfile::make(sc.aggregation, rhos) : TrafficProfile{};

        nodes_.resize(sc.n);
        nodes_[0].load_bytes = sc.phy_mac.mpdu_max_bytes;
        for (int i = 1; i < sc.n; ++i) {
            const double rho = traffic.rhos[i - 1];
            const int gamma = traffic.gammas[i - 1];
            nodes_[i].gamma = gamma;
            const double ul = sc.duplex == Duplex::Ibfd ? gamma * rho : rho;
            nodes_[i].load_bytes = std::llround(ul * sc.phy_mac.mpdu_max_bytes);
        }
        for (auto& nd : nodes_) nd.counter = draw(sc.backoff.window(0));

        st_.per_node.resize(sc.n);
        if (sc.n > 1) {
            st_.phi = traffic.phi;
            st_.exp_gamma = traffic.exp_gamma;
        }
        ts_mpdu_ns_ = t_success_ns(sc.phy_mac, sc.phy_mac.mpdu_max_bytes);
        // HD drops after a failed attempt at stage r, the chain after stage m.
        drop_stage_ = sc.duplex == Duplex::Hd ? sc.backoff.r : sc.backoff.m;
        if (sc.duplex == Duplex::Ibfd) redraw_destination();
    }

    SimStats run() {
        while (st_.events < sc_.horizon_events) {
            int cmin = nodes_[0].counter;
            for (const auto& nd : nodes_) cmin = std::min(cmin, nd.counter);
            if (cmin > 0) {
                // batch of idle slots until the next counter reaches zero
                const int64_t k = std::min<int64_t>(cmin, sc_.horizon_events - st_.events);
                st_.idle_ns += k * sigma_ns_;
                now_ns_ += k * sigma_ns_;
                st_.events += k;
                for (auto& nd : nodes_) nd.counter -= static_cast<int>(k);
                continue;
            }
            tx_.clear();
            for (int i = 0; i < sc_.n; ++i)
                if (nodes_[i].counter == 0) tx_.push_back(i);
            st_.events++;
            for (int i : tx_) st_.per_node[i].direct_tx++;
            if (sc_.duplex == Duplex::Hd)
                hd_event();
            else
                ibfd_event();
        }
        return st_;
    }

private:
    int draw(int window) { return static_cast<int>(rng_.uniform_int(static_cast<uint32_t>(window))); }

    void redraw_destination() {
        destination_ = 1 + static_cast<int>(rng_.uniform_int(static_cast<uint32_t>(sc_.n - 1)));
    }

    void reset_stage0(int idx) {
        nodes_[idx].stage = 0;
        nodes_[idx].counter = draw(sc_.backoff.window(0));
    }

    /// Failed attempt: climb the window ladder; past the drop stage the frame
    /// is abandoned (no latency sample, the HOL clock keeps running).
    void fail(int idx) {
        Node& nd = nodes_[idx];
        st_.per_node[idx].collisions++;
        if (nd.stage >= drop_stage_) {
            st_.per_node[idx].drops++;
            nd.stage = 0;
            if (idx == 0 && sc_.duplex == Duplex::Ibfd) redraw_destination();
        } else {
            nd.stage++;
        }
        nd.counter = draw(sc_.backoff.window(nd.stage));
    }

    /// Credits `frames` deliveries that share one HOL-to-ACK gap.
    void deliver(int idx, int frames, int64_t bits) {
        Node& nd = nodes_[idx];
        st_.latency_sum_ns += now_ns_ - nd.hol_ns;
        st_.latency_count += frames;
        nd.hol_ns = now_ns_;
        st_.per_node[idx].successes++;
        st_.per_node[idx].frames_delivered += frames;
        if (idx == 0) {
            st_.dl_frames += frames;
            st_.dl_bits += bits;
        } else {
            st_.ul_frames += frames;
            st_.ul_bits += bits;
        }
    }

    void hd_event() {
        if (tx_.size() == 1) {
            const int w = tx_[0];
            const int64_t dur = t_success_ns(sc_.phy_mac, static_cast<double>(nodes_[w].load_bytes));
            now_ns_ += dur;
            st_.busy_success_ns += dur;
            st_.successes++;
            deliver(w, 1, 8 * nodes_[w].load_bytes);
            reset_stage0(w);
        } else {
            int64_t mx = 0;
            for (int i : tx_) mx = std::max(mx, nodes_[i].load_bytes);
            const int64_t dur = t_collision_ns(sc_.phy_mac, static_cast<double>(mx));
            now_ns_ += dur;
            st_.busy_collision_ns += dur;
            st_.collisions++;
            for (int i : tx_) fail(i);
        }
        // Standard DCF: bystanders freeze while the channel is busy, so
        // counters only fall during idle slots (handled in the batch path).
    }

    void ibfd_event() {
        const bool ap_tx = nodes_[0].counter == 0;
        const int dest = destination_;

        bool success = false;
        int sta = -1;      // the STA of the engaged pair
        int replier = -1;  // node transmitting via reply-back (leaves backoff)
        if (tx_.size() == 1) {
            success = true;
            if (ap_tx) {
                sta = dest;
                replier = dest;
            } else {
                sta = tx_[0];
                replier = 0;
            }
        } else if (tx_.size() == 2 && ap_tx && (tx_[0] == 0 ? tx_[1] : tx_[0]) == dest) {
            success = true;  // mutual direct transmission between the AP and its addressee
            sta = dest;
        }

        // Either way the channel is held for one full-MPDU exchange: the DL
        // frame dominates a success, and any collision involves the AP's load
        // directly or through the interrupted reply-back.
        now_ns_ += ts_mpdu_ns_;
        // Every node takes exactly one chain step per event; nodes that
        // transmitted or replied back land on a fresh draw, the rest decrement.
        stepped_.assign(sc_.n, 0);
        for (int i : tx_) stepped_[i] = 1;
        if (success) {
            st_.busy_success_ns += ts_mpdu_ns_;
            st_.successes++;
            deliver(0, 1, 8LL * sc_.phy_mac.mpdu_max_bytes);
            deliver(sta, nodes_[sta].gamma, 8 * nodes_[sta].load_bytes);
            for (int i : tx_) reset_stage0(i);
            if (ap_tx) redraw_destination();
            if (replier >= 0) {
                reset_stage0(replier);
                stepped_[replier] = 1;
            }
        } else {
            st_.busy_collision_ns += ts_mpdu_ns_;
            st_.collisions++;
            for (int i : tx_) fail(i);
        }
        for (int i = 0; i < sc_.n; ++i)
            if (!stepped_[i] && nodes_[i].counter > 0) nodes_[i].counter--;
    }

    const Scenario& sc_;
    Philox rng_;
    std::vector<Node> nodes_;
    std::vector<int> tx_;
    std::vector<uint8_t> stepped_;
    SimStats st_;
    int64_t now_ns_ = 0;
    int64_t sigma_ns_ = 0;
    int64_t ts_mpdu_ns_ = 0;
    int drop_stage_ = 0;
    int destination_ = -1;
};

MetricSummary summarize(const std::vector<double>& xs) {
    MetricSummary s;
    const size_t n = xs.size();
    for (double x : xs) s.mean += x;
    s.mean /= static_cast<double>(n);
    if (n > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - s.mean) * (x - s.mean);
        s.stderr_of_mean = std::sqrt(ss / (static_cast<double>(n) - 1) / static_cast<double>(n));
    }
    return s;
}

}  // namespace

SimStats run(const Scenario& scenario, uint64_t run_index) {
    scenario.validate();
    return Engine(scenario, run_index).run();
}

ReplicationSummary run_replications(const Scenario& scenario, int jobs) {
    scenario.validate();
    const int runs = scenario.runs;
    if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
    jobs = std::clamp(jobs, 1, runs);

    ReplicationSummary out;
    out.per_run.resize(runs);
    if (jobs == 1) {
        for (int i = 0; i < runs; ++i) out.per_run[i] = Engine(scenario, i).run();
    } else {
        std::vector<std::future<void>> tasks;
        tasks.reserve(jobs);
        for (int t = 0; t < jobs; ++t) {
            tasks.push_back(std::async(std::launch::async, [&, t] {
                for (int i = t; i < runs; i += jobs) out.per_run[i] = Engine(scenario, i).run();
            }));
        }
        for (auto& f : tasks) f.get();
    }

    std::vector<double> s, d, phi, eg, eta;
    s.reserve(runs);
    for (const auto& st : out.per_run) {
        s.push_back(st.throughput_mbps());
        d.push_back(st.mean_latency_us());
        phi.push_back(st.phi);
        eg.push_back(st.exp_gamma);
        eta.push_back(utilization_percent(st.phi));
    }
    out.throughput_mbps = summarize(s);
    out.latency_us = summarize(d);
    out.phi = summarize(phi);
    out.exp_gamma = summarize(eg);
    out.utilization_percent = summarize(eta);
    return out;
}

}  // namespace fdwlan
