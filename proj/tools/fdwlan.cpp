// fdwlan — analytical model, Monte-Carlo simulator, and experiment harness
// for saturation performance of in-band full-duplex 802.11 DCF networks.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fdwlan/config.hpp"
#include "fdwlan/errors.hpp"
#include "fdwlan/experiments.hpp"
#include "fdwlan/hd_model.hpp"
#include "fdwlan/ibfd_model.hpp"
#include "fdwlan/simulator.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitConvergence = 3;
constexpr int kExitIo = 4;

using namespace fdwlan;

struct CommonOpts {
    std::string config;
    uint64_t seed = kDefaultSeed;
    bool seed_set = false;
    double tol = 1e-10;
};

Scenario base_scenario(const CommonOpts& common) {
    const auto path = default_config_path(common.config);
    Scenario sc = scenario_from_config(path ? *path : "");
    if (common.seed_set) sc.seed = common.seed;
    return sc;
}

void print_solution(const Scenario& sc, double tol) {
    if (sc.duplex == Duplex::Hd) {
        const HdSolution sol = solve_hd(sc.n, sc.backoff, tol);
        const HdMetrics m = hd_evaluate(sc.phy_mac, sol, sc.rho);
        std::printf("model            hd\n");
        std::printf("n                %d\n", sc.n);
        std::printf("tau              %.12g\n", sol.tau);
        std::printf("p                %.12g\n", sol.p);
        std::printf("p_s              %.12g\n", m.p_s);
        std::printf("p_tr             %.12g\n", m.p_tr);
        std::printf("exp_payload_B    %.12g\n", m.exp_payload_bytes);
        std::printf("exp_collision_B  %.12g\n", m.exp_collision_bytes);
        std::printf("throughput_mbps  %.12g\n", m.throughput_mbps);
        std::printf("latency_us       %.12g\n", m.latency_us);
        return;
    }
    const IbfdSolution sol = solve_ibfd(sc.n, sc.backoff, tol);
    const GammaResult g = sc.rho.random()
                              ? GammaResult{0, 0.0}
                              : apply_aggregation(sc.aggregation, sc.rho.value);
    double phi, exp_gamma;
    if (sc.rho.random()) {
        const auto pts = sc.rho.grid_points();
        const std::vector<double> probs(pts.size(), 1.0 / pts.size());
        phi = expected_phi(sc.aggregation, sc.rho);
        exp_gamma = expected_gamma(sc.aggregation, pts, probs);
    } else {
        phi = g.rho_new;
        exp_gamma = g.gamma;
    }
    const IbfdMetrics m = ibfd_evaluate(sc.phy_mac, sol, phi, exp_gamma);
    std::printf("model            ibfd\n");
    std::printf("n                %d\n", sc.n);
    std::printf("aggregation      %s\n", to_string(sc.aggregation).c_str());
    std::printf("tau_ap           %.12g\n", sol.tau_ap);
    std::printf("tau_sta          %.12g\n", sol.tau_sta);
    std::printf("tau_avg          %.12g\n", sol.tau_avg);
    std::printf("p_ap             %.12g\n", sol.p_ap);
    std::printf("p_sta            %.12g\n", sol.p_sta);
    std::printf("beta_ap          %.12g\n", sol.beta_ap);
    std::printf("beta_sta         %.12g\n", sol.beta_sta);
    std::printf("p_s              %.12g\n", m.p_s);
    std::printf("p_tr             %.12g\n", m.p_tr);
    std::printf("phi              %.12g\n", phi);
    std::printf("exp_gamma        %.12g\n", exp_gamma);
    std::printf("throughput_mbps  %.12g\n", m.throughput_mbps);
    std::printf("latency_us       %.12g\n", m.latency_us);
}

void print_simulation(const Scenario& sc, int jobs) {
    const ReplicationSummary r = run_replications(sc, jobs);
    std::printf("runs             %d\n", sc.runs);
    std::printf("events_per_run   %lld\n", static_cast<long long>(sc.horizon_events));
    std::printf("throughput_mbps  %.12g (stderr %.3g)\n", r.throughput_mbps.mean,
                r.throughput_mbps.stderr_of_mean);
    std::printf("latency_us       %.12g (stderr %.3g)\n", r.latency_us.mean,
                r.latency_us.stderr_of_mean);
    std::printf("phi              %.12g\n", r.phi.mean);
    std::printf("exp_gamma        %.12g\n", r.exp_gamma.mean);
    std::printf("utilization_pct  %.12g\n", r.utilization_percent.mean);
    const SimStats& first = r.per_run.front();
    std::printf("run0: events=%lld successes=%lld collisions=%lld idle_ns=%lld busy_ns=%lld\n",
                static_cast<long long>(first.events), static_cast<long long>(first.successes),
                static_cast<long long>(first.collisions), static_cast<long long>(first.idle_ns),
                static_cast<long long>(first.busy_success_ns + first.busy_collision_ns));
}

void print_oracle(const std::vector<int>& ladder, double p, double beta) {
    BackoffParams backoff = ladder.empty()
                                ? BackoffParams::from_phy(PhyMacParams{})
                                : BackoffParams(ladder.front(), static_cast<int>(ladder.size()) - 1,
                                                static_cast<int>(ladder.size()) - 1);
    const ChainParams chain{p, beta, backoff};
    const StationaryDistribution pi = stationary_oracle(chain);
    const ChainSolution cf = chain_stationary_tau(chain);
    std::printf("states           %d\n", pi.states());
    std::printf("sum(pi)          %.15f\n", pi.sum());
    std::printf("tau  closed-form %.15f\n", cf.tau);
    std::printf("tau  oracle      %.15f\n", pi.tau());
    std::printf("b00  closed-form %.15f\n", cf.b00);
    std::printf("b00  oracle      %.15f\n", pi.at(0, 0));
    for (int i = 1; i <= backoff.m; ++i)
        std::printf("b%d0  closed-form %.15f  oracle %.15f\n", i,
                    chain_b_i0(chain, cf.b00, i), pi.at(i, 0));
    std::printf("max |closed-form - oracle| over b_i0: %.3e\n", [&] {
        double worst = std::fabs(cf.tau - pi.tau());
        for (int i = 0; i <= backoff.m; ++i)
            worst = std::fmax(worst, std::fabs(chain_b_i0(chain, cf.b00, i) - pi.at(i, 0)));
        return worst;
    }());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"In-band full-duplex 802.11 DCF performance toolkit"};
    app.require_subcommand(1);

    CommonOpts common;
    app.add_option("--config", common.config, "INI config file (default: $IBFD_DCF_CONFIG)");
    app.add_option("--tol", common.tol, "fixed-point tolerance");
    auto* seed_opt = app.add_option("--seed", common.seed, "master RNG seed");

    std::string mode = "ibfd", agg = "none", rho_spec, out_path;
    int n = 0, runs = 0, jobs = 0;
    int64_t events = 0;

    auto add_scenario_flags = [&](CLI::App* cmd) {
        cmd->add_option("-n,--nodes", n, "total node count (AP + STAs)");
        cmd->add_option("--mode", mode, "hd|ibfd");
        cmd->add_option("--aggregation", agg, "none|dual|multi");
        cmd->add_option("--rho", rho_spec, "deterministic:<v> or uniform:<lo>:<hi>:step<s>");
    };

    auto* solve = app.add_subcommand("solve", "solve the analytical model");
    add_scenario_flags(solve);

    auto* simulate = app.add_subcommand("simulate", "run the Monte-Carlo simulator");
    add_scenario_flags(simulate);
    simulate->add_option("--events", events, "channel events per run");
    simulate->add_option("--runs", runs, "replication count");
    simulate->add_option("--jobs", jobs, "parallel replication workers");

    std::string experiment_name;
    auto* experiment = app.add_subcommand("experiment", "run a built-in or file-defined experiment");
    experiment->add_option("name", experiment_name, "fig5|fig6|fig7|fig8|table2|table3|table4 or a file")
        ->required();
    experiment->add_option("--out", out_path, "output directory")->default_val("results");
    experiment->add_option("--runs", runs, "override replication count");
    experiment->add_option("--jobs", jobs, "parallel replication workers");

    std::vector<int> ladder;
    double oracle_p = 0.3, oracle_beta = 0.1;
    auto* oracle = app.add_subcommand("oracle", "compare chain closed form against the matrix solve");
    oracle->add_option("--ladder", ladder, "window ladder, e.g. --ladder 4 8 16");
    oracle->add_option("--p", oracle_p, "conditional collision probability");
    oracle->add_option("--beta", oracle_beta, "reply-back probability");

    CLI11_PARSE(app, argc, argv);
    common.seed_set = seed_opt->count() > 0;

    try {
        if (app.got_subcommand(solve) || app.got_subcommand(simulate)) {
            Scenario sc = base_scenario(common);
            if (n > 0) sc.n = n;
            if (solve->count("--mode") || simulate->count("--mode")) sc.duplex = parse_duplex(mode);
            if (solve->count("--aggregation") || simulate->count("--aggregation"))
                sc.aggregation = parse_aggregation_mode(agg);
            if (!rho_spec.empty()) sc.rho = RhoSpec::parse(rho_spec);
            if (events > 0) sc.horizon_events = events;
            if (runs > 0) sc.runs = runs;
            sc.validate();
            if (app.got_subcommand(solve))
                print_solution(sc, common.tol);
            else
                print_simulation(sc, jobs);
        } else if (app.got_subcommand(experiment)) {
            ExperimentSpec spec = std::filesystem::exists(experiment_name) &&
                                          !std::filesystem::is_directory(experiment_name)
                                      ? experiment_from_file(experiment_name)
                                      : builtin_experiment(experiment_name);
            if (common.seed_set) spec.master_seed = common.seed;
            if (runs > 0) spec.runs = runs;
            const std::vector<ResultRow> rows = run_experiment(spec, jobs);
            const std::filesystem::path dir(out_path);
            std::error_code ec;
            std::filesystem::create_directories(dir, ec);
            if (ec) throw IoError("cannot create output directory '" + dir.string() + "'");
            emit_csv(rows, dir / (spec.name + ".csv"));
            if (spec.kind == ExperimentSpec::Kind::Sweep) emit_plot_data(rows, dir);
            std::printf("%s: %zu result rows -> %s\n", spec.name.c_str(), rows.size(),
                        (dir / (spec.name + ".csv")).c_str());
        } else if (app.got_subcommand(oracle)) {
            print_oracle(ladder, oracle_p, oracle_beta);
        }
    } catch (const ConvergenceFailure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConvergence;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const ModelInconsistency& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
