#include "fdwlan/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "fdwlan/config.hpp"
#include "fdwlan/errors.hpp"
#include "fdwlan/hd_model.hpp"
#include "fdwlan/ibfd_model.hpp"

namespace fdwlan {

void ExperimentSpec::validate() const {
    if (name.empty()) throw InvalidParameter("experiment needs a name");
    if (sweep.empty()) throw InvalidParameter("experiment sweep must be non-empty");
    if (variants.empty()) throw InvalidParameter("experiment needs at least one variant");
    if (runs < 1) throw InvalidParameter("runs must be >= 1");
    if (horizon_events < 1) throw InvalidParameter("horizon must be >= 1 event");
    phy_mac.validate();
    backoff.validate();
    std::set<std::string> names;
    for (const auto& v : variants) {
        if (!names.insert(v.name).second)
            throw InvalidParameter("duplicate variant name '" + v.name + "'");
        v.rho.validate();
    }
}

namespace {

uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

uint64_t cell_seed(uint64_t master, size_t variant_idx, int n) {
    return splitmix64(master ^ splitmix64(variant_idx * 1000003ull + static_cast<uint64_t>(n)));
}

/// Expected post-aggregation traffic for a variant (phi and E[gamma]).
struct TrafficExpectation {
    double phi;
    double exp_gamma;
};

TrafficExpectation expected_traffic(const Variant& v) {
    if (v.duplex == Duplex::Hd) return {0.0, 1.0};
    if (!v.rho.random()) {
        const GammaResult g = apply_aggregation(v.aggregation, v.rho.value);
        return {g.rho_new, static_cast<double>(g.gamma)};
    }
    const auto pts = v.rho.grid_points();
    const std::vector<double> probs(pts.size(), 1.0 / pts.size());
    return {expected_phi(v.aggregation, v.rho), expected_gamma(v.aggregation, pts, probs)};
}

struct AnalyticPoint {
    double throughput;
    double latency;
};

AnalyticPoint analytic_point(const ExperimentSpec& spec, const Variant& v, int n) {
    if (v.duplex == Duplex::Hd) {
        const HdSolution sol = solve_hd(n, spec.backoff);
        const HdMetrics m = hd_evaluate(spec.phy_mac, sol, v.rho);
        return {m.throughput_mbps, m.latency_us};
    }
    const IbfdSolution sol = solve_ibfd(n, spec.backoff);
    const TrafficExpectation t = expected_traffic(v);
    const IbfdMetrics m = ibfd_evaluate(spec.phy_mac, sol, t.phi, t.exp_gamma);
    return {m.throughput_mbps, m.latency_us};
}

Scenario cell_scenario(const ExperimentSpec& spec, const Variant& v, size_t vi, int n) {
    Scenario sc;
    sc.n = n;
    sc.duplex = v.duplex;
    sc.aggregation = v.aggregation;
    sc.rho = v.rho;
    sc.phy_mac = spec.phy_mac;
    sc.backoff = spec.backoff;
    sc.horizon_events = spec.horizon_events;
    sc.runs = spec.runs;
    sc.seed = cell_seed(spec.master_seed, vi, n);
    return sc;
}

double relative_error(double analytical, double sim_mean) {
    if (sim_mean == 0.0) return 0.0;
    return std::fabs(analytical - sim_mean) / std::fabs(sim_mean);
}

ResultRow make_row(const ExperimentSpec& spec, const std::string& variant, int n,
                   const std::string& metric, double analytical, double sim_mean,
                   double sim_stderr) {
    return {spec.name, variant, n,      metric,
            analytical, sim_mean, sim_stderr, relative_error(analytical, sim_mean)};
}

void run_sweep(const ExperimentSpec& spec, int jobs, std::vector<ResultRow>& rows) {
    for (size_t vi = 0; vi < spec.variants.size(); ++vi) {
        const Variant& v = spec.variants[vi];
        for (int n : spec.sweep) {
            const AnalyticPoint a = analytic_point(spec, v, n);
            const ReplicationSummary r = run_replications(cell_scenario(spec, v, vi, n), jobs);
            rows.push_back(make_row(spec, v.name, n, "throughput_mbps", a.throughput,
                                    r.throughput_mbps.mean, r.throughput_mbps.stderr_of_mean));
            rows.push_back(make_row(spec, v.name, n, "latency_us", a.latency, r.latency_us.mean,
                                    r.latency_us.stderr_of_mean));
        }
    }
}

void run_aggregation_table(const ExperimentSpec& spec, int jobs, std::vector<ResultRow>& rows) {
    const int n = spec.sweep.front();
    for (size_t vi = 0; vi < spec.variants.size(); ++vi) {
        const Variant& v = spec.variants[vi];
        const GammaResult g = apply_aggregation(v.aggregation, v.rho.value);
        const double phi = expected_phi(v.aggregation, v.rho);
        const ReplicationSummary r = run_replications(cell_scenario(spec, v, vi, n), jobs);
        rows.push_back(make_row(spec, v.name, n, "gamma", g.gamma, r.exp_gamma.mean,
                                r.exp_gamma.stderr_of_mean));
        rows.push_back(make_row(spec, v.name, n, "rho_new", g.rho_new, r.phi.mean,
                                r.phi.stderr_of_mean));
        rows.push_back(make_row(spec, v.name, n, "phi", phi, r.phi.mean, r.phi.stderr_of_mean));
        rows.push_back(make_row(spec, v.name, n, "eta_percent", utilization_percent(phi),
                                r.utilization_percent.mean, r.utilization_percent.stderr_of_mean));
    }
}

void run_rule_table(const ExperimentSpec& spec, std::vector<ResultRow>& rows) {
    for (const auto& v : spec.variants) {
        for (double rho : v.rho.grid_points()) {
            const GammaResult g = apply_aggregation(v.aggregation, rho);
            // dual route: the simulator's traffic layer applied to the same rho
            const TrafficProfile t = TrafficProfile::make(v.aggregation, std::vector<double>{rho});
            std::ostringstream label;
            label << v.name << "@rho=" << rho;
            rows.push_back(make_row(spec, label.str(), 0, "gamma", g.gamma, t.gammas[0], 0.0));
            rows.push_back(make_row(spec, label.str(), 0, "rho_new", g.rho_new, t.rhos_new[0], 0.0));
        }
    }
}

void run_traffic_table(const ExperimentSpec& spec, int jobs, std::vector<ResultRow>& rows) {
    const int n = spec.sweep.front();
    for (size_t vi = 0; vi < spec.variants.size(); ++vi) {
        const Variant& v = spec.variants[vi];
        const TrafficExpectation t = expected_traffic(v);
        const ReplicationSummary r = run_replications(cell_scenario(spec, v, vi, n), jobs);
        rows.push_back(make_row(spec, v.name, n, "exp_gamma", t.exp_gamma, r.exp_gamma.mean,
                                r.exp_gamma.stderr_of_mean));
        rows.push_back(make_row(spec, v.name, n, "phi", t.phi, r.phi.mean, r.phi.stderr_of_mean));
        rows.push_back(make_row(spec, v.name, n, "eta_percent", utilization_percent(t.phi),
                                r.utilization_percent.mean, r.utilization_percent.stderr_of_mean));
    }
}

}  // namespace

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec, int jobs) {
    spec.validate();
    std::vector<ResultRow> rows;
    switch (spec.kind) {
        case ExperimentSpec::Kind::Sweep: run_sweep(spec, jobs, rows); break;
        case ExperimentSpec::Kind::AggregationTable: run_aggregation_table(spec, jobs, rows); break;
        case ExperimentSpec::Kind::RuleTable: run_rule_table(spec, rows); break;
        case ExperimentSpec::Kind::TrafficTable: run_traffic_table(spec, jobs, rows); break;
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Built-in experiment grid
// ---------------------------------------------------------------------------

namespace {

std::vector<int> even_sweep() {
    std::vector<int> sweep;
    for (int n = 2; n <= 20; n += 2) sweep.push_back(n);
    return sweep;
}

Variant make_variant(const std::string& name, const RhoSpec& base_rho) {
    if (name == "hd") return {"hd", Duplex::Hd, AggregationMode::None, base_rho};
    if (name == "ibfd") return {"ibfd", Duplex::Ibfd, AggregationMode::None, base_rho};
    if (name == "dual") return {"dual", Duplex::Ibfd, AggregationMode::Dual, base_rho};
    if (name == "multi") return {"multi", Duplex::Ibfd, AggregationMode::Multi, base_rho};
    if (name == "rho1") return {"rho1", Duplex::Ibfd, AggregationMode::None, RhoSpec::deterministic(1.0)};
    throw InvalidParameter("unknown variant '" + name + "' (hd|ibfd|dual|multi|rho1)");
}

ExperimentSpec base_spec(const std::string& name) {
    ExperimentSpec spec;
    spec.name = name;
    spec.backoff = BackoffParams::from_phy(spec.phy_mac);
    return spec;
}

}  // namespace

std::vector<std::string> builtin_experiment_names() {
    return {"fig5", "fig6", "fig7", "fig8", "table2", "table3", "table4"};
}

ExperimentSpec builtin_experiment(const std::string& name) {
    ExperimentSpec spec = base_spec(name);
    const RhoSpec det03 = RhoSpec::deterministic(0.3);
    const RhoSpec grid = RhoSpec::uniform_grid();

    if (name == "fig5" || name == "fig6") {
        // throughput (fig5) and latency (fig6) vs n at deterministic rho 0.3
        spec.kind = ExperimentSpec::Kind::Sweep;
        spec.sweep = even_sweep();
        for (const char* v : {"hd", "ibfd", "dual", "multi", "rho1"})
            spec.variants.push_back(make_variant(v, det03));
        spec.runs = 5;
        spec.horizon_events = 1000000;
    } else if (name == "fig7" || name == "fig8") {
        // same metrics with per-run random rho, averaged over 200 runs
        spec.kind = ExperimentSpec::Kind::Sweep;
        spec.sweep = even_sweep();
        for (const char* v : {"hd", "ibfd", "dual", "multi"})
            spec.variants.push_back(make_variant(v, grid));
        spec.runs = 200;
        spec.horizon_events = 100000;
    } else if (name == "table2") {
        spec.kind = ExperimentSpec::Kind::AggregationTable;
        spec.sweep = {10};
        spec.variants = {{"none", Duplex::Ibfd, AggregationMode::None, det03},
                         {"dual", Duplex::Ibfd, AggregationMode::Dual, det03},
                         {"multi", Duplex::Ibfd, AggregationMode::Multi, det03}};
        spec.runs = 1;
        spec.horizon_events = 100000;
    } else if (name == "table3") {
        spec.kind = ExperimentSpec::Kind::RuleTable;
        spec.sweep = {0};
        spec.variants = {{"dual", Duplex::Ibfd, AggregationMode::Dual, grid},
                         {"multi", Duplex::Ibfd, AggregationMode::Multi, grid}};
        spec.runs = 1;
        spec.horizon_events = 1;
    } else if (name == "table4") {
        spec.kind = ExperimentSpec::Kind::TrafficTable;
        spec.sweep = {20};
        spec.variants = {{"none", Duplex::Ibfd, AggregationMode::None, grid},
                         {"dual", Duplex::Ibfd, AggregationMode::Dual, grid},
                         {"multi", Duplex::Ibfd, AggregationMode::Multi, grid}};
        spec.runs = 200;
        spec.horizon_events = 20000;
    } else {
        throw InvalidParameter("unknown experiment '" + name + "'");
    }
    return spec;
}

ExperimentSpec experiment_from_file(const std::string& path) {
    const IniData ini = load_ini(path);
    const auto it = ini.find("experiment");
    if (it == ini.end()) throw InvalidParameter("experiment file needs an [experiment] section");

    ExperimentSpec spec;
    apply_phy_mac(ini, spec.phy_mac);
    spec.backoff = make_backoff(ini, spec.phy_mac);
    spec.kind = ExperimentSpec::Kind::Sweep;

    RhoSpec base_rho = RhoSpec::deterministic(0.3);
    if (auto sc = ini.find("scenario"); sc != ini.end()) {
        if (auto r = sc->second.find("rho"); r != sc->second.end()) base_rho = RhoSpec::parse(r->second);
        if (auto h = sc->second.find("horizon_events"); h != sc->second.end())
            spec.horizon_events = std::stoll(h->second);
    }
    for (const auto& [key, v] : it->second) {
        if (key == "name") {
            spec.name = v;
        } else if (key == "sweep") {
            std::stringstream ss(v);
            std::string lo, hi, step;
            if (!std::getline(ss, lo, ':') || !std::getline(ss, hi, ':') || !std::getline(ss, step))
                throw InvalidParameter("sweep must be <lo>:<hi>:<step>");
            for (int n = std::stoi(lo); n <= std::stoi(hi); n += std::stoi(step))
                spec.sweep.push_back(n);
        } else if (key == "variants") {
            std::stringstream ss(v);
            std::string vn;
            while (std::getline(ss, vn, ','))
                spec.variants.push_back(make_variant(vn, base_rho));
        } else if (key == "runs") {
            spec.runs = std::stoi(v);
        } else if (key == "seed") {
            spec.master_seed = std::stoull(v, nullptr, 0);
        } else {
            throw InvalidParameter("unknown [experiment] key '" + key + "'");
        }
    }
    if (spec.name.empty()) spec.name = std::filesystem::path(path).stem().string();
    spec.validate();
    return spec;
}

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

namespace {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::vector<ResultRow> sorted_rows(std::vector<ResultRow> rows) {
    std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        return std::tie(a.experiment, a.variant, a.n, a.metric) <
               std::tie(b.experiment, b.variant, b.n, b.metric);
    });
    return rows;
}

}  // namespace

std::string to_csv(const std::vector<ResultRow>& rows) {
    std::string out = "experiment,variant,n,metric,analytical,sim_mean,sim_stderr,rel_err\n";
    for (const ResultRow& r : sorted_rows(rows)) {
        out += r.experiment + ',' + r.variant + ',' + std::to_string(r.n) + ',' + r.metric + ',' +
               format_double(r.analytical) + ',' + format_double(r.sim_mean) + ',' +
               format_double(r.sim_stderr) + ',' + format_double(r.rel_err) + '\n';
    }
    return out;
}

void emit_csv(const std::vector<ResultRow>& rows, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << to_csv(rows);
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

void emit_plot_data(const std::vector<ResultRow>& rows, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory '" + dir.string() + "'");

    const auto sorted = sorted_rows(rows);
    // group by (experiment, metric); keep variant order of first appearance
    std::map<std::pair<std::string, std::string>, std::vector<const ResultRow*>> groups;
    for (const ResultRow& r : sorted) groups[{r.experiment, r.metric}].push_back(&r);

    std::ofstream manifest(dir / "MANIFEST.txt", std::ios::binary);
    if (!manifest) throw IoError("cannot write plot manifest");

    for (const auto& [key, group] : groups) {
        const auto& [experiment, metric] = key;
        std::vector<std::string> variants;
        std::vector<int> ns;
        for (const ResultRow* r : group) {
            if (std::find(variants.begin(), variants.end(), r->variant) == variants.end())
                variants.push_back(r->variant);
            if (std::find(ns.begin(), ns.end(), r->n) == ns.end()) ns.push_back(r->n);
        }
        std::sort(ns.begin(), ns.end());
        auto value_of = [&](int n, const std::string& variant, auto proj) {
            for (const ResultRow* r : group)
                if (r->n == n && r->variant == variant) return proj(*r);
            return std::nan("");
        };

        struct Source {
            const char* tag;
            double (*proj)(const ResultRow&);
        };
        std::vector<Source> sources = {{"model", [](const ResultRow& r) { return r.analytical; }},
                                       {"sim", [](const ResultRow& r) { return r.sim_mean; }}};
        const bool with_stderr = std::any_of(group.begin(), group.end(),
                                             [](const ResultRow* r) { return r->sim_stderr > 0; });
        if (with_stderr)
            sources.push_back({"stderr", [](const ResultRow& r) { return r.sim_stderr; }});

        for (const auto& src : sources) {
            const std::string fname = experiment + "_" + metric + "_" + src.tag + ".dat";
            std::ofstream out(dir / fname, std::ios::binary);
            if (!out) throw IoError("cannot write '" + fname + "'");
            out << "# n";
            for (const auto& v : variants) out << ' ' << v;
            out << '\n';
            for (int n : ns) {
                out << n;
                for (const auto& v : variants)
                    out << ' ' << format_double(value_of(n, v, src.proj));
                out << '\n';
            }
            manifest << fname << ": " << experiment << ' ' << metric << " (" << src.tag
                     << "), columns: n";
            for (const auto& v : variants) manifest << ' ' << v;
            manifest << '\n';
        }
    }
}

}  // namespace fdwlan
