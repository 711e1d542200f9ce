#include "fdwlan/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "fdwlan/errors.hpp"

namespace fdwlan {

AggregationMode parse_aggregation_mode(const std::string& s) {
    if (s == "none") return AggregationMode::None;
    if (s == "dual") return AggregationMode::Dual;
    if (s == "multi") return AggregationMode::Multi;
    throw InvalidParameter("unknown aggregation mode '" + s + "' (none|dual|multi)");
}

std::string to_string(AggregationMode mode) {
    switch (mode) {
        case AggregationMode::None: return "none";
        case AggregationMode::Dual: return "dual";
        case AggregationMode::Multi: return "multi";
    }
    return "?";
}

RhoSpec RhoSpec::deterministic(double v) {
    RhoSpec r;
    r.kind = Kind::Deterministic;
    r.value = v;
    r.validate();
    return r;
}

RhoSpec RhoSpec::uniform_grid(double lo, double hi, double step) {
    RhoSpec r;
    r.kind = Kind::UniformGrid;
    r.lo = lo;
    r.hi = hi;
    r.step = step;
    r.validate();
    return r;
}

RhoSpec RhoSpec::parse(const std::string& s) {
    if (s.rfind("deterministic:", 0) == 0) {
        return deterministic(std::stod(s.substr(14)));
    }
    if (s.rfind("uniform:", 0) == 0) {
        std::stringstream ss(s.substr(8));
        std::string lo, hi, st;
        if (!std::getline(ss, lo, ':') || !std::getline(ss, hi, ':') || !std::getline(ss, st))
            throw InvalidParameter("rho spec must be uniform:<lo>:<hi>:step<step>");
        if (st.rfind("step", 0) != 0) throw InvalidParameter("rho grid step must start with 'step'");
        return uniform_grid(std::stod(lo), std::stod(hi), std::stod(st.substr(4)));
    }
    throw InvalidParameter("rho spec must start with deterministic: or uniform:");
}

void RhoSpec::validate() const {
    if (kind == Kind::Deterministic) {
        if (value <= 0.0 || value > 1.0) throw InvalidParameter("deterministic rho must be in (0, 1]");
    } else {
        if (step <= 0 || lo <= 0 || hi > 1.0 || hi < lo)
            throw InvalidParameter("rho grid bounds out of range");
    }
}

std::vector<double> RhoSpec::grid_points() const {
    if (kind != Kind::UniformGrid) throw InvalidParameter("grid_points on a deterministic rho spec");
    std::vector<double> pts;
    const int count = static_cast<int>(std::lround((hi - lo) / step)) + 1;
    pts.reserve(count);
    for (int i = 0; i < count; ++i) pts.push_back(lo + i * step);
    return pts;
}

double RhoSpec::mean() const {
    if (kind == Kind::Deterministic) return value;
    const auto pts = grid_points();
    return std::accumulate(pts.begin(), pts.end(), 0.0) / pts.size();
}

std::string RhoSpec::to_string() const {
    std::ostringstream os;
    if (kind == Kind::Deterministic) {
        os << "deterministic:" << value;
    } else {
        os << "uniform:" << lo << ":" << hi << ":step" << step;
    }
    return os.str();
}

namespace {

void check_rho_range(double rho) {
    if (rho < 0.1 || rho > 0.9)
        throw InvalidParameter("aggregation rules are defined for rho in [0.1, 0.9]");
}

}  // namespace

GammaResult gamma_dual(double rho) {
    check_rho_range(rho);
    if (rho <= 0.5) return {2, std::min(2.0 * rho, 1.0)};
    return {1, rho};
}

GammaResult gamma_multi(double rho) {
    check_rho_range(rho);
    if (rho > 0.5) return {1, rho};
    // The 1e-9 slack keeps decimal grid points exact: 1/0.2 evaluates just
    // below 5 in binary floating point.
    const int gamma = static_cast<int>(std::floor(1.0 / rho + 1e-9));
    return {gamma, std::min(gamma * rho, 1.0)};
}

GammaResult apply_aggregation(AggregationMode mode, double rho) {
    switch (mode) {
        case AggregationMode::None: return {1, rho};
        case AggregationMode::Dual: return gamma_dual(rho);
        case AggregationMode::Multi: return gamma_multi(rho);
    }
    throw InvalidParameter("bad aggregation mode");
}

double fdf(std::span<const double> rhos) {
    if (rhos.empty()) throw InvalidParameter("rho list must be non-empty");
    return std::accumulate(rhos.begin(), rhos.end(), 0.0) / static_cast<double>(rhos.size());
}

double utilization_percent(double phi) {
    if (phi < 0.0 || phi > 1.0) throw InvalidParameter("phi must be in [0, 1]");
    return (1.0 + phi) / 2.0 * 100.0;
}

double expected_gamma(AggregationMode mode, std::span<const double> rho_values,
                      std::span<const double> probs) {
    if (rho_values.size() != probs.size() || rho_values.empty())
        throw InvalidParameter("distribution arrays must be non-empty and equal length");
    double total = 0.0, e = 0.0;
    for (size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] < 0) throw InvalidParameter("negative probability");
        total += probs[i];
        e += probs[i] * apply_aggregation(mode, rho_values[i]).gamma;
    }
    if (std::fabs(total - 1.0) > 1e-9) throw InvalidParameter("distribution must sum to 1");
    return e;
}

double expected_gamma_uniform_grid(AggregationMode mode) {
    const auto pts = RhoSpec::uniform_grid().grid_points();
    const std::vector<double> probs(pts.size(), 1.0 / pts.size());
    return expected_gamma(mode, pts, probs);
}

double expected_phi(AggregationMode mode, const RhoSpec& rho) {
    if (!rho.random()) return apply_aggregation(mode, rho.value).rho_new;
    const auto pts = rho.grid_points();
    double phi = 0.0;
    for (double r : pts) phi += apply_aggregation(mode, r).rho_new;
    return phi / pts.size();
}

TrafficProfile TrafficProfile::make(AggregationMode mode, std::span<const double> original_rhos) {
    if (original_rhos.empty()) throw InvalidParameter("traffic profile needs at least one STA");
    TrafficProfile t;
    t.mode = mode;
    t.rhos.assign(original_rhos.begin(), original_rhos.end());
    t.gammas.reserve(t.rhos.size());
    t.rhos_new.reserve(t.rhos.size());
    for (double rho : t.rhos) {
        const GammaResult g = apply_aggregation(mode, rho);
        t.gammas.push_back(g.gamma);
        t.rhos_new.push_back(g.rho_new);
    }
    t.phi = fdf(t.rhos_new);
    t.exp_gamma = std::accumulate(t.gammas.begin(), t.gammas.end(), 0.0) / t.gammas.size();
    return t;
}

}  // namespace fdwlan
