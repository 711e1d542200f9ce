#pragma once

#include <span>
#include <string>
#include <vector>

namespace fdwlan {

enum class AggregationMode { None, Dual, Multi };

AggregationMode parse_aggregation_mode(const std::string& s);
std::string to_string(AggregationMode mode);

/**
 * Per-station symmetry-ratio assignment: a fixed value for every STA, or an
 * independent uniform draw from a decimal grid per STA per run.
 * Config syntax: "deterministic:<value>" or "uniform:<lo>:<hi>:step<step>".
 */
struct RhoSpec {
    enum class Kind { Deterministic, UniformGrid };

    Kind kind = Kind::Deterministic;
    double value = 0.3;                      // Deterministic
    double lo = 0.1, hi = 0.9, step = 0.1;   // UniformGrid

    static RhoSpec deterministic(double v);
    static RhoSpec uniform_grid(double lo = 0.1, double hi = 0.9, double step = 0.1);
    static RhoSpec parse(const std::string& s);

    std::vector<double> grid_points() const;  // UniformGrid only
    double mean() const;
    bool random() const { return kind == Kind::UniformGrid; }
    std::string to_string() const;
    void validate() const;
};

/// Aggregation decision for one STA: frame count and the updated UL/DL ratio.
struct GammaResult {
    int gamma;
    double rho_new;
};

/// Dual-frame rule: an STA at rho <= 0.5 doubles its load.
GammaResult gamma_dual(double rho);

/// Multi-frame rule: gamma = floor(1/rho), so the aggregate still fits the
/// downlink transmission (gamma * rho <= 1).
GammaResult gamma_multi(double rho);

GammaResult apply_aggregation(AggregationMode mode, double rho);

/// Full-duplex factor: mean of the client STAs' current rho values.
double fdf(std::span<const double> rhos);

/// Link utilization eta = (1 + phi) / 2, in percent.
double utilization_percent(double phi);

/// E[gamma] under a discrete rho distribution (values[i] with weight probs[i]).
double expected_gamma(AggregationMode mode, std::span<const double> rho_values,
                      std::span<const double> probs);

/// E[gamma] for the uniform decimal grid {0.1, ..., 0.9}.
double expected_gamma_uniform_grid(AggregationMode mode);

/// Expected full-duplex factor (mean post-aggregation rho) for a RhoSpec.
double expected_phi(AggregationMode mode, const RhoSpec& rho);

/**
 * Realized traffic state of the STAs of one scenario instance: original and
 * post-aggregation rho values, per-STA aggregation factors, and the derived
 * network-level quantities.
 */
struct TrafficProfile {
    std::vector<double> rhos;      // original, one per STA
    std::vector<int> gammas;
    std::vector<double> rhos_new;  // post-aggregation
    AggregationMode mode = AggregationMode::None;
    double phi = 0.0;              // mean of rhos_new
    double exp_gamma = 1.0;        // mean of gammas

    static TrafficProfile make(AggregationMode mode, std::span<const double> original_rhos);
};

}  // namespace fdwlan
