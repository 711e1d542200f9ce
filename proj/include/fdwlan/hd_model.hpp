#pragma once

#include "fdwlan/aggregation.hpp"
#include "fdwlan/timing.hpp"

namespace fdwlan {

/// Saturation fixed point of the half-duplex DCF model.
struct HdSolution {
    double tau = 0.0;  // per-event direct-transmission probability
    double p = 0.0;    // conditional collision probability
    int n = 0;
    BackoffParams backoff;
};

struct HdMetrics {
    double p_s = 0.0;
    double p_tr = 0.0;
    double exp_payload_bytes = 0.0;
    double exp_collision_bytes = 0.0;
    double throughput_mbps = 0.0;
    double latency_us = 0.0;
};

/// Transmission probability for a given conditional collision probability
/// (refined saturation model with retry limit backoff.r).
double hd_tau_given_p(double p, const BackoffParams& backoff);

/// Damped Picard iteration on tau = f(p(tau)), p = 1 - (1-tau)^(n-1).
HdSolution solve_hd(int n, const BackoffParams& backoff, double tol = 1e-10, int max_iter = 10000);

/// P(exactly one transmission | at least one), n stations at probability tau.
double hd_success_probability(double tau, int n);

/// P(at least one transmission).
double hd_p_tr(double tau, int n);

/// Expected delivered payload per success: the AP carries a full MPDU, each
/// STA carries mean_rho of one, and every node wins contention equally often.
double hd_expected_payload_bytes(int n, double mean_rho, double mpdu_max);

/// Expected longest frame in a collision when every STA has the same
/// deterministic rho: the AP is the longest whenever it is involved.
double hd_expected_collision_bytes_deterministic(double tau, int n, double rho, double mpdu_max);

/// Same quantity for per-STA rho drawn uniformly from the decimal grid; the
/// 0.3519/0.6481 constants are the two-collider maximum of that grid.
double hd_expected_collision_bytes_uniform(double tau, int n, double mpdu_max);

double hd_expected_collision_bytes(double tau, int n, const RhoSpec& rho, double mpdu_max);

/// Saturation throughput in Mbps with the anomalous-slot corrections
/// (payload and T_s scaled by W/(W-1), one idle slot folded into T_s/T_c).
double hd_throughput_mbps(const PhyMacParams& params, const HdSolution& sol, const RhoSpec& rho);

/// Mean head-of-line-to-ACK delay from Little's theorem: n * E[P] / S.
double hd_latency_us(int n, double throughput_mbps, double exp_payload_bytes);

HdMetrics hd_evaluate(const PhyMacParams& params, const HdSolution& sol, const RhoSpec& rho);

}  // namespace fdwlan
