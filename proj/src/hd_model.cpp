#include "fdwlan/hd_model.hpp"

#include <cmath>

#include "fdwlan/errors.hpp"

namespace fdwlan {

double hd_tau_given_p(double p, const BackoffParams& backoff) {
    if (p < 0.0 || p >= 1.0) throw InvalidParameter("p must be in [0, 1)");
    const int r = backoff.r;
    double sum = 0.0;
    double pi = 1.0;
    for (int i = 0; i <= r; ++i) {
        sum += pi * (backoff.window(i) - 1) / 2.0;
        pi *= p;
    }
    // pi is now p^(r+1)
    return 1.0 / (1.0 + (1.0 - p) / (1.0 - pi) * sum - (1.0 - p) / 2.0);
}

HdSolution solve_hd(int n, const BackoffParams& backoff, double tol, int max_iter) {
    if (n < 1) throw InvalidParameter("node count must be >= 1");
    if (tol <= 0) throw InvalidParameter("tolerance must be positive");
    backoff.validate();

    const double lambda = 0.5;
    double tau = hd_tau_given_p(0.0, backoff);
    double p = 0.0;
    double residual = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        p = 1.0 - std::pow(1.0 - tau, n - 1);
        const double next = hd_tau_given_p(p, backoff);
        residual = std::fabs(next - tau);
        if (residual < tol) {
            return {next, 1.0 - std::pow(1.0 - next, n - 1), n, backoff};
        }
        tau = (1.0 - lambda) * tau + lambda * next;
    }
    throw ConvergenceFailure("half-duplex fixed point did not converge", residual, max_iter);
}

double hd_success_probability(double tau, int n) {
    if (n < 1) throw InvalidParameter("node count must be >= 1");
    if (tau <= 0.0 || tau > 1.0)
        throw InvalidParameter("success probability undefined unless 0 < tau <= 1");
    if (n == 1) return 1.0;
    const double p_tr = 1.0 - std::pow(1.0 - tau, n);
    return n * tau * std::pow(1.0 - tau, n - 1) / p_tr;
}

double hd_p_tr(double tau, int n) { return 1.0 - std::pow(1.0 - tau, n); }

double hd_expected_payload_bytes(int n, double mean_rho, double mpdu_max) {
    if (n < 1) throw InvalidParameter("node count must be >= 1");
    if (mean_rho < 0.0 || mean_rho > 1.0) throw InvalidParameter("mean rho must be in [0, 1]");
    return (1.0 + (n - 1) * mean_rho) / n * mpdu_max;
}

namespace {

/// P(the AP is among the transmitters | at least two transmitters).
double ap_in_collision_fraction(double tau, int n) {
    const double no_coll = 1.0 - std::pow(1.0 - tau, n) - n * tau * std::pow(1.0 - tau, n - 1);
    if (no_coll <= 0.0)
        throw InvalidParameter("no collision probability mass at these (tau, n)");
    return tau * (1.0 - std::pow(1.0 - tau, n - 1)) / no_coll;
}

}  // namespace

double hd_expected_collision_bytes_deterministic(double tau, int n, double rho, double mpdu_max) {
    if (n < 2) throw InvalidParameter("collisions need n >= 2");
    if (tau <= 0.0 || tau >= 1.0) throw InvalidParameter("tau must be in (0, 1)");
    const double q = ap_in_collision_fraction(tau, n);
    // AP involved: the channel is held for its full MPDU; otherwise every
    // colliding STA carries the same rho-sized load.
    return (q + (1.0 - q) * rho) * mpdu_max;
}

double hd_expected_collision_bytes_uniform(double tau, int n, double mpdu_max) {
    if (n < 2) throw InvalidParameter("collisions need n >= 2");
    if (tau <= 0.0 || tau >= 1.0) throw InvalidParameter("tau must be in (0, 1)");
    const double q = ap_in_collision_fraction(tau, n);
    return (0.3519 * q + 0.6481) * mpdu_max;
}

double hd_expected_collision_bytes(double tau, int n, const RhoSpec& rho, double mpdu_max) {
    return rho.random() ? hd_expected_collision_bytes_uniform(tau, n, mpdu_max)
                        : hd_expected_collision_bytes_deterministic(tau, n, rho.value, mpdu_max);
}

double hd_throughput_mbps(const PhyMacParams& params, const HdSolution& sol, const RhoSpec& rho) {
    params.validate();
    const int n = sol.n;
    const double sigma = params.slot_us;
    const double p_tr = hd_p_tr(sol.tau, n);
    const double p_s = hd_success_probability(sol.tau, n);
    const double ep = hd_expected_payload_bytes(n, rho.mean(), params.mpdu_max_bytes);
    const double eps = n >= 2 ? hd_expected_collision_bytes(sol.tau, n, rho, params.mpdu_max_bytes)
                              : static_cast<double>(params.mpdu_max_bytes);

    const double w_corr = static_cast<double>(sol.backoff.w0) / (sol.backoff.w0 - 1);
    const double ep_bar = ep * w_corr;
    const double ts_bar = t_success_us(params, ep) * w_corr + sigma;
    const double tc_bar = t_collision_us(params, eps) + sigma;

    const double denom = (1.0 - p_tr) * sigma + p_tr * p_s * ts_bar + p_tr * (1.0 - p_s) * tc_bar;
    return p_s * p_tr * 8.0 * ep_bar / denom;  // bits / us == Mbps
}

double hd_latency_us(int n, double throughput_mbps, double exp_payload_bytes) {
    if (throughput_mbps <= 0.0) throw InvalidParameter("latency undefined at zero throughput");
    return n * 8.0 * exp_payload_bytes / throughput_mbps;
}

HdMetrics hd_evaluate(const PhyMacParams& params, const HdSolution& sol, const RhoSpec& rho) {
    HdMetrics m;
    m.p_tr = hd_p_tr(sol.tau, sol.n);
    m.p_s = hd_success_probability(sol.tau, sol.n);
    m.exp_payload_bytes = hd_expected_payload_bytes(sol.n, rho.mean(), params.mpdu_max_bytes);
    m.exp_collision_bytes =
        sol.n >= 2 ? hd_expected_collision_bytes(sol.tau, sol.n, rho, params.mpdu_max_bytes)
                   : static_cast<double>(params.mpdu_max_bytes);
    m.throughput_mbps = hd_throughput_mbps(params, sol, rho);
    m.latency_us = hd_latency_us(sol.n, m.throughput_mbps, m.exp_payload_bytes);
    return m;
}

}  // namespace fdwlan
