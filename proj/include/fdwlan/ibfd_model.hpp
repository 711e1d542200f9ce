#pragma once

#include <vector>

#include "fdwlan/timing.hpp"

namespace fdwlan {

/**
 * Parameters of the per-node backoff chain with reply-back transitions.
 * From a counter state (i, k>=1) the node decrements with probability
 * alpha = 1 - beta and jumps to a fresh stage-0 draw with probability beta
 * (it was engaged by a transmission addressed to it).
 */
struct ChainParams {
    double p = 0.0;     // conditional collision probability
    double beta = 0.0;  // reply-back probability
    BackoffParams backoff;

    double alpha() const { return 1.0 - beta; }
    void validate() const;
};

/// Joint closed-form solution of the chain: direct-transmission probability
/// and the stage-0 zero-counter mass it is built from.
struct ChainSolution {
    double tau;
    double b00;
};

/// Stationary (1-alpha^W)/(W*(1-alpha)) evaluated stably for any beta in (0, 1].
double chain_window_sum(double beta, int window);

/// Solves the mutually-dependent closed forms for b_{0,0} and tau exactly
/// (b_{0,0} is affine in tau, so the pair reduces to one linear relation).
ChainSolution chain_stationary_tau(const ChainParams& chain);

/// Closed-form b_{0,0} given tau.
double chain_b00(const ChainParams& chain, double tau);

/// Closed-form b_{i,0} = b_{0,0} * prod_{j=1..i} p * S(W_j).
double chain_b_i0(const ChainParams& chain, double b00, int stage);

/// Reply-back probability of the AP: exactly one STA transmits.
double beta_ap(double tau_sta, int n);

/// Reply-back probability of an STA: the AP transmits and addressed it.
double beta_sta(double tau_ap, double tau_sta, int n);

/// Conditional collision probability of the AP's direct transmission.
double p_ap(double tau_sta, int n);

/// Conditional collision probability of an STA's direct transmission.
double p_sta(double tau_ap, double tau_sta, int n);

struct IbfdSolution {
    double tau_ap = 0.0, tau_sta = 0.0;
    double p_ap = 0.0, p_sta = 0.0;
    double beta_ap = 0.0, beta_sta = 0.0;
    double alpha_ap = 1.0, alpha_sta = 1.0;
    double tau_avg = 0.0;  // (1/n) tau_ap + ((n-1)/n) tau_sta
    int n = 0;
    BackoffParams backoff;
};

/// Coupled AP/STA fixed point: damped Gauss-Seidel over (beta, p, tau) with
/// the chain closed form per role.
IbfdSolution solve_ibfd(int n, const BackoffParams& backoff, double tol = 1e-10,
                        int max_iter = 20000, double tau0 = 0.1);

/// P(channel event is a success | at least one direct transmission).
/// Success events: AP alone, one STA alone, or AP and its addressee together.
double p_success_ibfd(const IbfdSolution& sol);

/// P(at least one direct transmission).
double p_tr_ibfd(const IbfdSolution& sol);

struct IbfdMetrics {
    double p_s = 0.0;
    double p_tr = 0.0;
    double throughput_mbps = 0.0;
    double latency_us = 0.0;
    double exp_payload_bytes = 0.0;  // always one full MPDU (the AP's load)
};

/// Network throughput in Mbps: every success carries (1 + phi) MPDUs of
/// payload, collisions and successes both occupy a full-MPDU exchange.
double ibfd_throughput_mbps(const PhyMacParams& params, const IbfdSolution& sol, double phi);

/// Little's-theorem latency: n customers, (1 + E[gamma]) frames per success.
double ibfd_latency_us(int n, double s_mbps, double phi, double exp_gamma, double mpdu_max);

IbfdMetrics ibfd_evaluate(const PhyMacParams& params, const IbfdSolution& sol, double phi,
                          double exp_gamma);

/**
 * Dense stationary distribution of the chain, computed from the explicit
 * transition matrix. Testing oracle for the closed forms; also reachable
 * from the CLI for debugging.
 */
class StationaryDistribution {
public:
    StationaryDistribution(BackoffParams backoff, std::vector<double> pi);

    double at(int stage, int counter) const;
    double tau() const;   // sum over (i, 0)
    double sum() const;   // should be 1 up to solver round-off
    int states() const { return static_cast<int>(pi_.size()); }
    const BackoffParams& backoff() const { return backoff_; }

private:
    BackoffParams backoff_;
    std::vector<int> offsets_;
    std::vector<double> pi_;
};

/// Builds the |states| x |states| transition matrix and solves pi P = pi.
StationaryDistribution stationary_oracle(const ChainParams& chain);

}  // namespace fdwlan
