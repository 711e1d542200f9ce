#include "fdwlan/ibfd_model.hpp"

#include <cmath>
#include <numeric>

#include "fdwlan/errors.hpp"

namespace fdwlan {

void ChainParams::validate() const {
    if (p < 0.0 || p >= 1.0) throw InvalidParameter("chain p must be in [0, 1)");
    if (beta <= 0.0 || beta > 1.0) throw InvalidParameter("chain beta must be in (0, 1]");
    backoff.validate();
}

double chain_window_sum(double beta, int window) {
    // (1 - alpha^W) / (W (1 - alpha)) = (1/W) sum_{t<W} alpha^t, via
    // expm1/log1p so tiny beta cannot cancel. beta = 1 gives 1/W.
    if (beta >= 1.0) return 1.0 / window;
    return -std::expm1(window * std::log1p(-beta)) / (window * beta);
}

ChainSolution chain_stationary_tau(const ChainParams& chain) {
    chain.validate();
    const int m = chain.backoff.m;
    const double p = chain.p;
    const double beta = chain.beta;

    double s0 = chain_window_sum(beta, chain.backoff.window(0));
    double geom = 1.0;   // 1 + sum_i prod_{j<=i} p S_j
    double prod = 1.0;   // running prod_{j<=i} p S_j
    for (int i = 1; i <= m; ++i) {
        prod *= p * chain_window_sum(beta, chain.backoff.window(i));
        geom += prod;
    }
    const double den = 1.0 - prod * p * s0;  // 1 - prod_{j=0..m} p S_j
    const double divisor = den - s0 * geom * (1.0 - beta - p);
    if (divisor <= 0.0 || den <= 0.0)
        throw ModelInconsistency("chain normalization denominator is not positive");
    const double tau = beta * s0 * geom / divisor;
    return {tau, tau / geom};
}

double chain_b00(const ChainParams& chain, double tau) {
    chain.validate();
    if (tau < 0.0 || tau > 1.0) throw InvalidParameter("tau must be in [0, 1]");
    const int m = chain.backoff.m;
    const double s0 = chain_window_sum(chain.beta, chain.backoff.window(0));
    double prod = 1.0;
    for (int j = 0; j <= m; ++j) prod *= chain.p * chain_window_sum(chain.beta, chain.backoff.window(j));
    const double den = 1.0 - prod;
    if (den <= 0.0) throw ModelInconsistency("chain normalization denominator is not positive");
    // s0 * ((alpha - p) tau + beta) is the stable form of
    // (1 - alpha^W0)/W0 * ((alpha - p)/(1 - alpha) tau + 1).
    return s0 * ((chain.alpha() - chain.p) * tau + chain.beta) / den;
}

double chain_b_i0(const ChainParams& chain, double b00, int stage) {
    if (stage < 0 || stage > chain.backoff.m) throw InvalidParameter("stage out of range");
    double v = b00;
    for (int j = 1; j <= stage; ++j) v *= chain.p * chain_window_sum(chain.beta, chain.backoff.window(j));
    return v;
}

double beta_ap(double tau_sta, int n) {
    if (n < 2) throw InvalidParameter("beta_ap needs n >= 2");
    if (tau_sta < 0.0 || tau_sta > 1.0) throw InvalidParameter("tau out of range");
    return (n - 1) * tau_sta * std::pow(1.0 - tau_sta, n - 2);
}

double beta_sta(double tau_ap, double tau_sta, int n) {
    if (n < 2) throw InvalidParameter("beta_sta needs n >= 2");
    return tau_ap * std::pow(1.0 - tau_sta, n - 2) / (n - 1);
}

double p_ap(double tau_sta, int n) {
    if (n < 2) throw InvalidParameter("p_ap needs n >= 2");
    const double tb = 1.0 - tau_sta;
    const double ok = std::pow(tb, n - 1) + tau_sta * std::pow(tb, n - 2);
    return std::fmax(0.0, 1.0 - ok);
}

double p_sta(double tau_ap, double tau_sta, int n) {
    if (n < 2) throw InvalidParameter("p_sta needs n >= 2");
    const double tb = 1.0 - tau_sta;
    const double ok = (1.0 - tau_ap) * std::pow(tb, n - 2) +
                      tau_ap * std::pow(tb, n - 2) / (n - 1);
    return std::fmax(0.0, 1.0 - ok);
}

IbfdSolution solve_ibfd(int n, const BackoffParams& backoff, double tol, int max_iter, double tau0) {
    if (n < 2) throw InvalidParameter("the full-duplex model needs n >= 2");
    if (tol <= 0) throw InvalidParameter("tolerance must be positive");
    backoff.validate();

    const double lambda = 0.5;
    IbfdSolution s;
    s.n = n;
    s.backoff = backoff;
    s.tau_ap = s.tau_sta = tau0;

    double residual = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        s.beta_ap = beta_ap(s.tau_sta, n);
        s.beta_sta = beta_sta(s.tau_ap, s.tau_sta, n);
        s.alpha_ap = 1.0 - s.beta_ap;
        s.alpha_sta = 1.0 - s.beta_sta;
        s.p_ap = p_ap(s.tau_sta, n);
        s.p_sta = p_sta(s.tau_ap, s.tau_sta, n);

        const double next_ap = chain_stationary_tau({s.p_ap, s.beta_ap, backoff}).tau;
        const double next_sta = chain_stationary_tau({s.p_sta, s.beta_sta, backoff}).tau;
        residual = std::fmax(std::fabs(next_ap - s.tau_ap), std::fabs(next_sta - s.tau_sta));
        s.tau_ap = (1.0 - lambda) * s.tau_ap + lambda * next_ap;
        s.tau_sta = (1.0 - lambda) * s.tau_sta + lambda * next_sta;
        if (residual < tol) {
            s.tau_avg = s.tau_ap / n + (n - 1.0) / n * s.tau_sta;
            return s;
        }
    }
    throw ConvergenceFailure("full-duplex fixed point did not converge", residual, max_iter);
}

double p_tr_ibfd(const IbfdSolution& sol) {
    return 1.0 - (1.0 - sol.tau_ap) * std::pow(1.0 - sol.tau_sta, sol.n - 1);
}

double p_success_ibfd(const IbfdSolution& sol) {
    const int n = sol.n;
    const double ta = sol.tau_ap, ts = sol.tau_sta;
    const double tba = 1.0 - ta, tbs = 1.0 - ts;
    const double p_tr = p_tr_ibfd(sol);
    if (p_tr <= 0.0) throw InvalidParameter("success probability undefined: nobody transmits");
    const double ap_alone = ta * std::pow(tbs, n - 1);
    const double sta_alone = (n - 1) * ts * tba * std::pow(tbs, n - 2);
    // AP and exactly one STA transmit together and the AP addressed that STA
    // (probability 1/(n-1) per STA, summed over the n-1 candidates).
    const double mutual = ta * ts * std::pow(tbs, n - 2);
    return (ap_alone + sta_alone + mutual) / p_tr;
}

double ibfd_throughput_mbps(const PhyMacParams& params, const IbfdSolution& sol, double phi) {
    params.validate();
    if (phi < 0.0 || phi > 1.0) throw InvalidParameter("phi must be in [0, 1]");
    const double p_tr = p_tr_ibfd(sol);
    const double p_s = p_success_ibfd(sol);
    const double mpdu = params.mpdu_max_bytes;
    const double ts = t_success_us(params, mpdu);
    const double tc = t_collision_us(params, mpdu);
    const double denom = (1.0 - p_tr) * params.slot_us + p_tr * p_s * ts + p_tr * (1.0 - p_s) * tc;
    return p_s * p_tr * 8.0 * mpdu * (1.0 + phi) / denom;
}

double ibfd_latency_us(int n, double s_mbps, double phi, double exp_gamma, double mpdu_max) {
    if (s_mbps <= 0.0) throw InvalidParameter("latency undefined at zero throughput");
    if (exp_gamma < 1.0) throw InvalidParameter("expected aggregation factor must be >= 1");
    return n * 8.0 * mpdu_max * (1.0 + phi) / ((1.0 + exp_gamma) * s_mbps);
}

IbfdMetrics ibfd_evaluate(const PhyMacParams& params, const IbfdSolution& sol, double phi,
                          double exp_gamma) {
    IbfdMetrics m;
    m.p_tr = p_tr_ibfd(sol);
    m.p_s = p_success_ibfd(sol);
    m.exp_payload_bytes = params.mpdu_max_bytes;
    m.throughput_mbps = ibfd_throughput_mbps(params, sol, phi);
    m.latency_us = ibfd_latency_us(sol.n, m.throughput_mbps, phi, exp_gamma, params.mpdu_max_bytes);
    return m;
}

// ---------------------------------------------------------------------------
// Stationary oracle: explicit transition matrix and a dense pi P = pi solve.
// ---------------------------------------------------------------------------

StationaryDistribution::StationaryDistribution(BackoffParams backoff, std::vector<double> pi)
    : backoff_(std::move(backoff)), pi_(std::move(pi)) {
    offsets_.resize(backoff_.m + 2, 0);
    for (int i = 0; i <= backoff_.m; ++i) offsets_[i + 1] = offsets_[i] + backoff_.window(i);
}

double StationaryDistribution::at(int stage, int counter) const {
    if (stage < 0 || stage > backoff_.m || counter < 0 || counter >= backoff_.window(stage))
        throw InvalidParameter("state (stage, counter) out of range");
    return pi_[offsets_[stage] + counter];
}

double StationaryDistribution::tau() const {
    double t = 0.0;
    for (int i = 0; i <= backoff_.m; ++i) t += pi_[offsets_[i]];
    return t;
}

double StationaryDistribution::sum() const {
    return std::accumulate(pi_.begin(), pi_.end(), 0.0);
}

namespace {

/// Dense Gaussian elimination with partial pivoting: solves A x = b in place.
std::vector<double> solve_linear(std::vector<double>& a, std::vector<double>& b, int n) {
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int row = col + 1; row < n; ++row)
            if (std::fabs(a[row * n + col]) > std::fabs(a[pivot * n + col])) pivot = row;
        if (std::fabs(a[pivot * n + col]) < 1e-300)
            throw ModelInconsistency("singular transition system (reducible or periodic chain)");
        if (pivot != col) {
            for (int k = 0; k < n; ++k) std::swap(a[pivot * n + k], a[col * n + k]);
            std::swap(b[pivot], b[col]);
        }
        const double inv = 1.0 / a[col * n + col];
        for (int row = col + 1; row < n; ++row) {
            const double f = a[row * n + col] * inv;
            if (f == 0.0) continue;
            for (int k = col; k < n; ++k) a[row * n + k] -= f * a[col * n + k];
            b[row] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (int row = n - 1; row >= 0; --row) {
        double v = b[row];
        for (int k = row + 1; k < n; ++k) v -= a[row * n + k] * x[k];
        x[row] = v / a[row * n + row];
    }
    return x;
}

}  // namespace

StationaryDistribution stationary_oracle(const ChainParams& chain) {
    if (chain.p < 0.0 || chain.p >= 1.0) throw InvalidParameter("chain p must be in [0, 1)");
    if (chain.beta < 0.0 || chain.beta > 1.0) throw InvalidParameter("chain beta must be in [0, 1]");
    const BackoffParams& bo = chain.backoff;
    const int m = bo.m;

    std::vector<int> offsets(m + 2, 0);
    for (int i = 0; i <= m; ++i) offsets[i + 1] = offsets[i] + bo.window(i);
    const int ns = offsets[m + 1];
    if (ns > 10000) throw InvalidParameter("state space too large for the dense oracle");

    const double alpha = chain.alpha();
    const int w0 = bo.window(0);
    std::vector<double> pt(static_cast<size_t>(ns) * ns, 0.0);  // transposed transition matrix
    auto add = [&](int from, int to, double prob) { pt[static_cast<size_t>(to) * ns + from] += prob; };

    for (int i = 0; i <= m; ++i) {
        const int wi = bo.window(i);
        const int base = offsets[i];
        // transmission states (i, 0)
        if (i < m) {
            for (int k0 = 0; k0 < w0; ++k0) add(base, offsets[0] + k0, (1.0 - chain.p) / w0);
            const int wn = bo.window(i + 1);
            for (int k = 0; k < wn; ++k) add(base, offsets[i + 1] + k, chain.p / wn);
        } else {
            for (int k0 = 0; k0 < w0; ++k0) add(base, offsets[0] + k0, 1.0 / w0);
        }
        // counting-down states (i, k >= 1)
        for (int k = 1; k < wi; ++k) {
            add(base + k, base + k - 1, alpha);
            for (int k0 = 0; k0 < w0; ++k0) add(base + k, offsets[0] + k0, chain.beta / w0);
        }
    }

    // pi (P - I) = 0 with sum(pi) = 1: transpose, replace the last equation.
    for (int s = 0; s < ns; ++s) pt[static_cast<size_t>(s) * ns + s] -= 1.0;
    std::vector<double> rhs(ns, 0.0);
    for (int s = 0; s < ns; ++s) pt[static_cast<size_t>(ns - 1) * ns + s] = 1.0;
    rhs[ns - 1] = 1.0;

    std::vector<double> pi = solve_linear(pt, rhs, ns);

    double total = 0.0;
    for (double v : pi) {
        if (v < -1e-9) throw ModelInconsistency("negative stationary mass");
        total += v;
    }
    if (std::fabs(total - 1.0) > 1e-9) throw ModelInconsistency("stationary mass does not normalize");
    return StationaryDistribution(bo, std::move(pi));
}

}  // namespace fdwlan
