#pragma once

#include <cstdint>
#include <vector>

namespace fdwlan {

/// Default maximum number of MAC retransmissions before a frame is dropped
/// (802.11 dot11LongRetryLimit; the frames here are far above any RTS threshold).
inline constexpr int kDefaultRetryLimit = 4;

/**
 * PHY/MAC constants for IEEE 802.11ac single-channel operation.
 * Defaults follow the 80 MHz, 16-QAM 1/2, 2x2 MIMO configuration
 * (234 Mbps data rate, 24 Mbps basic rate).
 */
struct PhyMacParams {
    double phy_header_us = 44.0;
    int mac_header_bytes = 36;
    int fcs_bytes = 4;
    int ack_bytes = 14;
    int mpdu_max_bytes = 7991;
    double data_rate_mbps = 234.0;
    double basic_rate_mbps = 24.0;
    double slot_us = 9.0;   // sigma
    double sifs_us = 16.0;
    double difs_us = 34.0;
    int cw_min = 16;
    int cw_max = 1024;

    /// Largest backoff stage m implied by cw_max = cw_min * 2^m.
    int max_backoff_stage() const;

    /// Throws InvalidParameter if any field is out of its admissible range.
    void validate() const;
};

/**
 * Contention-window ladder W_0..W_m plus the retry limit used by the
 * half-duplex model (the full-duplex chain always runs the whole ladder).
 */
struct BackoffParams {
    int w0 = 16;
    int m = 6;
    int r = kDefaultRetryLimit;
    std::vector<int> windows;  // W_i = min(2^i * w0, w0 * 2^m)

    BackoffParams() : BackoffParams(16, 6, kDefaultRetryLimit) {}
    BackoffParams(int w0, int m, int r);
    static BackoffParams from_phy(const PhyMacParams& phy, int retry_limit = kDefaultRetryLimit);

    /// Window for a backoff stage, capped at W_m for stages beyond the ladder.
    int window(int stage) const { return windows[stage < m ? stage : m]; }

    void validate() const;
};

/// Airtime of `bytes` at `rate_mbps`, in microseconds (exact: 8*bytes/rate).
double duration_us(double bytes, double rate_mbps);

/// Same airtime rounded to integer nanoseconds. All simulator bookkeeping is
/// in integer nanoseconds so accumulated channel time is exact.
int64_t duration_ns(double bytes, double rate_mbps);

/// Channel occupancy of a successful exchange carrying `payload_bytes`:
/// headers + payload + SIFS + ACK + DIFS.
int64_t t_success_ns(const PhyMacParams& p, double payload_bytes);
double t_success_us(const PhyMacParams& p, double payload_bytes);

/// Channel occupancy of a collision whose longest frame carries
/// `collision_bytes`. Structurally identical to a successful exchange.
int64_t t_collision_ns(const PhyMacParams& p, double collision_bytes);
double t_collision_us(const PhyMacParams& p, double collision_bytes);

inline int64_t us_to_ns(double us) { return static_cast<int64_t>(us * 1000.0 + 0.5); }

}  // namespace fdwlan
