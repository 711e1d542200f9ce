#include "fdwlan/timing.hpp"

#include <cmath>

#include "fdwlan/errors.hpp"

namespace fdwlan {

int PhyMacParams::max_backoff_stage() const {
    int m = 0;
    int w = cw_min;
    while (w < cw_max) {
        w *= 2;
        ++m;
    }
    return m;
}

void PhyMacParams::validate() const {
    if (phy_header_us <= 0 || slot_us <= 0 || sifs_us <= 0 || difs_us <= 0)
        throw InvalidParameter("durations must be strictly positive");
    if (data_rate_mbps <= 0 || basic_rate_mbps <= 0)
        throw InvalidParameter("rates must be strictly positive");
    if (mac_header_bytes < 0 || fcs_bytes < 0 || ack_bytes <= 0)
        throw InvalidParameter("header/ack sizes out of range");
    if (mpdu_max_bytes <= mac_header_bytes + fcs_bytes)
        throw InvalidParameter("mpdu_max_bytes must exceed header + FCS");
    if (cw_min < 2 || cw_max < cw_min)
        throw InvalidParameter("contention window bounds out of range");
    // cw_max must sit on the doubling ladder from cw_min
    int w = cw_min;
    while (w < cw_max) w *= 2;
    if (w != cw_max)
        throw InvalidParameter("cw_max must equal cw_min * 2^m for integer m");
}

BackoffParams::BackoffParams(int w0, int m, int r) : w0(w0), m(m), r(r) {
    validate();
    const int cap = w0 << m;
    windows.reserve(m + 1);
    for (int i = 0; i <= m; ++i) {
        const int w = (i < 31 && (w0 << i) <= cap) ? (w0 << i) : cap;
        windows.push_back(w);
    }
}

BackoffParams BackoffParams::from_phy(const PhyMacParams& phy, int retry_limit) {
    phy.validate();
    return BackoffParams(phy.cw_min, phy.max_backoff_stage(), retry_limit);
}

void BackoffParams::validate() const {
    if (w0 < 2) throw InvalidParameter("initial window must be >= 2");
    if (m < 0 || r < 0) throw InvalidParameter("m and r must be non-negative");
}

double duration_us(double bytes, double rate_mbps) {
    if (rate_mbps <= 0) throw InvalidParameter("rate must be positive");
    if (bytes < 0) throw InvalidParameter("byte count must be non-negative");
    return 8.0 * bytes / rate_mbps;
}

int64_t duration_ns(double bytes, double rate_mbps) {
    return llround(1000.0 * duration_us(bytes, rate_mbps));
}

namespace {

int64_t exchange_ns(const PhyMacParams& p, double payload_bytes) {
    if (payload_bytes <= 0) throw InvalidParameter("payload must be positive");
    if (payload_bytes > p.mpdu_max_bytes) throw InvalidParameter("payload exceeds mpdu_max_bytes");
    const int64_t header = us_to_ns(p.phy_header_us) +
                           duration_ns(p.mac_header_bytes + p.fcs_bytes, p.data_rate_mbps);
    const int64_t ack = us_to_ns(p.phy_header_us) + duration_ns(p.ack_bytes, p.basic_rate_mbps);
    return header + duration_ns(payload_bytes, p.data_rate_mbps) + us_to_ns(p.sifs_us) + ack +
           us_to_ns(p.difs_us);
}

}  // namespace

int64_t t_success_ns(const PhyMacParams& p, double payload_bytes) {
    return exchange_ns(p, payload_bytes);
}

double t_success_us(const PhyMacParams& p, double payload_bytes) {
    return t_success_ns(p, payload_bytes) / 1000.0;
}

int64_t t_collision_ns(const PhyMacParams& p, double collision_bytes) {
    return exchange_ns(p, collision_bytes);
}

double t_collision_us(const PhyMacParams& p, double collision_bytes) {
    return t_collision_ns(p, collision_bytes) / 1000.0;
}

}  // namespace fdwlan
