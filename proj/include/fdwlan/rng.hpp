#pragma once

#include <array>
#include <cstdint>

namespace fdwlan {

/**
 * Philox4x32-10 counter-based random number generator.
 *
 * State is (key, counter): the key holds the 64-bit master seed, the top
 * half of the 128-bit counter holds a 64-bit stream id, and the bottom half
 * is the block index. Stream splitting is therefore trivial and exact:
 * Philox(seed, s1) and Philox(seed, s2) are independent for s1 != s2, which
 * is how per-replication streams are derived from one master seed.
 *
 * Output order within a stream: blocks of four 32-bit words, consumed
 * word 0..3, then the block counter increments.
 */
class Philox {
public:
    explicit Philox(uint64_t seed, uint64_t stream = 0)
        : key_{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32)},
          ctr_{0, 0, static_cast<uint32_t>(stream), static_cast<uint32_t>(stream >> 32)} {}

    /// One 10-round Philox4x32 block. Exposed for known-answer tests.
    static std::array<uint32_t, 4> block(std::array<uint32_t, 4> ctr, std::array<uint32_t, 2> key) {
        for (int round = 0; round < 10; ++round) {
            const uint64_t p0 = kMul0 * static_cast<uint64_t>(ctr[0]);
            const uint64_t p1 = kMul1 * static_cast<uint64_t>(ctr[2]);
            ctr = {static_cast<uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
                   static_cast<uint32_t>(p1),
                   static_cast<uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
                   static_cast<uint32_t>(p0)};
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        return ctr;
    }

    uint32_t next_u32() {
        if (pos_ == 4) {
            buf_ = block(ctr_, key_);
            pos_ = 0;
            if (++ctr_[0] == 0) ++ctr_[1];
        }
        return buf_[pos_++];
    }

    uint64_t next_u64() {
        const uint64_t lo = next_u32();
        const uint64_t hi = next_u32();
        return (hi << 32) | lo;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound). Fixed-point multiply keeps the bias
    /// below 2^-64 per draw, so no rejection loop is needed.
    uint32_t uniform_int(uint32_t bound) {
        return static_cast<uint32_t>((static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
    }

private:
    static constexpr uint32_t kMul0 = 0xD2511F53u;
    static constexpr uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr uint32_t kWeyl1 = 0xBB67AE85u;

    std::array<uint32_t, 2> key_;
    std::array<uint32_t, 4> ctr_;
    std::array<uint32_t, 4> buf_{};
    int pos_ = 4;
};

}  // namespace fdwlan
