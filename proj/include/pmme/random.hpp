#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace pmme {

/// Philox4x32-10 counter-based block cipher.
class Philox4x32 {
public:
    using Block = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr Block encrypt(Block ctr, Key key) noexcept {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeylA;
                key[1] += kWeylB;
            }
            const std::uint64_t p0 = static_cast<std::uint64_t>(kMulA) * ctr[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(kMulB) * ctr[2];
            const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const auto lo0 = static_cast<std::uint32_t>(p0);
            const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const auto lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }

private:
    static constexpr std::uint32_t kMulA = 0xD2511F53u;
    static constexpr std::uint32_t kMulB = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeylA = 0x9E3779B9u;
    static constexpr std::uint32_t kWeylB = 0xBB67AE85u;
};

/// SplitMix64 finalizer; used to spread user seeds over the Philox key.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Identifies one independent random stream: (master seed, replication, path).
struct StreamKey {
    std::uint64_t master{0};
    std::uint32_t replication{0};
    std::uint32_t path{0};
    friend bool operator==(const StreamKey&, const StreamKey&) = default;
};

/// Random stream over Philox blocks keyed by a StreamKey. The key holds the
/// mixed master seed, the counter holds (draw block, path, replication), so
/// distinct keys never share a block.
class StreamRng {
public:
    explicit StreamRng(StreamKey key) noexcept
        : key_{static_cast<std::uint32_t>(mix64(key.master)), static_cast<std::uint32_t>(mix64(key.master) >> 32)},
          path_(key.path), replication_(key.replication) {}

    std::uint32_t next_u32() noexcept {
        if (lane_ == 4) refill();
        return block_[lane_++];
    }

    std::uint64_t next_u64() noexcept {
        const std::uint64_t hi = next_u32();
        return (hi << 32) | next_u32();
    }

    /// Uniform on the open interval (0, 1).
    double uniform() noexcept {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Unit-rate exponential.
    double exponential() noexcept { return -std::log(uniform()); }

private:
    void refill() noexcept {
        block_ = Philox4x32::encrypt({static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32),
                                      path_, replication_},
                                     key_);
        ++counter_;
        lane_ = 0;
    }

    Philox4x32::Key key_;
    std::uint32_t path_;
    std::uint32_t replication_;
    std::uint64_t counter_{0};
    Philox4x32::Block block_{};
    int lane_{4};
};

} // namespace pmme
