#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace levyspde {

// Counter-based Philox4x32-10 generator. A stream is fixed by (seed, path,
// mode, substream); draws only advance the block counter, so streams can be
// created anywhere without coordination.
class RandomStream {
public:
    using result_type = std::uint32_t;

    RandomStream(std::uint64_t seed, std::uint32_t path, std::uint32_t mode,
                 std::uint32_t substream = 0) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          ctr_{0u, substream, path, mode} {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        if (used_ == 4) {
            refill();
        }
        return block_[used_++];
    }

    // uniform double in [0, 1) with 53 random bits
    double uniform() noexcept {
        const std::uint64_t hi = (*this)() >> 5;
        const std::uint64_t lo = (*this)() >> 6;
        return static_cast<double>(hi * 67108864ull + lo) * 0x1.0p-53;
    }

private:
    void refill() noexcept {
        std::array<std::uint32_t, 4> c = ctr_;
        std::array<std::uint32_t, 2> k = key_;
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * c[0];
            const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * c[2];
            c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
                 static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
            k[0] += 0x9E3779B9u;
            k[1] += 0xBB67AE85u;
        }
        block_ = c;
        used_ = 0;
        ++ctr_[0];
    }

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> ctr_;
    std::array<std::uint32_t, 4> block_{};
    int used_ = 4;
};

}  // namespace levyspde
