#ifndef POLYA_RNG_HPP
#define POLYA_RNG_HPP

#include <array>
#include <cstdint>
#include <limits>

namespace polya::rng {

// Philox4x32-10 counter-based generator (Salmon et al., Random123). The output
// block is a pure function of (counter, key), so any stream position can be
// reached directly and streams keyed by (seed, index) never overlap.
struct philox4x32
{
    using counter_type = std::array<std::uint32_t, 4>;
    using key_type = std::array<std::uint32_t, 2>;

    static constexpr std::uint32_t m0 = 0xD2511F53u;
    static constexpr std::uint32_t m1 = 0xCD9E8D57u;
    static constexpr std::uint32_t w0 = 0x9E3779B9u;
    static constexpr std::uint32_t w1 = 0xBB67AE85u;

    static constexpr counter_type block(counter_type ctr, key_type key) noexcept
    {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += w0;
                key[1] += w1;
            }
            const std::uint64_t p0 = static_cast<std::uint64_t>(m0) * ctr[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(m1) * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
                   static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
                   static_cast<std::uint32_t>(p0)};
        }
        return ctr;
    }
    // Two blocks with the same key, rounds interleaved so the multiplies of
    // one hide the latency of the other.
    static constexpr void block2(counter_type& x, counter_type& y, key_type key) noexcept
    {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += w0;
                key[1] += w1;
            }
            const std::uint64_t px0 = static_cast<std::uint64_t>(m0) * x[0];
            const std::uint64_t px1 = static_cast<std::uint64_t>(m1) * x[2];
            const std::uint64_t py0 = static_cast<std::uint64_t>(m0) * y[0];
            const std::uint64_t py1 = static_cast<std::uint64_t>(m1) * y[2];
            x = {static_cast<std::uint32_t>(px1 >> 32) ^ x[1] ^ key[0], static_cast<std::uint32_t>(px1),
                 static_cast<std::uint32_t>(px0 >> 32) ^ x[3] ^ key[1], static_cast<std::uint32_t>(px0)};
            y = {static_cast<std::uint32_t>(py1 >> 32) ^ y[1] ^ key[0], static_cast<std::uint32_t>(py1),
                 static_cast<std::uint32_t>(py0 >> 32) ^ y[3] ^ key[1], static_cast<std::uint32_t>(py0)};
        }
    }
};

// Uniform double in [0, 1) from the top 53 bits.
constexpr double to_unit(std::uint64_t bits) noexcept
{
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// A 64-bit stream over Philox blocks. The stream is identified by a 64-bit key
// and a 64-bit stream id (the upper counter words); the lower counter words
// index the block within the stream. Satisfies UniformRandomBitGenerator.
class philox_stream
{
public:
    using result_type = std::uint64_t;

    constexpr philox_stream(std::uint64_t key, std::uint64_t stream_id) noexcept
        : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)},
          stream_{static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32)}
    {
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept
    {
        if (used_ == 4) {
            philox4x32::counter_type a{static_cast<std::uint32_t>(block_),
                                       static_cast<std::uint32_t>(block_ >> 32), stream_[0], stream_[1]};
            philox4x32::counter_type b{static_cast<std::uint32_t>(block_ + 1),
                                       static_cast<std::uint32_t>((block_ + 1) >> 32), stream_[0],
                                       stream_[1]};
            philox4x32::block2(a, b, key_);
            for (int i = 0; i < 2; ++i) {
                out_[i] = (static_cast<std::uint64_t>(a[2 * i + 1]) << 32) | a[2 * i];
                out_[i + 2] = (static_cast<std::uint64_t>(b[2 * i + 1]) << 32) | b[2 * i];
            }
            block_ += 2;
            used_ = 0;
        }
        return out_[used_++];
    }

    constexpr double uniform() noexcept { return to_unit((*this)()); }

private:
    philox4x32::key_type key_;
    std::array<std::uint32_t, 2> stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 4> out_{};
    int used_ = 4;
};

// SplitMix64 finaliser, used to turn structured identifiers into keys.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace polya::rng

#endif
