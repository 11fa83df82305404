#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace boxdim {

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers:
/// as easy as 1, 2, 3").  Pure: output depends only on (counter, key).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key);

/// What a stream is used for.  Distinct roles never share counters.
enum class StreamRole : std::uint32_t {
    count = 1,
    times = 2,
    sizes = 3,
    bootstrap = 4,
    auxiliary = 5,
};

/// SplitMix64 finaliser; used to derive independent seeds.
std::uint64_t mix64(std::uint64_t x);
/// Seed for a named sub-campaign (e.g. the renewal stage of clt_N).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

/// Sequential view of one counter-based stream keyed by
/// (seed, replica, role, chunk).  Satisfies UniformRandomBitGenerator.
class CounterStream {
  public:
    using result_type = std::uint64_t;

    CounterStream(std::uint64_t seed, std::uint64_t replica, StreamRole role, std::uint32_t chunk = 0);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()();

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01();
    /// Uniform on (0, 1].
    double uniform_open_closed();

  private:
    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> ctr_;
    std::array<std::uint32_t, 4> block_{};
    int used_ = 4;  // 32-bit words consumed from block_
};

}  // namespace boxdim
