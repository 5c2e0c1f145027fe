#ifndef TAILWEIGHT_RNG_HPP
#define TAILWEIGHT_RNG_HPP

#include <array>
#include <cstdint>
#include <limits>

namespace tailweight {

namespace detail {

inline void mul_hilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi,
                     std::uint64_t& lo) {
  const unsigned __int128 product =
      static_cast<unsigned __int128>(a) * static_cast<unsigned __int128>(b);
  hi = static_cast<std::uint64_t>(product >> 64);
  lo = static_cast<std::uint64_t>(product);
}

}  // namespace detail

using philox_counter = std::array<std::uint64_t, 4>;
using philox_key = std::array<std::uint64_t, 2>;

// Philox4x64 with 10 rounds (Salmon et al., "Parallel random numbers: as
// easy as 1, 2, 3"). Pure function of (counter, key).
inline philox_counter philox4x64_10(philox_counter ctr, philox_key key) {
  constexpr std::uint64_t m0 = 0xD2E7470EE14C6C93ULL;
  constexpr std::uint64_t m1 = 0xCA5A826395121157ULL;
  constexpr std::uint64_t w0 = 0x9E3779B97F4A7C15ULL;
  constexpr std::uint64_t w1 = 0xBB67AE8584CAA73BULL;
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += w0;
      key[1] += w1;
    }
    std::uint64_t hi0, lo0, hi1, lo1;
    detail::mul_hilo(m0, ctr[0], hi0, lo0);
    detail::mul_hilo(m1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

/// Deterministic random stream identified by (master_seed, stream_index).
///
/// The pair forms the Philox key, so streams with different indices are
/// independent substreams of the same family. The 256-bit block counter is
/// pre-incremented before every block; the raw output sequence is identical
/// to numpy's `Philox(key=[master_seed, stream_index])`.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
      : key_{master_seed, stream_index},
        master_seed_(master_seed),
        stream_index_(stream_index) {}

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t stream_index() const noexcept { return stream_index_; }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    if (buffer_pos_ == buffer_.size()) {
      increment_counter();
      buffer_ = philox4x64_10(counter_, key_);
      buffer_pos_ = 0;
    }
    return buffer_[buffer_pos_++];
  }

  /// Value strictly inside (0,1): (m + 1/2) / 2^53 for the top 53 bits m.
  double uniform01() {
    const std::uint64_t m = (*this)() >> 11;
    return (static_cast<double>(m) + 0.5) * 0x1.0p-53;
  }

 private:
  void increment_counter() {
    for (auto& word : counter_) {
      if (++word != 0) break;
    }
  }

  philox_key key_;
  philox_counter counter_{0, 0, 0, 0};
  philox_counter buffer_{};
  std::size_t buffer_pos_ = 4;
  std::uint64_t master_seed_;
  std::uint64_t stream_index_;
};

inline RngStream make_stream(std::uint64_t master_seed,
                             std::uint64_t stream_index) {
  return RngStream(master_seed, stream_index);
}

inline double uniform01(RngStream& stream) { return stream.uniform01(); }

}  // namespace tailweight

#endif  // TAILWEIGHT_RNG_HPP
