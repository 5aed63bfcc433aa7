#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>

namespace aloe {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// The 128-bit counter is laid out as
///   word 0      draw counter within a substream
///   words 1..2  64-bit substream index
///   word 3      stream id
/// and the 64-bit key is the seed. Any (seed, stream_id, substream) triple can
/// therefore be positioned in O(1), which is what lets the estimator give every
/// sample its own substream and stay bitwise reproducible under any block size
/// or worker count.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed, std::uint32_t stream_id = 0,
                        std::uint64_t substream = 0) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }
  result_type operator()() noexcept { return next_u64(); }

  /// Fresh stream sharing seed and stream id, positioned at `index`.
  RandomStream substream(std::uint64_t index) const noexcept {
    return RandomStream(seed_, stream_id_, index);
  }

  std::uint64_t next_u64() noexcept;

  /// Uniform on the open interval (0, 1); never returns 0 or 1.
  double uniform() noexcept;

  /// Standard normal via Box-Muller; the second variate of each pair is cached.
  double normal() noexcept;
  void fill_normal(std::span<double> out) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint32_t stream_id() const noexcept { return stream_id_; }
  std::uint64_t substream_index() const noexcept { return substream_; }

 private:
  void refill() noexcept;

  std::uint64_t seed_;
  std::uint32_t stream_id_;
  std::uint64_t substream_;
  std::uint32_t counter_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int used_ = 4;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

/// Raw Philox4x32-10 bijection, exposed for known-answer tests.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key) noexcept;

}  // namespace aloe
