#pragma once

// Counter-based random numbers (Philox4x32-10) keyed by a 64-bit master seed
// and a 64-bit stream index. Every (seed, stream) pair yields an independent,
// bit-reproducible sequence regardless of thread scheduling.

#include <array>
#include <cstdint>

namespace wasb {

struct NoiseSeed {
  std::uint64_t master = 0;
  std::uint64_t stream = 0;

  friend bool operator==(const NoiseSeed&, const NoiseSeed&) = default;
};

/// One Philox4x32-10 block: counter (4 words) encrypted under key (2 words).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key) noexcept;

class CounterRng {
 public:
  explicit CounterRng(NoiseSeed seed) noexcept;
  CounterRng(std::uint64_t master, std::uint64_t stream) noexcept
      : CounterRng(NoiseSeed{master, stream}) {}

  std::uint32_t next_u32() noexcept;
  std::uint64_t next_u64() noexcept;

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform() noexcept;

  /// Standard normal via Box–Muller (pairs cached).
  double normal() noexcept;

  NoiseSeed seed() const noexcept { return seed_; }
  std::uint64_t blocks_used() const noexcept { return block_; }

 private:
  void refill() noexcept;

  NoiseSeed seed_;
  std::array<std::uint32_t, 2> key_{};
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int buffered_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace wasb
