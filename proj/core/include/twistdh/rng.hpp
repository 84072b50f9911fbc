#pragma once
// Counter-based random number generation (Philox 4x32, 10 rounds).
//
// Every consumer of randomness in this project draws from a PhiloxStream,
// which is fully determined by (seed, stream index): there is no global RNG
// state, parallel workers get disjoint streams from the same seed, and a
// fixed seed reproduces results bit-for-bit regardless of how many other
// streams were consumed elsewhere.

#include <array>
#include <cstdint>

namespace twistdh {

// One 128-bit block of the Philox 4x32-10 bijection.  Reference vectors for
// this exact function are frozen in the test suite.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

class PhiloxStream {
 public:
  // Key is the seed; counter words 2..3 carry the stream index, words 0..1
  // the running block index within the stream.
  PhiloxStream(std::uint64_t seed, std::uint64_t stream);

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  // Uniform on [0, 1), 53-bit resolution.
  double uniform();

  // Standard normal via Box-Muller (the partner variate is cached).
  double gaussian();

  // UniformRandomBitGenerator interface.
  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return next_u64(); }

 private:
  void refill();

  std::array<std::uint32_t, 2> key_{};
  std::array<std::uint32_t, 4> counter_{};
  std::array<std::uint32_t, 4> block_{};
  int pos_ = 4;  // exhausted; first draw refills
  double cached_gaussian_ = 0.0;
  bool has_cached_gaussian_ = false;
};

}  // namespace twistdh
