#include "twistdh/rng.hpp"

#include <cmath>

namespace twistdh {

namespace {
constexpr std::uint32_t kMult0 = 0xD2511F53u;
constexpr std::uint32_t kMult1 = 0xCD9E8D57u;
constexpr std::uint32_t kBump0 = 0x9E3779B9u;  // golden ratio fraction
constexpr std::uint32_t kBump1 = 0xBB67AE85u;  // sqrt(3)-1 fraction

inline std::array<std::uint32_t, 4> round_once(
    const std::array<std::uint32_t, 4>& c,
    const std::array<std::uint32_t, 2>& k) {
  const std::uint64_t p0 = std::uint64_t{kMult0} * c[0];
  const std::uint64_t p1 = std::uint64_t{kMult1} * c[2];
  return {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0],
          static_cast<std::uint32_t>(p1),
          static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1],
          static_cast<std::uint32_t>(p0)};
}
}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) {
  for (int i = 0; i < 10; ++i) {
    if (i != 0) {
      key[0] += kBump0;
      key[1] += kBump1;
    }
    counter = round_once(counter, key);
  }
  return counter;
}

PhiloxStream::PhiloxStream(std::uint64_t seed, std::uint64_t stream) {
  key_ = {static_cast<std::uint32_t>(seed),
          static_cast<std::uint32_t>(seed >> 32)};
  counter_ = {0, 0, static_cast<std::uint32_t>(stream),
              static_cast<std::uint32_t>(stream >> 32)};
}

void PhiloxStream::refill() {
  block_ = philox4x32(counter_, key_);
  pos_ = 0;
  if (++counter_[0] == 0) ++counter_[1];  // 64-bit block index
}

std::uint32_t PhiloxStream::next_u32() {
  if (pos_ == 4) refill();
  return block_[pos_++];
}

std::uint64_t PhiloxStream::next_u64() {
  const std::uint64_t lo = next_u32();
  const std::uint64_t hi = next_u32();
  return lo | (hi << 32);
}

double PhiloxStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double PhiloxStream::gaussian() {
  if (has_cached_gaussian_) {
    has_cached_gaussian_ = false;
    return cached_gaussian_;
  }
  // u1 in (0, 1] keeps the log finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 6.283185307179586476925286766559 * u2;
  cached_gaussian_ = r * std::sin(angle);
  has_cached_gaussian_ = true;
  return r * std::cos(angle);
}

}  // namespace twistdh
