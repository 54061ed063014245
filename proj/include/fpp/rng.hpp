#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace fpp {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

// Philox4x32 with 10 rounds (Salmon et al., Random123).
PhiloxCounter philox4x32(PhiloxCounter counter, PhiloxKey key);

// 64-bit mix of a byte string, used to turn structured ids into counters.
std::uint64_t hash_bytes(std::span<const std::uint8_t> bytes, std::uint64_t salt = 0);

// Uniform in the open interval (0, 1) from 53 random bits.
double to_open_unit(std::uint64_t bits);

// Sequential stream: block i of stream s under a given seed is
// philox(counter = (i, s), key = seed), so streams never overlap.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();
  double uniform();                       // (0, 1)
  double exponential();                   // Exp(1)
  std::uint64_t below(std::uint64_t n);   // uniform on {0, ..., n-1}

 private:
  void refill();

  PhiloxKey key_{};
  std::uint64_t stream_ = 0;
  std::uint64_t block_ = 0;
  PhiloxCounter buffer_{};
  int used_ = 4;
};

// Seed for the i-th child of a parent seed; a pure function of both.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index);

}  // namespace fpp
