#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string_view>

namespace fogcache {

// 64-bit FNV-1a; used to turn scope names into stream keys.
std::uint64_t fnv1a64(std::string_view s);

// SplitMix64 finaliser.
std::uint64_t mix64(std::uint64_t x);

// Counter-based random stream. The whole sequence is a function of
// (seed, scope, index), so draws for request i do not depend on how many
// draws were made for any other request or on evaluation order.
//
// Satisfies UniformRandomBitGenerator.
class KeyedStream {
 public:
  using result_type = std::uint64_t;

  KeyedStream(std::uint64_t seed, std::string_view scope, std::uint64_t index);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  // Uniform in [0, 1) with 53 bits of precision.
  double uniform();

  // Uniform integer in [0, n). Requires n > 0.
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Inverse-CDF sampling from a cumulative weight table (non-decreasing,
// last entry = total weight > 0). Returns the selected index.
std::size_t sample_cumulative(std::span<const double> cumulative, double u01);

}  // namespace fogcache
