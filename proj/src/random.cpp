#include "fogcache/random.hpp"

#include <algorithm>

namespace fogcache {

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

KeyedStream::KeyedStream(std::uint64_t seed, std::string_view scope, std::uint64_t index)
    : key_(mix64(mix64(mix64(seed) ^ fnv1a64(scope)) ^ index)) {}

KeyedStream::result_type KeyedStream::operator()() {
  return mix64(key_ ^ mix64(counter_++));
}

double KeyedStream::uniform() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

std::uint64_t KeyedStream::below(std::uint64_t n) {
  // Lemire's multiply-shift; the bias for n << 2^64 is negligible here.
  const unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * n;
  return static_cast<std::uint64_t>(m >> 64);
}

std::size_t sample_cumulative(std::span<const double> cumulative, double u01) {
  const double target = u01 * cumulative.back();
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
  if (it == cumulative.end()) --it;
  return static_cast<std::size_t>(it - cumulative.begin());
}

}  // namespace fogcache
