#pragma once

#include <cstdint>
#include <random>

namespace adversynth {

// splitmix64 finalizer; used to derive independent substreams from one seed.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d4be495ca97b8fULL;
  return x ^ (x >> 31);
}

// Stream `index` of a master seed.  Every randomized component draws from
// its own stream, so runs are reproducible and substreams are order
// independent (e.g. game i always sees the same randomness regardless of
// how long game i-1 ran).
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(mix64(mix64(seed) ^ mix64(index + 1)));
}

inline std::uint64_t pick_index(std::mt19937_64& rng, std::uint64_t n) {
  std::uniform_int_distribution<std::uint64_t> d(0, n - 1);
  return d(rng);
}

}  // namespace adversynth
