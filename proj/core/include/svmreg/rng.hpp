#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace svmreg {

using Rng = std::mt19937_64;

/// Independent stream keyed by a tuple of integers, e.g. (seed, n, d, replication).
/// Equal keys give equal streams; the order of keys matters.
inline Rng make_stream(std::initializer_list<std::uint64_t> keys) {
  std::vector<std::uint32_t> words;
  words.reserve(2 * keys.size());
  for (std::uint64_t k : keys) {
    words.push_back(static_cast<std::uint32_t>(k & 0xffffffffu));
    words.push_back(static_cast<std::uint32_t>(k >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

}  // namespace svmreg
