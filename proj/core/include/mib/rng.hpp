#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace mib {

using Rng = std::mt19937_64;

// Stable seed for a named substream. Same (seed, stream) pair gives the same
// value on every platform and run.
std::uint64_t sub_seed(std::uint64_t seed, std::string_view stream);

// Uniform integer in [0, n), n > 0. Rejection sampling on the raw 64-bit
// stream; does not depend on standard-library distribution internals, which
// are implementation-defined.
std::uint64_t uniform_below(Rng& rng, std::uint64_t n);

template <class T>
void shuffle_in_place(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(v[i - 1], v[j]);
  }
}

// First k entries of a seeded permutation of 0..n-1. k == n yields a full
// shuffle.
std::vector<std::uint32_t> sample_ids(std::uint32_t n, std::uint32_t k, Rng& rng);

}  // namespace mib
