#include "mib/rng.hpp"

#include <numeric>

namespace mib {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace

std::uint64_t sub_seed(std::uint64_t seed, std::string_view stream) {
  return splitmix64(seed ^ splitmix64(fnv1a(stream)));
}

std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  // n == 0 would loop forever; that is a caller bug
  const std::uint64_t limit = ~0ULL - ~0ULL % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

std::vector<std::uint32_t> sample_ids(std::uint32_t n, std::uint32_t k, Rng& rng) {
  if (k > n) k = n;
  std::vector<std::uint32_t> ids(n);
  std::iota(ids.begin(), ids.end(), 0u);
  // partial Fisher-Yates: only the first k slots are needed
  for (std::uint32_t i = 0; i < k && i + 1 < n; ++i) {
    std::uint32_t j = i + static_cast<std::uint32_t>(uniform_below(rng, n - i));
    std::swap(ids[i], ids[j]);
  }
  ids.resize(k);
  return ids;
}

}  // namespace mib
