#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mib/mib.hpp"

// Shared helpers and independent oracles for the test suites. The oracles
// deliberately take different routes than the library: the edit oracle is the
// plain recursive definition, the bag oracle runs on sorted multisets.
namespace testsup {

// Minimum of insert/delete/substitute applied to the recursive definition.
// Exponential; keep inputs short.
int edit_recursive(std::u32string_view a, std::u32string_view b);

// Multiset difference sizes via sorted ranges and set_difference.
int bag_sorted(std::u32string_view a, std::u32string_view b);

std::u32string u32(std::string_view utf8);

// Uniform word over the first `alphabet` lowercase letters, length uniform
// in [min_len, max_len].
std::string random_word(mib::Rng& rng, int alphabet, int min_len, int max_len);

// n distinct random words as a dataset.
mib::Dataset random_dataset(std::size_t n, int alphabet, int min_len,
                            int max_len, std::uint64_t seed);

// Direct scan without any counter plumbing.
std::vector<mib::RecordId> brute_matches(const mib::Dataset& ds,
                                         const std::string& query, int radius);

// Exercises an index against the linear scan: member queries, outsider
// queries, radii 0..5, bag filter off and on. Checks match equality, sorted
// uniqueness and the primary_evals <= n bound. Reports per-case context via
// doctest on failure.
void check_matches_oracle(const mib::Index& index, const mib::Dataset& ds,
                          std::uint64_t seed, int member_queries = 8,
                          int random_queries = 8);

}  // namespace testsup
