#pragma once

#include <string_view>
#include <unordered_map>

#include "mib/counter.hpp"

namespace mib {

// Character multiset of a string. The multiplicity sum always equals the
// length of the source string.
class CharBag {
 public:
  CharBag() = default;
  explicit CharBag(std::u32string_view s);

  std::size_t size() const { return size_; }
  int count(char32_t c) const;
  const std::unordered_map<char32_t, int>& counts() const { return counts_; }

 private:
  std::unordered_map<char32_t, int> counts_;
  std::size_t size_ = 0;
};

// Levenshtein distance with unit-cost insert, delete and substitute. No
// transposition. Symmetric, zero iff equal, obeys the triangle inequality.
int edit_distance(std::u32string_view a, std::u32string_view b);
int edit_distance(std::string_view a_utf8, std::string_view b_utf8);

// max(|a - b|, |b - a|) over character multisets: the larger one-sided
// multiset difference. Cheap lower bound on edit_distance.
int bag_distance(std::u32string_view a, std::u32string_view b);
int bag_distance(std::string_view a_utf8, std::string_view b_utf8);

// One counted, unmemoized edit-distance evaluation. Build and insert paths
// use this; the memo in DistanceCounter is meaningful only for distances
// from one fixed query.
inline int counted_edit_distance(std::u32string_view a, std::u32string_view b,
                                 DistanceCounter& counter) {
  ++counter.primary_evals;
  return edit_distance(a, b);
}

// Membership test edit_distance(q, c) <= e. With filter_on, a bag-distance
// check runs first (one filter eval); the edit distance (one primary eval)
// runs only if the bag distance does not already exceed e. The result is
// identical with the filter on or off.
bool filtered_verify(std::u32string_view q, std::u32string_view c, int e,
                     DistanceCounter& counter, bool filter_on);
bool filtered_verify(std::string_view q_utf8, std::string_view c_utf8, int e,
                     DistanceCounter& counter, bool filter_on);

}  // namespace mib
