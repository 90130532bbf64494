#include "mib/distance.hpp"

#include <algorithm>
#include <vector>

#include "mib/unicode.hpp"

namespace mib {

CharBag::CharBag(std::u32string_view s) : size_(s.size()) {
  for (char32_t c : s) ++counts_[c];
}

int CharBag::count(char32_t c) const {
  auto it = counts_.find(c);
  return it == counts_.end() ? 0 : it->second;
}

int edit_distance(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  const std::size_t m = a.size(), n = b.size();
  if (n == 0) return static_cast<int>(m);

  // one row plus the diagonal corner; row[j] holds D(i, j) as j advances
  std::vector<int> row(n + 1);
  for (std::size_t j = 0; j <= n; ++j) row[j] = static_cast<int>(j);

  for (std::size_t i = 1; i <= m; ++i) {
    int diag = row[0];  // D(i-1, 0)
    row[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= n; ++j) {
      int subst = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
      diag = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, subst});
    }
  }
  return row[n];
}

int edit_distance(std::string_view a_utf8, std::string_view b_utf8) {
  return edit_distance(decode_utf8(a_utf8), decode_utf8(b_utf8));
}

int bag_distance(std::u32string_view a, std::u32string_view b) {
  // signed multiplicity deltas; positive = surplus in a, negative = in b
  std::unordered_map<char32_t, int> delta;
  for (char32_t c : a) ++delta[c];
  for (char32_t c : b) --delta[c];
  int surplus_a = 0, surplus_b = 0;
  for (const auto& [c, d] : delta) {
    if (d > 0)
      surplus_a += d;
    else
      surplus_b -= d;
  }
  return std::max(surplus_a, surplus_b);
}

int bag_distance(std::string_view a_utf8, std::string_view b_utf8) {
  return bag_distance(decode_utf8(a_utf8), decode_utf8(b_utf8));
}

bool filtered_verify(std::u32string_view q, std::u32string_view c, int e,
                     DistanceCounter& counter, bool filter_on) {
  if (filter_on) {
    ++counter.filter_evals;
    if (bag_distance(q, c) > e) return false;
  }
  ++counter.primary_evals;
  return edit_distance(q, c) <= e;
}

bool filtered_verify(std::string_view q_utf8, std::string_view c_utf8, int e,
                     DistanceCounter& counter, bool filter_on) {
  return filtered_verify(decode_utf8(q_utf8), decode_utf8(c_utf8), e, counter,
                         filter_on);
}

}  // namespace mib
