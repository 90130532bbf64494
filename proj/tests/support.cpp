#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <iterator>
#include <stdexcept>
#include <unordered_set>

namespace testsup {

int edit_recursive(std::u32string_view a, std::u32string_view b) {
  if (a.empty()) return static_cast<int>(b.size());
  if (b.empty()) return static_cast<int>(a.size());
  int subst = edit_recursive(a.substr(1), b.substr(1)) +
              (a.front() == b.front() ? 0 : 1);
  int del = edit_recursive(a.substr(1), b) + 1;
  int ins = edit_recursive(a, b.substr(1)) + 1;
  return std::min({subst, del, ins});
}

int bag_sorted(std::u32string_view a, std::u32string_view b) {
  std::vector<char32_t> x(a.begin(), a.end());
  std::vector<char32_t> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  std::vector<char32_t> xy, yx;
  std::set_difference(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(xy));
  std::set_difference(y.begin(), y.end(), x.begin(), x.end(), std::back_inserter(yx));
  return static_cast<int>(std::max(xy.size(), yx.size()));
}

std::u32string u32(std::string_view utf8) { return mib::decode_utf8(utf8); }

std::string random_word(mib::Rng& rng, int alphabet, int min_len, int max_len) {
  std::size_t len = static_cast<std::size_t>(min_len) +
                    static_cast<std::size_t>(mib::uniform_below(
                        rng, static_cast<std::uint64_t>(max_len - min_len + 1)));
  std::string word;
  word.reserve(len);
  for (std::size_t i = 0; i < len; ++i)
    word.push_back(static_cast<char>(
        'a' + static_cast<char>(mib::uniform_below(
                  rng, static_cast<std::uint64_t>(alphabet)))));
  return word;
}

mib::Dataset random_dataset(std::size_t n, int alphabet, int min_len,
                            int max_len, std::uint64_t seed) {
  mib::Rng rng(mib::sub_seed(seed, "dataset"));
  std::unordered_set<std::string> seen;
  std::vector<std::string> words;
  std::size_t attempts = 0;
  while (words.size() < n) {
    if (++attempts > n * 1000)
      throw std::runtime_error("word space too small for requested dataset");
    std::string w = random_word(rng, alphabet, min_len, max_len);
    if (seen.insert(w).second) words.push_back(std::move(w));
  }
  return mib::Dataset::from_lines(words);
}

std::vector<mib::RecordId> brute_matches(const mib::Dataset& ds,
                                         const std::string& query, int radius) {
  std::u32string q = mib::decode_utf8(query);
  std::vector<mib::RecordId> out;
  for (mib::RecordId id = 0; id < static_cast<mib::RecordId>(ds.size()); ++id) {
    if (mib::edit_distance(q, ds.symbols(id)) <= radius) out.push_back(id);
  }
  return out;
}

void check_matches_oracle(const mib::Index& index, const mib::Dataset& ds,
                          std::uint64_t seed, int member_queries,
                          int random_queries) {
  mib::Rng rng(mib::sub_seed(seed, "oracle-harness"));

  std::vector<std::string> queries;
  for (int i = 0; i < member_queries; ++i)
    queries.push_back(
        ds.text(static_cast<mib::RecordId>(mib::uniform_below(rng, ds.size()))));
  for (int i = 0; i < random_queries; ++i)
    queries.push_back(random_word(rng, 5, 1, 10));

  for (const std::string& q : queries) {
    for (int e : {0, 1, 2, 3, 5}) {
      auto expected = brute_matches(ds, q, e);
      for (bool filter_on : {false, true}) {
        mib::DistanceCounter counter;
        counter.use_bag_filter = filter_on;
        mib::QueryResult res = index.range_search(mib::RangeQuery{q, e}, counter);
        CAPTURE(index.name());
        CAPTURE(q);
        CAPTURE(e);
        CAPTURE(filter_on);
        CHECK(res.matches == expected);
        CHECK(std::is_sorted(res.matches.begin(), res.matches.end()));
        CHECK(std::adjacent_find(res.matches.begin(), res.matches.end()) ==
              res.matches.end());
        CHECK(res.primary_evals <= ds.size());
      }
    }
  }
}

}  // namespace testsup
