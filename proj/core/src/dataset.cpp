#include "mib/dataset.hpp"

#include <fstream>
#include <unordered_set>

#include "mib/errors.hpp"
#include "mib/unicode.hpp"

namespace mib {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r' || s[b] == '\n'))
    ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r' ||
                   s[e - 1] == '\n'))
    --e;
  return s.substr(b, e - b);
}

}  // namespace

Dataset Dataset::from_lines(const std::vector<std::string>& lines,
                            std::optional<std::size_t> max_records) {
  Dataset ds;
  std::unordered_set<std::string> seen;
  for (const auto& line : lines) {
    if (max_records && ds.records_.size() >= *max_records) break;
    std::string word = trim(line);
    if (word.empty()) continue;
    if (!seen.insert(word).second) continue;
    Record rec;
    rec.id = static_cast<RecordId>(ds.records_.size());
    rec.symbols = decode_utf8(word);
    rec.text = std::move(word);
    ds.records_.push_back(std::move(rec));
  }
  return ds;
}

Dataset load_dataset(const std::string& path,
                     std::optional<std::size_t> max_records) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read dataset: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  if (in.bad()) throw IoError("read failure: " + path);
  Dataset ds = Dataset::from_lines(lines, max_records);
  if (ds.empty()) throw EmptyDatasetError("no records survive filtering: " + path);
  return ds;
}

}  // namespace mib
