#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace mib {

using RecordId = std::uint32_t;
inline constexpr RecordId kNoRecord = std::numeric_limits<RecordId>::max();

// One indexed string. `symbols` is the text decoded to unicode scalar values;
// every distance in the library runs on symbols, not on bytes.
struct Record {
  RecordId id = 0;
  std::string text;
  std::u32string symbols;
};

// Immutable, duplicate-free, densely numbered string collection. Ids are
// assigned in input order, starting at 0.
class Dataset {
 public:
  Dataset() = default;

  // Trims surrounding ASCII whitespace, drops empty lines and exact
  // duplicates (first occurrence wins). `max_records` caps the survivors.
  static Dataset from_lines(const std::vector<std::string>& lines,
                            std::optional<std::size_t> max_records = std::nullopt);

  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  const Record& record(RecordId id) const { return records_[id]; }
  const std::string& text(RecordId id) const { return records_[id].text; }
  const std::u32string& symbols(RecordId id) const { return records_[id].symbols; }
  const std::vector<Record>& records() const { return records_; }

 private:
  std::vector<Record> records_;
};

// Loads a newline-delimited UTF-8 word list. Throws IoError when the file
// cannot be read and EmptyDatasetError when nothing survives filtering.
Dataset load_dataset(const std::string& path,
                     std::optional<std::size_t> max_records = std::nullopt);

}  // namespace mib
