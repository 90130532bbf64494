#include "mib/index.hpp"

#include <algorithm>

#include "mib/errors.hpp"
#include "mib/unicode.hpp"

namespace mib {

QueryContext::QueryContext(const Dataset& ds, const RangeQuery& query,
                           DistanceCounter& counter)
    : dataset_(&ds),
      counter_(&counter),
      query_(decode_utf8(query.text)),
      radius_(query.radius) {
  if (radius_ < 0) throw ConfigError("negative query radius");
  counter_->reset();
}

int QueryContext::distance_to(RecordId id) {
  if (counter_->memoize) {
    auto it = counter_->memo.find(id);
    if (it != counter_->memo.end()) return it->second;
  }
  int d = edit_distance(query_, dataset_->symbols(id));
  ++counter_->primary_evals;
  if (counter_->memoize) counter_->memo.emplace(id, d);
  return d;
}

bool QueryContext::verify(RecordId id) {
  if (counter_->memoize) {
    auto it = counter_->memo.find(id);
    if (it != counter_->memo.end()) return it->second <= radius_;
  }
  if (counter_->use_bag_filter) {
    ++counter_->filter_evals;
    if (bag_distance(query_, dataset_->symbols(id)) > radius_) return false;
  }
  int d = edit_distance(query_, dataset_->symbols(id));
  ++counter_->primary_evals;
  if (counter_->memoize) counter_->memo.emplace(id, d);
  return d <= radius_;
}

QueryResult QueryContext::finish() {
  std::sort(matches_.begin(), matches_.end());
  matches_.erase(std::unique(matches_.begin(), matches_.end()), matches_.end());
  QueryResult res;
  res.matches = std::move(matches_);
  res.primary_evals = counter_->primary_evals;
  res.filter_evals = counter_->filter_evals;
  return res;
}

QueryResult linear_scan(const Dataset& ds, const RangeQuery& query,
                        DistanceCounter& counter) {
  QueryContext ctx(ds, query, counter);
  const RecordId n = static_cast<RecordId>(ds.size());
  for (RecordId id = 0; id < n; ++id) {
    if (ctx.distance_to(id) <= ctx.radius()) ctx.add_match(id);
  }
  return ctx.finish();
}

QueryResult LinearScan::range_search(const RangeQuery& query,
                                     DistanceCounter& counter) const {
  QueryContext ctx(*ds_, query, counter);
  const RecordId n = static_cast<RecordId>(ds_->size());
  for (RecordId id = 0; id < n; ++id) ctx.collect_if_match(id);
  return ctx.finish();
}

}  // namespace mib
