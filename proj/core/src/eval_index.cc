// Copyright 2026 The avaeval Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "avaeval/eval_index.h"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <tuple>

namespace avaeval {

namespace {

template <typename P>
auto BucketOf(const P& p) {
  return std::tie(p.action, p.video, p.timestamp);
}

}  // namespace

void EvalIndex::Builder::Add(const GroundTruthRecord& record) {
  if (added_ >= std::numeric_limits<std::uint32_t>::max()) {
    throw std::length_error("too many ground-truth records for one index");
  }
  auto [it, inserted] = video_refs_.try_emplace(
      record.video_id, static_cast<VideoRef>(videos_.size()));
  if (inserted) videos_.push_back(record.video_id);
  pending_.push_back(Pending{
      record.action_id, it->second, record.timestamp_s,
      IndexedBox{record.box, record.person_id,
                 static_cast<std::uint32_t>(added_++)}});
  if (pending_.size() >= compact_at_) {
    Compact();
    compact_at_ = std::max(kMinCompaction, 2 * pending_.size());
  }
}

void EvalIndex::Builder::Compact() {
  // Group exact duplicates next to each other, first occurrence leading.
  std::sort(pending_.begin(), pending_.end(),
            [](const Pending& a, const Pending& b) {
              if (BucketOf(a) != BucketOf(b)) return BucketOf(a) < BucketOf(b);
              if (a.box.box != b.box.box) return a.box.box < b.box.box;
              return a.box.ordinal < b.box.ordinal;
            });
  auto last = std::unique(pending_.begin(), pending_.end(),
                          [this](const Pending& a, const Pending& b) {
                            const bool dup = BucketOf(a) == BucketOf(b) &&
                                             a.box.box == b.box.box;
                            if (dup) {
                              ++duplicates_;
                              ++duplicates_per_class_[a.action];
                            }
                            return dup;
                          });
  pending_.erase(last, pending_.end());
}

EvalIndex EvalIndex::Builder::Build() && {
  auto key = [](const Pending& p) { return BucketOf(p); };
  Compact();

  EvalIndex index;
  index.duplicates_ = duplicates_;
  index.duplicates_per_class_ = std::move(duplicates_per_class_);

  std::sort(pending_.begin(), pending_.end(),
            [&key](const Pending& a, const Pending& b) {
              if (key(a) != key(b)) return key(a) < key(b);
              return a.box.ordinal < b.box.ordinal;
            });

  index.boxes_.reserve(pending_.size());
  for (std::size_t i = 0; i < pending_.size(); ++i) {
    const Pending& p = pending_[i];
    if (i == 0 || key(p) != key(pending_[i - 1])) {
      const auto pos = static_cast<std::uint32_t>(i);
      index.buckets_.push_back(BucketKey{p.action, p.video, p.timestamp, pos, pos});
    }
    index.buckets_.back().end = static_cast<std::uint32_t>(i + 1);
    Range& range = index.class_ranges_[p.action];
    if (range.empty()) range.begin = i;
    range.end = i + 1;
    ++index.gt_count_per_class_[p.action];
    index.boxes_.push_back(p.box);
  }
  index.buckets_.shrink_to_fit();
  index.videos_ = std::move(videos_);
  index.video_refs_ = std::move(video_refs_);
  pending_.clear();
  pending_.shrink_to_fit();
  return index;
}

std::optional<EvalIndex::VideoRef> EvalIndex::FindVideo(
    std::string_view video_id) const {
  auto it = video_refs_.find(std::string(video_id));
  if (it == video_refs_.end()) return std::nullopt;
  return it->second;
}

EvalIndex::Range EvalIndex::ClassRange(ActionId action) const {
  auto it = class_ranges_.find(action);
  return it == class_ranges_.end() ? Range{} : it->second;
}

EvalIndex::Range EvalIndex::BucketRange(ActionId action, VideoRef video,
                                        Timestamp timestamp) const {
  const auto target = std::make_tuple(action, video, timestamp);
  auto it = std::lower_bound(
      buckets_.begin(), buckets_.end(), target,
      [](const BucketKey& b, const std::tuple<ActionId, VideoRef, Timestamp>& t) {
        return std::tie(b.action, b.video, b.timestamp) < t;
      });
  if (it == buckets_.end() ||
      std::tie(it->action, it->video, it->timestamp) != target) {
    return Range{};
  }
  return Range{it->begin, it->end};
}

std::span<const IndexedBox> EvalIndex::Lookup(ActionId action,
                                              std::string_view video_id,
                                              Timestamp timestamp) const {
  const auto video = FindVideo(video_id);
  if (!video) return {};
  const Range r = BucketRange(action, *video, timestamp);
  return std::span<const IndexedBox>(boxes_).subspan(r.begin, r.size());
}

std::vector<GroundTruthRecord> EvalIndex::Bucket(ActionId action,
                                                 std::string_view video_id,
                                                 Timestamp timestamp) const {
  std::vector<GroundTruthRecord> out;
  for (const IndexedBox& b : Lookup(action, video_id, timestamp)) {
    out.push_back(GroundTruthRecord{std::string(video_id), timestamp, b.box,
                                    action, b.person_id});
  }
  return out;
}

void EvalIndex::ForEachBucket(
    const std::function<void(ActionId, const std::string&, Timestamp,
                             std::span<const IndexedBox>)>& fn) const {
  const std::span<const IndexedBox> all(boxes_);
  for (const BucketKey& b : buckets_) {
    fn(b.action, videos_[b.video], b.timestamp,
       all.subspan(b.begin, b.end - b.begin));
  }
}

std::int64_t EvalIndex::gt_count(ActionId action) const {
  auto it = gt_count_per_class_.find(action);
  return it == gt_count_per_class_.end() ? 0 : it->second;
}

std::size_t EvalIndex::MemoryBytes() const {
  std::size_t bytes = boxes_.capacity() * sizeof(IndexedBox) +
                      buckets_.capacity() * sizeof(BucketKey);
  for (const auto& v : videos_) bytes += sizeof(std::string) + v.capacity();
  bytes += video_refs_.size() * (sizeof(std::string) + sizeof(VideoRef) + 32);
  return bytes;
}

EvalIndex BuildIndex(std::span<const GroundTruthRecord> records) {
  EvalIndex::Builder builder;
  for (const auto& r : records) builder.Add(r);
  return std::move(builder).Build();
}

}  // namespace avaeval
