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

#ifndef AVAEVAL_EVAL_INDEX_H_
#define AVAEVAL_EVAL_INDEX_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "avaeval/ava_data.h"

namespace avaeval {

// One ground-truth box inside a keyframe bucket. `ordinal` is the record's
// position in the original input and orders boxes within a bucket.
struct IndexedBox {
  BoundingBox box;
  std::int32_t person_id = 0;
  std::uint32_t ordinal = 0;

  friend bool operator==(const IndexedBox&, const IndexedBox&) = default;
};

// Immutable ground truth grouped by (action_id, video_id, timestamp_s).
// Exact duplicates, i.e. rows equal in (video_id, timestamp_s, box,
// action_id), keep only their first occurrence and are counted.
//
// Boxes live in one flat array sorted by (action, video, timestamp,
// ordinal), so every class occupies a contiguous range and every bucket a
// contiguous sub-range of it.
class EvalIndex {
 public:
  using VideoRef = std::uint32_t;

  struct Range {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t size() const { return end - begin; }
    bool empty() const { return begin == end; }
  };

  // Duplicates are folded away periodically while rows arrive, so the
  // builder holds at most about twice the distinct rows at any time.
  class Builder {
   public:
    void Add(const GroundTruthRecord& record);
    EvalIndex Build() &&;

   private:
    static constexpr std::size_t kMinCompaction = std::size_t{1} << 16;

    struct Pending {
      ActionId action;
      VideoRef video;
      Timestamp timestamp;
      IndexedBox box;
    };

    void Compact();

    std::vector<std::string> videos_;
    std::unordered_map<std::string, VideoRef> video_refs_;
    std::vector<Pending> pending_;
    std::uint64_t added_ = 0;
    std::size_t compact_at_ = kMinCompaction;
    std::map<ActionId, std::int64_t> duplicates_per_class_;
    std::int64_t duplicates_ = 0;
  };

  EvalIndex() = default;

  std::optional<VideoRef> FindVideo(std::string_view video_id) const;
  const std::string& video_name(VideoRef ref) const { return videos_[ref]; }
  std::size_t num_videos() const { return videos_.size(); }

  // Entries of one class, or of one keyframe bucket, as positions into
  // entries().
  Range ClassRange(ActionId action) const;
  Range BucketRange(ActionId action, VideoRef video, Timestamp timestamp) const;

  std::span<const IndexedBox> Lookup(ActionId action, std::string_view video_id,
                                     Timestamp timestamp) const;
  std::span<const IndexedBox> entries() const { return boxes_; }

  // Bucket contents as full records, in input order.
  std::vector<GroundTruthRecord> Bucket(ActionId action,
                                        std::string_view video_id,
                                        Timestamp timestamp) const;

  void ForEachBucket(const std::function<void(ActionId, const std::string&,
                                              Timestamp,
                                              std::span<const IndexedBox>)>& fn)
      const;

  std::int64_t gt_count(ActionId action) const;
  const std::map<ActionId, std::int64_t>& gt_count_per_class() const {
    return gt_count_per_class_;
  }
  std::int64_t total_records() const {
    return static_cast<std::int64_t>(boxes_.size());
  }
  std::int64_t duplicates() const { return duplicates_; }
  const std::map<ActionId, std::int64_t>& duplicates_per_class() const {
    return duplicates_per_class_;
  }
  std::size_t num_buckets() const { return buckets_.size(); }

  // Approximate heap footprint.
  std::size_t MemoryBytes() const;

 private:
  struct BucketKey {
    ActionId action;
    VideoRef video;
    Timestamp timestamp;
    std::uint32_t begin;
    std::uint32_t end;
  };

  std::vector<std::string> videos_;
  std::unordered_map<std::string, VideoRef> video_refs_;
  std::vector<IndexedBox> boxes_;
  std::vector<BucketKey> buckets_;
  std::map<ActionId, Range> class_ranges_;
  std::map<ActionId, std::int64_t> gt_count_per_class_;
  std::map<ActionId, std::int64_t> duplicates_per_class_;
  std::int64_t duplicates_ = 0;
};

EvalIndex BuildIndex(std::span<const GroundTruthRecord> records);

}  // namespace avaeval

#endif  // AVAEVAL_EVAL_INDEX_H_
