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

// AVA-style annotation files: comma-separated text without quoting, so
// fields may not contain commas.
//
//   ground truth: video_id,timestamp,x1,y1,x2,y2,action_id,person_id
//   detections:   video_id,timestamp,x1,y1,x2,y2,action_id,score[,answer]
//   vocabulary:   action_id,name            (header row optional)
//
// Parsing is a single streaming pass. Records are handed to a sink as soon
// as a line is validated, so callers decide what to retain.

#ifndef AVAEVAL_AVA_DATA_H_
#define AVAEVAL_AVA_DATA_H_

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace avaeval {

using ActionId = std::int32_t;
using Timestamp = std::int32_t;

// Normalized axis-aligned rectangle, (x1,y1) top-left, (x2,y2) bottom-right.
// Ordering is lexicographic over (x1, y1, x2, y2).
struct BoundingBox {
  double x1 = 0.0;
  double y1 = 0.0;
  double x2 = 0.0;
  double y2 = 0.0;

  double Width() const { return x2 - x1; }
  double Height() const { return y2 - y1; }
  double Area() const { return Width() * Height(); }

  // 0 <= x1 < x2 <= 1 and 0 <= y1 < y2 <= 1.
  bool IsValid() const;

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
  friend auto operator<=>(const BoundingBox&, const BoundingBox&) = default;
};

struct ActionClass {
  ActionId id = 0;
  std::string name;

  friend bool operator==(const ActionClass&, const ActionClass&) = default;
};

// Set of action classes with unique ids and unique names, iterated in
// ascending id order.
class ActionVocabulary {
 public:
  ActionVocabulary() = default;

  // Throws std::invalid_argument on a non-positive id, an empty name, a name
  // containing ',' or a line break, or a duplicate id or name.
  static ActionVocabulary FromClasses(std::vector<ActionClass> classes);

  const std::vector<ActionClass>& classes() const { return classes_; }
  std::size_t size() const { return classes_.size(); }
  bool empty() const { return classes_.empty(); }

  bool Contains(ActionId id) const { return by_id_.contains(id); }
  const ActionClass* Find(ActionId id) const;
  const ActionClass* FindByName(std::string_view name) const;

 private:
  std::vector<ActionClass> classes_;
  std::unordered_map<ActionId, std::size_t> by_id_;
  std::map<std::string, std::size_t, std::less<>> by_name_;
};

struct GroundTruthRecord {
  std::string video_id;
  Timestamp timestamp_s = 0;
  BoundingBox box;
  ActionId action_id = 0;
  std::int32_t person_id = 0;

  friend bool operator==(const GroundTruthRecord&,
                         const GroundTruthRecord&) = default;
};

struct DetectionRecord {
  std::string video_id;
  Timestamp timestamp_s = 0;
  BoundingBox box;
  ActionId action_id = 0;
  double score = 0.0;
  std::optional<std::string> answer_text;

  friend bool operator==(const DetectionRecord&,
                         const DetectionRecord&) = default;
};

enum class Strictness { kStrict, kLenient };

enum class RejectReason : int {
  kMalformedField = 0,
  kCoordinateOutOfRange,
  kDegenerateBox,
  kUnknownActionId,
  kScoreOutOfRange,
  kDuplicate,
};
inline constexpr std::size_t kNumRejectReasons = 6;

std::string_view RejectReasonName(RejectReason reason);

struct RowIssue {
  std::int64_t line = 0;
  RejectReason reason = RejectReason::kMalformedField;
  std::string detail;

  friend bool operator==(const RowIssue&, const RowIssue&) = default;
};

// Outcome of one parse. Blank lines are not rows and are not counted.
// Invariant: parsed_rows + rejected_rows() == total_rows.
struct ValidationReport {
  static constexpr std::size_t kMaxSamples = 10;

  std::int64_t total_rows = 0;
  std::int64_t parsed_rows = 0;
  std::array<std::int64_t, kNumRejectReasons> rejected_by_reason{};
  std::map<ActionId, std::int64_t> per_class;
  // First kMaxSamples rejected rows, in input order.
  std::vector<RowIssue> samples;

  std::int64_t rejected_rows() const;
  std::int64_t rejected(RejectReason reason) const {
    return rejected_by_reason[static_cast<std::size_t>(reason)];
  }

  // Reclassifies rows that parsed cleanly but were dropped as exact
  // duplicates during indexing.
  void AbsorbDuplicates(const std::map<ActionId, std::int64_t>& per_class_dups);

  friend bool operator==(const ValidationReport&,
                         const ValidationReport&) = default;
};

// A located input error: strict-mode row rejections and vocabulary errors.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::int64_t line, std::string message,
             std::optional<RejectReason> reason = std::nullopt);

  std::int64_t line() const { return line_; }
  const std::optional<RejectReason>& reason() const { return reason_; }

 private:
  std::int64_t line_;
  std::optional<RejectReason> reason_;
};

using GroundTruthSink = std::function<void(GroundTruthRecord&&)>;
using DetectionSink = std::function<void(DetectionRecord&&)>;

// Streams validated rows into `sink` in input order. In lenient mode invalid
// rows are counted and skipped; in strict mode the first invalid row throws
// ParseError. Stream failures throw std::ios_base::failure.
ValidationReport ParseGroundTruth(std::istream& in,
                                  const ActionVocabulary& vocab,
                                  Strictness strictness,
                                  const GroundTruthSink& sink);
ValidationReport ParseDetections(std::istream& in,
                                 const ActionVocabulary& vocab,
                                 Strictness strictness,
                                 const DetectionSink& sink);

// Collecting conveniences.
std::vector<GroundTruthRecord> ReadGroundTruth(
    std::istream& in, const ActionVocabulary& vocab, Strictness strictness,
    ValidationReport* report = nullptr);
std::vector<DetectionRecord> ReadDetections(std::istream& in,
                                            const ActionVocabulary& vocab,
                                            Strictness strictness,
                                            ValidationReport* report = nullptr);

// Throws ParseError on an empty input, malformed rows, or duplicate ids or
// names. A first row whose id field is not numeric is treated as a header.
ActionVocabulary ParseVocabulary(std::istream& in);

// Coordinates and scores are written with 6 decimals and timestamps are
// zero-padded to 4 digits. Each row ends with '\n'. Throws
// std::invalid_argument when a string field would break the row format.
std::string FormatGroundTruth(const GroundTruthRecord& record);
std::string FormatDetection(const DetectionRecord& record);
void SerializeGroundTruth(std::span<const GroundTruthRecord> records,
                          std::ostream& out);
void SerializeDetections(std::span<const DetectionRecord> records,
                         std::ostream& out);
void SerializeVocabulary(const ActionVocabulary& vocab, std::ostream& out);

}  // namespace avaeval

#endif  // AVAEVAL_AVA_DATA_H_
