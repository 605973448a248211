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

// Frame-level detection evaluation in the PASCAL VOC style. Detections of
// one class are ranked by score and greedily matched to ground truth inside
// their own keyframe; the precision/recall curve gives average precision. Mean AP covers the classes that have ground truth.

#ifndef AVAEVAL_METRICS_H_
#define AVAEVAL_METRICS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "avaeval/ava_data.h"
#include "avaeval/eval_index.h"

namespace avaeval {

enum class Interpolation { kAllPoint, kElevenPoint };

std::string_view InterpolationName(Interpolation mode);
std::optional<Interpolation> ParseInterpolation(std::string_view name);

struct EvalConfig {
  // A detection is a true positive when IoU >= iou_threshold.
  double iou_threshold = 0.5;
  Interpolation interpolation = Interpolation::kAllPoint;
  // Detections scoring below the floor are dropped before ranking.
  double score_floor = 0.0;
  bool retain_curves = false;
  // Worker threads for per-class evaluation. Does not affect results.
  int num_threads = 1;

  // Throws std::invalid_argument unless 0 < iou_threshold <= 1,
  // 0 <= score_floor <= 1 and num_threads >= 1.
  void Validate() const;
};

// Intersection over union. Exactly 0 for disjoint interiors and exactly 1
// for identical boxes.
double Iou(const BoundingBox& a, const BoundingBox& b);

struct MatchedGroundTruth {
  std::uint32_t ordinal = 0;
  BoundingBox box;
  std::int32_t person_id = 0;
  double iou = 0.0;

  friend bool operator==(const MatchedGroundTruth&,
                         const MatchedGroundTruth&) = default;
};

struct LabeledDetection {
  DetectionRecord detection;
  bool is_tp = false;
  std::optional<MatchedGroundTruth> matched_gt;
  // 1-based position in the class-wide ranking.
  std::int64_t rank = 0;
};

struct PRPoint {
  double recall = 0.0;
  double precision = 0.0;
  std::int64_t true_positives = 0;

  friend bool operator==(const PRPoint&, const PRPoint&) = default;
};

// One point per ranked detection: at prefix k, recall = TP_k / num_gt and
// precision = TP_k / k.
struct PRCurve {
  std::vector<PRPoint> points;
  std::int64_t num_gt = 0;

  friend bool operator==(const PRCurve&, const PRCurve&) = default;
};

struct APResult {
  ActionId action_id = 0;
  // Unset when the class has no ground truth; such classes are left out of
  // the mean.
  std::optional<double> ap;
  std::int64_t num_gt = 0;
  std::int64_t num_det = 0;
  std::int64_t num_tp = 0;
  std::optional<PRCurve> curve;

  bool evaluable() const { return num_gt > 0; }
};

struct EvaluationReport {
  // One entry per vocabulary class, ascending action_id.
  std::vector<APResult> classes;
  std::optional<double> map_value;
  EvalConfig config;
  std::int64_t total_gt = 0;
  std::int64_t total_det = 0;
  std::int64_t total_tp = 0;
  std::int64_t evaluable_classes = 0;
};

// Labels every detection of a single class. Throws std::invalid_argument if
// the detections do not share one action_id.
std::vector<LabeledDetection> MatchClass(
    std::span<const DetectionRecord> detections, const EvalIndex& index,
    const EvalConfig& config);

// `labels` holds TP flags in rank order. Throws std::invalid_argument when
// num_gt < 1.
PRCurve ComputePrCurve(const std::vector<bool>& labels, std::int64_t num_gt);
PRCurve ComputePrCurve(std::span<const LabeledDetection> labeled,
                       std::int64_t num_gt);

// All-point: area under the precision envelope summed over recall steps.
// Eleven-point: mean envelope precision at recall 0.0, 0.1, ..., 1.0.
// An empty curve scores 0.
double AveragePrecision(const PRCurve& curve, Interpolation mode);

// Accumulates detections one at a time and evaluates every vocabulary class
// on Finish(). Memory per detection is a small fixed record; answer text is
// not retained.
class Evaluator {
 public:
  Evaluator(const EvalIndex& index, const ActionVocabulary& vocab,
            EvalConfig config);

  // Throws std::invalid_argument for an action_id outside the vocabulary.
  void Add(const DetectionRecord& detection);
  std::int64_t num_added() const { return num_added_; }

  EvaluationReport Finish() const;

 private:
  struct Candidate {
    double score;
    BoundingBox box;
    std::uint32_t video;  // key into videos_
    Timestamp timestamp;
    std::uint32_t sequence;
  };

  struct Outcome {
    std::uint32_t sequence;  // Candidate::sequence
    bool is_tp;
    std::size_t gt_entry;  // position in EvalIndex::entries(), if is_tp
    double iou;
  };

  // Video keys in lexicographic order of their names, and their index refs.
  struct VideoTables {
    std::vector<std::uint32_t> lexical_rank;
    std::vector<std::optional<EvalIndex::VideoRef>> index_ref;
  };

  static VideoTables ResolveVideos(const std::vector<std::string>& videos,
                                   const EvalIndex& index);
  // Ranks one class's candidates and matches them greedily. Output is in
  // rank order.
  static std::vector<Outcome> RankAndMatch(std::span<const Candidate> candidates,
                                           ActionId action,
                                           const EvalIndex& index,
                                           const VideoTables& videos,
                                           const EvalConfig& config);
  APResult EvaluateClass(ActionId action, const VideoTables& videos) const;

  const EvalIndex& index_;
  const ActionVocabulary& vocab_;
  EvalConfig config_;
  std::vector<std::string> videos_;
  std::unordered_map<std::string, std::uint32_t> video_keys_;
  std::unordered_map<ActionId, std::vector<Candidate>> per_class_;
  std::int64_t num_added_ = 0;

  friend std::vector<LabeledDetection> MatchClass(
      std::span<const DetectionRecord>, const EvalIndex&, const EvalConfig&);
};

EvaluationReport Evaluate(const EvalIndex& index,
                          std::span<const DetectionRecord> detections,
                          const ActionVocabulary& vocab,
                          const EvalConfig& config);

}  // namespace avaeval

#endif  // AVAEVAL_METRICS_H_
