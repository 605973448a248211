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

#include "avaeval/metrics.h"

#include <algorithm>
#include <atomic>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <tuple>

#include <fmt/format.h>

namespace avaeval {
namespace {

double Overlap(double a_lo, double a_hi, double b_lo, double b_hi) {
  return std::max(0.0, std::min(a_hi, b_hi) - std::max(a_lo, b_lo));
}

}  // namespace

std::string_view InterpolationName(Interpolation mode) {
  switch (mode) {
    case Interpolation::kAllPoint:
      return "all_point";
    case Interpolation::kElevenPoint:
      return "eleven_point";
  }
  return "unknown";
}

std::optional<Interpolation> ParseInterpolation(std::string_view name) {
  if (name == "all_point") return Interpolation::kAllPoint;
  if (name == "eleven_point") return Interpolation::kElevenPoint;
  return std::nullopt;
}

void EvalConfig::Validate() const {
  if (!(iou_threshold > 0.0 && iou_threshold <= 1.0)) {
    throw std::invalid_argument(
        fmt::format("iou_threshold {} outside (0,1]", iou_threshold));
  }
  if (!(score_floor >= 0.0 && score_floor <= 1.0)) {
    throw std::invalid_argument(
        fmt::format("score_floor {} outside [0,1]", score_floor));
  }
  if (num_threads < 1) {
    throw std::invalid_argument(
        fmt::format("num_threads must be >= 1, got {}", num_threads));
  }
}

double Iou(const BoundingBox& a, const BoundingBox& b) {
  const double inter =
      Overlap(a.x1, a.x2, b.x1, b.x2) * Overlap(a.y1, a.y2, b.y1, b.y2);
  if (inter <= 0.0) return 0.0;
  // Identical boxes: inter == area exactly, so the ratio is exactly 1.
  const double uni = a.Area() + b.Area() - inter;
  return std::min(1.0, inter / uni);
}

PRCurve ComputePrCurve(const std::vector<bool>& labels, std::int64_t num_gt) {
  if (num_gt < 1) {
    throw std::invalid_argument("precision/recall needs at least one "
                                "ground-truth box");
  }
  PRCurve curve;
  curve.num_gt = num_gt;
  curve.points.reserve(labels.size());
  std::int64_t tp = 0;
  std::int64_t k = 0;
  for (bool is_tp : labels) {
    ++k;
    if (is_tp) ++tp;
    curve.points.push_back(PRPoint{static_cast<double>(tp) / num_gt,
                                   static_cast<double>(tp) / k, tp});
  }
  return curve;
}

PRCurve ComputePrCurve(std::span<const LabeledDetection> labeled,
                       std::int64_t num_gt) {
  std::vector<bool> labels;
  labels.reserve(labeled.size());
  for (const auto& l : labeled) labels.push_back(l.is_tp);
  return ComputePrCurve(labels, num_gt);
}

double AveragePrecision(const PRCurve& curve, Interpolation mode) {
  const auto& pts = curve.points;
  if (pts.empty()) return 0.0;

  // envelope[k] = max precision over points k..end.
  std::vector<double> envelope(pts.size());
  double running = 0.0;
  for (std::size_t i = pts.size(); i-- > 0;) {
    running = std::max(running, pts[i].precision);
    envelope[i] = running;
  }

  if (mode == Interpolation::kAllPoint) {
    double ap = 0.0;
    double prev_recall = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (pts[i].recall > prev_recall) {
        ap += (pts[i].recall - prev_recall) * envelope[i];
        prev_recall = pts[i].recall;
      }
    }
    return ap;
  }

  // Recall is non-decreasing, so the first point reaching a level carries
  // the envelope for that level. Levels are compared exactly in integers:
  // tp / num_gt >= level / 10.
  double sum = 0.0;
  std::size_t i = 0;
  for (std::int64_t level = 0; level <= 10; ++level) {
    while (i < pts.size() && pts[i].true_positives * 10 < level * curve.num_gt) {
      ++i;
    }
    if (i < pts.size()) sum += envelope[i];
  }
  return sum / 11.0;
}

Evaluator::Evaluator(const EvalIndex& index, const ActionVocabulary& vocab,
                     EvalConfig config)
    : index_(index), vocab_(vocab), config_(config) {
  config_.Validate();
}

void Evaluator::Add(const DetectionRecord& detection) {
  if (!vocab_.Contains(detection.action_id)) {
    throw std::invalid_argument(fmt::format(
        "detection references unknown action_id {}", detection.action_id));
  }
  if (num_added_ >= std::numeric_limits<std::uint32_t>::max()) {
    throw std::length_error("too many detections for one evaluation");
  }
  auto [it, inserted] = video_keys_.try_emplace(
      detection.video_id, static_cast<std::uint32_t>(videos_.size()));
  if (inserted) videos_.push_back(detection.video_id);
  per_class_[detection.action_id].push_back(
      Candidate{detection.score, detection.box, it->second,
                detection.timestamp_s, static_cast<std::uint32_t>(num_added_)});
  ++num_added_;
}

Evaluator::VideoTables Evaluator::ResolveVideos(
    const std::vector<std::string>& videos, const EvalIndex& index) {
  VideoTables tables;
  std::vector<std::uint32_t> order(videos.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&videos](std::uint32_t a, std::uint32_t b) {
    return videos[a] < videos[b];
  });
  tables.lexical_rank.resize(videos.size());
  for (std::uint32_t r = 0; r < order.size(); ++r) tables.lexical_rank[order[r]] = r;
  tables.index_ref.reserve(videos.size());
  for (const auto& v : videos) tables.index_ref.push_back(index.FindVideo(v));
  return tables;
}

std::vector<Evaluator::Outcome> Evaluator::RankAndMatch(
    std::span<const Candidate> candidates, ActionId action,
    const EvalIndex& index, const VideoTables& videos,
    const EvalConfig& config) {
  std::vector<const Candidate*> ranked;
  ranked.reserve(candidates.size());
  for (const Candidate& c : candidates) {
    if (c.score >= config.score_floor) ranked.push_back(&c);
  }
  // Descending score; ties by (video_id, timestamp, x1, y1, x2, y2), then
  // input order for fully identical detections.
  std::sort(ranked.begin(), ranked.end(),
            [&videos](const Candidate* a, const Candidate* b) {
              if (a->score != b->score) return a->score > b->score;
              return std::tie(videos.lexical_rank[a->video], a->timestamp, a->box,
                              a->sequence) <
                     std::tie(videos.lexical_rank[b->video], b->timestamp, b->box,
                              b->sequence);
            });

  const EvalIndex::Range class_range = index.ClassRange(action);
  std::vector<char> used(class_range.size(), 0);
  const auto entries = index.entries();

  std::vector<Outcome> outcomes;
  outcomes.reserve(ranked.size());
  for (const Candidate* c : ranked) {
    Outcome outcome{c->sequence, false, 0, 0.0};
    if (const auto& ref = videos.index_ref[c->video]) {
      const EvalIndex::Range bucket = index.BucketRange(action, *ref, c->timestamp);
      std::size_t best = bucket.end;
      double best_iou = -1.0;
      // Strict '>' keeps the earliest ground truth on IoU ties.
      for (std::size_t j = bucket.begin; j < bucket.end; ++j) {
        if (used[j - class_range.begin]) continue;
        const double iou = Iou(c->box, entries[j].box);
        if (iou > best_iou) {
          best_iou = iou;
          best = j;
        }
      }
      if (best != bucket.end && best_iou >= config.iou_threshold) {
        used[best - class_range.begin] = 1;
        outcome.is_tp = true;
        outcome.gt_entry = best;
        outcome.iou = best_iou;
      }
    }
    outcomes.push_back(outcome);
  }
  return outcomes;
}

APResult Evaluator::EvaluateClass(ActionId action,
                                  const VideoTables& videos) const {
  APResult result;
  result.action_id = action;
  result.num_gt = index_.gt_count(action);

  std::vector<Outcome> outcomes;
  if (auto it = per_class_.find(action); it != per_class_.end()) {
    outcomes = RankAndMatch(it->second, action, index_, videos, config_);
  }
  result.num_det = static_cast<std::int64_t>(outcomes.size());
  std::vector<bool> labels;
  labels.reserve(outcomes.size());
  for (const Outcome& o : outcomes) {
    labels.push_back(o.is_tp);
    if (o.is_tp) ++result.num_tp;
  }
  if (!result.evaluable()) return result;

  PRCurve curve = ComputePrCurve(labels, result.num_gt);
  result.ap = AveragePrecision(curve, config_.interpolation);
  if (config_.retain_curves) result.curve = std::move(curve);
  return result;
}

EvaluationReport Evaluator::Finish() const {
  const VideoTables videos = ResolveVideos(videos_, index_);
  const auto& classes = vocab_.classes();

  EvaluationReport report;
  report.config = config_;
  report.classes.resize(classes.size());

  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (std::size_t i = next.fetch_add(1); i < classes.size();
         i = next.fetch_add(1)) {
      report.classes[i] = EvaluateClass(classes[i].id, videos);
    }
  };
  const std::size_t workers = std::min<std::size_t>(
      static_cast<std::size_t>(config_.num_threads), classes.size());
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  double ap_sum = 0.0;
  for (const APResult& r : report.classes) {
    report.total_gt += r.num_gt;
    report.total_det += r.num_det;
    report.total_tp += r.num_tp;
    if (r.ap) {
      ap_sum += *r.ap;
      ++report.evaluable_classes;
    }
  }
  if (report.evaluable_classes > 0) {
    report.map_value = ap_sum / static_cast<double>(report.evaluable_classes);
  }
  return report;
}

std::vector<LabeledDetection> MatchClass(
    std::span<const DetectionRecord> detections, const EvalIndex& index,
    const EvalConfig& config) {
  config.Validate();
  if (detections.empty()) return {};
  const ActionId action = detections.front().action_id;

  std::vector<std::string> videos;
  std::unordered_map<std::string, std::uint32_t> keys;
  std::vector<Evaluator::Candidate> candidates;
  candidates.reserve(detections.size());
  for (std::size_t i = 0; i < detections.size(); ++i) {
    const DetectionRecord& d = detections[i];
    if (d.action_id != action) {
      throw std::invalid_argument(
          fmt::format("MatchClass got action ids {} and {}", action, d.action_id));
    }
    auto [it, inserted] =
        keys.try_emplace(d.video_id, static_cast<std::uint32_t>(videos.size()));
    if (inserted) videos.push_back(d.video_id);
    candidates.push_back(Evaluator::Candidate{d.score, d.box, it->second,
                                              d.timestamp_s,
                                              static_cast<std::uint32_t>(i)});
  }

  const auto tables = Evaluator::ResolveVideos(videos, index);
  const auto outcomes =
      Evaluator::RankAndMatch(candidates, action, index, tables, config);
  const auto entries = index.entries();

  std::vector<LabeledDetection> labeled;
  labeled.reserve(outcomes.size());
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    const auto& o = outcomes[k];
    LabeledDetection l;
    l.detection = detections[o.sequence];
    l.is_tp = o.is_tp;
    l.rank = static_cast<std::int64_t>(k) + 1;
    if (o.is_tp) {
      const IndexedBox& gt = entries[o.gt_entry];
      l.matched_gt = MatchedGroundTruth{gt.ordinal, gt.box, gt.person_id, o.iou};
    }
    labeled.push_back(std::move(l));
  }
  return labeled;
}

EvaluationReport Evaluate(const EvalIndex& index,
                          std::span<const DetectionRecord> detections,
                          const ActionVocabulary& vocab,
                          const EvalConfig& config) {
  Evaluator evaluator(index, vocab, config);
  for (const auto& d : detections) evaluator.Add(d);
  return evaluator.Finish();
}

}  // namespace avaeval
