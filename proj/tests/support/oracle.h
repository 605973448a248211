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

// Brute-force reference for the evaluation protocol. Shares no code with
// the library's metrics path. Ground truth stays a flat list deduplicated
// pairwise, and every detection scans all of it. The precision envelope is
// a nested max.

#ifndef AVAEVAL_TESTS_SUPPORT_ORACLE_H_
#define AVAEVAL_TESTS_SUPPORT_ORACLE_H_

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "avaeval/ava_data.h"

namespace avaeval::testing {

struct OracleClassResult {
  std::int64_t num_gt = 0;
  std::int64_t num_det = 0;
  // TP flags in rank order.
  std::vector<bool> labels;
  // (recall, precision) per prefix.
  std::vector<std::pair<double, double>> curve;
  std::optional<double> ap;
};

struct OracleReport {
  std::map<ActionId, OracleClassResult> classes;
  std::optional<double> map_value;
};

double OracleIou(const BoundingBox& a, const BoundingBox& b);

// (recall, precision) at every prefix by recounting TPs from scratch.
std::vector<std::pair<double, double>> OraclePrefixCurve(
    const std::vector<bool>& labels, std::int64_t num_gt);

double OracleAllPointAp(const std::vector<std::pair<double, double>>& curve);
double OracleElevenPointAp(const std::vector<std::pair<double, double>>& curve);

OracleReport OracleEvaluate(const std::vector<GroundTruthRecord>& gt,
                            const std::vector<DetectionRecord>& detections,
                            const std::vector<ActionId>& class_ids,
                            double iou_threshold, bool eleven_point,
                            double score_floor = 0.0);

}  // namespace avaeval::testing

#endif  // AVAEVAL_TESTS_SUPPORT_ORACLE_H_
