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

// Rendering of evaluation results as CSV or Markdown, plus plot-ready
// precision/recall points. The run manifest pins the inputs of an
// evaluation.

#ifndef AVAEVAL_REPORT_H_
#define AVAEVAL_REPORT_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "avaeval/ava_data.h"
#include "avaeval/metrics.h"

namespace avaeval {

struct RankedRow {
  ActionId action_id = 0;
  std::string name;
  double ap = 0.0;

  friend bool operator==(const RankedRow&, const RankedRow&) = default;
};

// `best` is sorted by AP descending, `worst` ascending, both over classes
// with ground truth; equal APs fall back to ascending action_id. Classes
// without ground truth are listed in `not_evaluable`.
struct RankedTable {
  std::vector<RankedRow> best;
  std::vector<RankedRow> worst;
  std::vector<RankedRow> not_evaluable;
  int k = 0;
};

// Throws std::invalid_argument if k <= 0 or the report has no classes.
RankedTable RankClasses(const EvaluationReport& report,
                        const ActionVocabulary& vocab, int k);

enum class ReportFormat { kCsv, kMarkdown };

// CSV: header plus `action_id,name,ap,num_gt,num_det` per class, AP with 6
// decimals or "NA" without ground truth. Markdown: mAP and (optionally) the
// config, then the best/worst table with 4-decimal APs. Throws
// std::runtime_error("no evaluable classes") when nothing has ground truth.
void EmitReport(const EvaluationReport& report, const ActionVocabulary& vocab,
                const RankedTable& table, ReportFormat format,
                std::ostream& out, bool echo_config = true);

// `action_id,rank,recall,precision` rows. Throws std::logic_error if the
// report was produced without retain_curves.
void EmitPrPoints(const EvaluationReport& report, std::ostream& out);

// Rebuilds a report (without curves or config) and the class names from
// EmitReport's CSV. Throws ParseError on malformed input.
struct LoadedReport {
  EvaluationReport report;
  ActionVocabulary vocab;
};
LoadedReport ParseReportCsv(std::istream& in);

struct InputDigest {
  std::string role;
  std::string path;
  std::uint64_t bytes = 0;
  std::string sha256;
};

struct RunManifest {
  std::string tool_version;
  std::string created_utc;
  std::vector<InputDigest> inputs;
  EvalConfig config;
  std::optional<double> map_value;
  std::int64_t evaluable_classes = 0;
  std::int64_t total_gt = 0;
  std::int64_t total_det = 0;
  std::int64_t total_tp = 0;
  std::int64_t gt_rejected = 0;
  std::int64_t det_rejected = 0;
  std::int64_t gt_duplicates = 0;
};

// Streams the file through SHA-256. Throws std::runtime_error if it cannot
// be read.
InputDigest DigestFile(std::string role, const std::filesystem::path& path);
std::string Sha256Hex(std::string_view data);

std::string UtcTimestampNow();

// Pretty-printed JSON, keys in a fixed order.
std::string ManifestToJson(const RunManifest& manifest);
RunManifest ManifestFromJson(std::string_view json);

}  // namespace avaeval

#endif  // AVAEVAL_REPORT_H_
