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

#include "avaeval/report.h"

#include <algorithm>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

#include "csv_line.h"

namespace avaeval {
namespace {

constexpr std::string_view kReportHeader = "action_id,name,ap,num_gt,num_det";
constexpr std::string_view kPrHeader = "action_id,rank,recall,precision";
constexpr std::string_view kNotAvailable = "NA";

std::string ClassName(const ActionVocabulary& vocab, ActionId id) {
  const ActionClass* c = vocab.Find(id);
  return c != nullptr ? c->name : fmt::format("#{}", id);
}

void RequireEvaluable(const EvaluationReport& report) {
  if (report.evaluable_classes == 0 || !report.map_value) {
    throw std::runtime_error("no evaluable classes");
  }
}

void EmitMarkdown(const EvaluationReport& report, const RankedTable& table,
                  bool echo_config, std::ostream& out) {
  out << "# Action detection results\n\n";
  out << fmt::format("mAP: {:.4f}\n", *report.map_value);
  out << fmt::format("Evaluable classes: {} of {}\n", report.evaluable_classes,
                     report.classes.size());
  if (echo_config) {
    out << fmt::format("IoU threshold: {}\n", report.config.iou_threshold);
    out << fmt::format("Interpolation: {}\n",
                       InterpolationName(report.config.interpolation));
    out << fmt::format("Score floor: {}\n", report.config.score_floor);
  }
  out << '\n';

  const std::string ap_header =
      fmt::format("AP@{}IOU", report.config.iou_threshold);
  out << fmt::format("| Best Performance | {0} | Worst Performance | {0} |\n",
                     ap_header);
  out << "|:--|--:|:--|--:|\n";
  const std::size_t rows = std::max(table.best.size(), table.worst.size());
  for (std::size_t i = 0; i < rows; ++i) {
    auto cells = [](const std::vector<RankedRow>& col, std::size_t i) {
      if (i >= col.size()) return std::string(" | ");
      return fmt::format("{} | {:.4f}", col[i].name, col[i].ap);
    };
    out << "| " << cells(table.best, i) << " | " << cells(table.worst, i)
        << " |\n";
  }
  if (!table.not_evaluable.empty()) {
    out << "\nNot evaluable (no ground truth): ";
    for (std::size_t i = 0; i < table.not_evaluable.size(); ++i) {
      if (i > 0) out << ", ";
      out << table.not_evaluable[i].name;
    }
    out << '\n';
  }
}

}  // namespace

RankedTable RankClasses(const EvaluationReport& report,
                        const ActionVocabulary& vocab, int k) {
  if (k <= 0) throw std::invalid_argument(fmt::format("k must be positive, got {}", k));
  if (report.classes.empty()) throw std::invalid_argument("report has no classes");

  RankedTable table;
  table.k = k;
  std::vector<RankedRow> rows;
  for (const APResult& r : report.classes) {
    RankedRow row{r.action_id, ClassName(vocab, r.action_id), r.ap.value_or(0.0)};
    if (r.ap) {
      rows.push_back(std::move(row));
    } else {
      table.not_evaluable.push_back(std::move(row));
    }
  }
  const auto take = std::min(rows.size(), static_cast<std::size_t>(k));

  std::sort(rows.begin(), rows.end(), [](const RankedRow& a, const RankedRow& b) {
    if (a.ap != b.ap) return a.ap > b.ap;
    return a.action_id < b.action_id;
  });
  table.best.assign(rows.begin(), rows.begin() + take);

  std::sort(rows.begin(), rows.end(), [](const RankedRow& a, const RankedRow& b) {
    if (a.ap != b.ap) return a.ap < b.ap;
    return a.action_id < b.action_id;
  });
  table.worst.assign(rows.begin(), rows.begin() + take);
  return table;
}

void EmitReport(const EvaluationReport& report, const ActionVocabulary& vocab,
                const RankedTable& table, ReportFormat format,
                std::ostream& out, bool echo_config) {
  RequireEvaluable(report);
  if (format == ReportFormat::kMarkdown) {
    EmitMarkdown(report, table, echo_config, out);
    return;
  }
  out << kReportHeader << '\n';
  for (const APResult& r : report.classes) {
    const std::string ap = r.ap ? fmt::format("{:.6f}", *r.ap)
                                : std::string(kNotAvailable);
    out << fmt::format("{},{},{},{},{}\n", r.action_id,
                       ClassName(vocab, r.action_id), ap, r.num_gt, r.num_det);
  }
}

void EmitPrPoints(const EvaluationReport& report, std::ostream& out) {
  for (const APResult& r : report.classes) {
    if (r.evaluable() && !r.curve) {
      throw std::logic_error(
          "precision/recall curves were not retained for this report");
    }
  }
  out << kPrHeader << '\n';
  for (const APResult& r : report.classes) {
    if (!r.curve) continue;
    std::int64_t rank = 0;
    for (const PRPoint& p : r.curve->points) {
      out << fmt::format("{},{},{:.6f},{:.6f}\n", r.action_id, ++rank, p.recall,
                         p.precision);
    }
  }
}

LoadedReport ParseReportCsv(std::istream& in) {
  internal::LineReader reader(in);
  std::string_view line;
  LoadedReport loaded;
  std::vector<ActionClass> classes;
  bool first = true;
  double ap_sum = 0.0;
  while (reader.Next(&line)) {
    if (line.empty()) continue;
    if (first && line == kReportHeader) {
      first = false;
      continue;
    }
    first = false;
    std::array<std::string_view, 5> f;
    const std::size_t n = internal::SplitFields(line, f);
    if (n != f.size()) {
      throw ParseError(reader.line_number(),
                       fmt::format("expected 5 fields, found {}", n));
    }
    const auto id = internal::ParseInteger(f[0]);
    const auto num_gt = internal::ParseInteger(f[3]);
    const auto num_det = internal::ParseInteger(f[4]);
    if (!id || !num_gt || !num_det || *num_gt < 0 || *num_det < 0) {
      throw ParseError(reader.line_number(), "malformed integer field");
    }
    APResult r;
    r.action_id = static_cast<ActionId>(*id);
    r.num_gt = *num_gt;
    r.num_det = *num_det;
    if (f[2] != kNotAvailable) {
      const auto ap = internal::ParseDecimal(f[2]);
      if (!ap || *ap < 0.0 || *ap > 1.0) {
        throw ParseError(reader.line_number(),
                         fmt::format("ap '{}' is not a value in [0,1]", f[2]));
      }
      if (r.num_gt == 0) {
        throw ParseError(reader.line_number(), "ap given for a class without "
                                               "ground truth");
      }
      r.ap = *ap;
      ap_sum += *ap;
      ++loaded.report.evaluable_classes;
    }
    loaded.report.total_gt += r.num_gt;
    loaded.report.total_det += r.num_det;
    classes.push_back(ActionClass{r.action_id, std::string(f[1])});
    loaded.report.classes.push_back(std::move(r));
  }
  try {
    loaded.vocab = ActionVocabulary::FromClasses(std::move(classes));
  } catch (const std::invalid_argument& e) {
    throw ParseError(reader.line_number(), e.what());
  }
  std::sort(loaded.report.classes.begin(), loaded.report.classes.end(),
            [](const APResult& a, const APResult& b) {
              return a.action_id < b.action_id;
            });
  if (loaded.report.evaluable_classes > 0) {
    loaded.report.map_value =
        ap_sum / static_cast<double>(loaded.report.evaluable_classes);
  }
  return loaded;
}

}  // namespace avaeval
