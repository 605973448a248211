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

#include "avaeval/ava_data.h"

#include <algorithm>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <utility>

#include <fmt/format.h>

#include "csv_line.h"

namespace avaeval {
namespace {

using internal::LineReader;
using internal::ParseDecimal;
using internal::ParseInteger;
using internal::SplitFields;

constexpr std::size_t kGroundTruthFields = 8;
constexpr std::size_t kDetectionFields = 8;
constexpr std::size_t kDetectionFieldsWithAnswer = 9;

bool InUnitRange(double v) { return v >= 0.0 && v <= 1.0; }

struct RowFailure {
  RejectReason reason;
  std::string detail;
};

// Parses the shared prefix video_id,timestamp,x1,y1,x2,y2,action_id.
std::optional<RowFailure> ParseCommonFields(
    std::span<const std::string_view> fields, const ActionVocabulary& vocab,
    std::string* video_id, Timestamp* timestamp, BoundingBox* box,
    ActionId* action_id) {
  if (fields[0].empty()) {
    return RowFailure{RejectReason::kMalformedField, "empty video_id"};
  }
  const auto ts = ParseInteger(fields[1]);
  if (!ts || *ts < 0 || *ts > std::numeric_limits<Timestamp>::max()) {
    return RowFailure{RejectReason::kMalformedField,
                      fmt::format("timestamp '{}' is not a non-negative "
                                  "integer",
                                  fields[1])};
  }
  double coords[4];
  for (int i = 0; i < 4; ++i) {
    const auto v = ParseDecimal(fields[2 + i]);
    if (!v) {
      return RowFailure{RejectReason::kMalformedField,
                        fmt::format("coordinate '{}' is not a number",
                                    fields[2 + i])};
    }
    coords[i] = *v;
  }
  const auto id = ParseInteger(fields[6]);
  if (!id || *id < std::numeric_limits<ActionId>::min() ||
      *id > std::numeric_limits<ActionId>::max()) {
    return RowFailure{RejectReason::kMalformedField,
                      fmt::format("action_id '{}' is not an integer",
                                  fields[6])};
  }
  for (double c : coords) {
    if (!InUnitRange(c)) {
      return RowFailure{RejectReason::kCoordinateOutOfRange,
                        fmt::format("coordinate {} outside [0,1]", c)};
    }
  }
  const BoundingBox parsed{coords[0], coords[1], coords[2], coords[3]};
  if (parsed.x2 <= parsed.x1) {
    return RowFailure{RejectReason::kDegenerateBox, "x2 <= x1"};
  }
  if (parsed.y2 <= parsed.y1) {
    return RowFailure{RejectReason::kDegenerateBox, "y2 <= y1"};
  }
  if (!vocab.Contains(static_cast<ActionId>(*id))) {
    return RowFailure{RejectReason::kUnknownActionId,
                      fmt::format("action_id {} not in vocabulary", *id)};
  }
  video_id->assign(fields[0]);
  *timestamp = static_cast<Timestamp>(*ts);
  *box = parsed;
  *action_id = static_cast<ActionId>(*id);
  return std::nullopt;
}

std::optional<RowFailure> ParseGroundTruthRow(std::string_view line,
                                              const ActionVocabulary& vocab,
                                              GroundTruthRecord* out) {
  std::array<std::string_view, kGroundTruthFields> fields;
  const std::size_t n = SplitFields(line, fields);
  if (n != kGroundTruthFields) {
    return RowFailure{RejectReason::kMalformedField,
                      fmt::format("expected {} fields, found {}",
                                  kGroundTruthFields, n)};
  }
  const auto person = ParseInteger(fields[7]);
  if (!person || *person < 0 ||
      *person > std::numeric_limits<std::int32_t>::max()) {
    return RowFailure{RejectReason::kMalformedField,
                      fmt::format("person_id '{}' is not a non-negative "
                                  "integer",
                                  fields[7])};
  }
  if (auto failure = ParseCommonFields(fields, vocab, &out->video_id,
                                       &out->timestamp_s, &out->box,
                                       &out->action_id)) {
    return failure;
  }
  out->person_id = static_cast<std::int32_t>(*person);
  return std::nullopt;
}

std::optional<RowFailure> ParseDetectionRow(std::string_view line,
                                            const ActionVocabulary& vocab,
                                            DetectionRecord* out) {
  std::array<std::string_view, kDetectionFieldsWithAnswer> fields;
  const std::size_t n = SplitFields(line, fields);
  if (n != kDetectionFields && n != kDetectionFieldsWithAnswer) {
    return RowFailure{RejectReason::kMalformedField,
                      fmt::format("expected {} or {} fields, found {}",
                                  kDetectionFields, kDetectionFieldsWithAnswer,
                                  n)};
  }
  const auto score = ParseDecimal(fields[7]);
  if (!score) {
    return RowFailure{RejectReason::kMalformedField,
                      fmt::format("score '{}' is not a number", fields[7])};
  }
  if (auto failure = ParseCommonFields(fields, vocab, &out->video_id,
                                       &out->timestamp_s, &out->box,
                                       &out->action_id)) {
    return failure;
  }
  if (!InUnitRange(*score)) {
    return RowFailure{RejectReason::kScoreOutOfRange,
                      fmt::format("score {} outside [0,1]", *score)};
  }
  out->score = *score;
  if (n == kDetectionFieldsWithAnswer) {
    out->answer_text.emplace(fields[8]);
  } else {
    out->answer_text.reset();
  }
  return std::nullopt;
}

template <typename Record, typename RowParser, typename Sink>
ValidationReport ParseRows(std::istream& in, const ActionVocabulary& vocab,
                           Strictness strictness, RowParser parse_row,
                           const Sink& sink) {
  ValidationReport report;
  LineReader reader(in);
  std::string_view line;
  while (reader.Next(&line)) {
    if (line.empty()) continue;
    ++report.total_rows;
    Record record;
    if (auto failure = parse_row(line, vocab, &record)) {
      if (strictness == Strictness::kStrict) {
        throw ParseError(reader.line_number(),
                         fmt::format("{}: {}", RejectReasonName(failure->reason),
                                     failure->detail),
                         failure->reason);
      }
      ++report.rejected_by_reason[static_cast<std::size_t>(failure->reason)];
      if (report.samples.size() < ValidationReport::kMaxSamples) {
        report.samples.push_back(RowIssue{reader.line_number(), failure->reason,
                                          std::move(failure->detail)});
      }
      continue;
    }
    ++report.parsed_rows;
    ++report.per_class[record.action_id];
    sink(std::move(record));
  }
  return report;
}

void CheckStringField(std::string_view name, std::string_view value) {
  if (internal::ContainsRowBreak(value)) {
    throw std::invalid_argument(
        fmt::format("{} '{}' contains a comma or line break", name, value));
  }
}

}  // namespace

bool BoundingBox::IsValid() const {
  return InUnitRange(x1) && InUnitRange(y1) && InUnitRange(x2) &&
         InUnitRange(y2) && x1 < x2 && y1 < y2;
}

ActionVocabulary ActionVocabulary::FromClasses(std::vector<ActionClass> classes) {
  std::sort(classes.begin(), classes.end(),
            [](const ActionClass& a, const ActionClass& b) { return a.id < b.id; });
  ActionVocabulary vocab;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const ActionClass& c = classes[i];
    if (c.id < 1) {
      throw std::invalid_argument(fmt::format("action id {} is not positive", c.id));
    }
    if (c.name.empty()) {
      throw std::invalid_argument(fmt::format("action {} has an empty name", c.id));
    }
    if (internal::ContainsRowBreak(c.name)) {
      throw std::invalid_argument(
          fmt::format("action name '{}' contains a comma or line break", c.name));
    }
    if (!vocab.by_id_.emplace(c.id, i).second) {
      throw std::invalid_argument(fmt::format("duplicate action id {}", c.id));
    }
    if (!vocab.by_name_.emplace(c.name, i).second) {
      throw std::invalid_argument(fmt::format("duplicate action name '{}'", c.name));
    }
  }
  vocab.classes_ = std::move(classes);
  return vocab;
}

const ActionClass* ActionVocabulary::Find(ActionId id) const {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &classes_[it->second];
}

const ActionClass* ActionVocabulary::FindByName(std::string_view name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : &classes_[it->second];
}

std::string_view RejectReasonName(RejectReason reason) {
  switch (reason) {
    case RejectReason::kMalformedField:
      return "malformed field";
    case RejectReason::kCoordinateOutOfRange:
      return "coordinate out of range";
    case RejectReason::kDegenerateBox:
      return "degenerate box";
    case RejectReason::kUnknownActionId:
      return "unknown action id";
    case RejectReason::kScoreOutOfRange:
      return "score out of range";
    case RejectReason::kDuplicate:
      return "duplicate";
  }
  return "unknown";
}

std::int64_t ValidationReport::rejected_rows() const {
  return std::accumulate(rejected_by_reason.begin(), rejected_by_reason.end(),
                         std::int64_t{0});
}

void ValidationReport::AbsorbDuplicates(
    const std::map<ActionId, std::int64_t>& per_class_dups) {
  for (const auto& [id, count] : per_class_dups) {
    if (count == 0) continue;
    parsed_rows -= count;
    rejected_by_reason[static_cast<std::size_t>(RejectReason::kDuplicate)] += count;
    auto it = per_class.find(id);
    if (it != per_class.end()) {
      it->second -= count;
      if (it->second == 0) per_class.erase(it);
    }
  }
}

ParseError::ParseError(std::int64_t line, std::string message,
                       std::optional<RejectReason> reason)
    : std::runtime_error(fmt::format("line {}: {}", line, message)),
      line_(line),
      reason_(reason) {}

ValidationReport ParseGroundTruth(std::istream& in,
                                  const ActionVocabulary& vocab,
                                  Strictness strictness,
                                  const GroundTruthSink& sink) {
  return ParseRows<GroundTruthRecord>(in, vocab, strictness, ParseGroundTruthRow,
                                      sink);
}

ValidationReport ParseDetections(std::istream& in,
                                 const ActionVocabulary& vocab,
                                 Strictness strictness,
                                 const DetectionSink& sink) {
  return ParseRows<DetectionRecord>(in, vocab, strictness, ParseDetectionRow,
                                    sink);
}

std::vector<GroundTruthRecord> ReadGroundTruth(std::istream& in,
                                               const ActionVocabulary& vocab,
                                               Strictness strictness,
                                               ValidationReport* report) {
  std::vector<GroundTruthRecord> records;
  ValidationReport r = ParseGroundTruth(
      in, vocab, strictness,
      [&records](GroundTruthRecord&& rec) { records.push_back(std::move(rec)); });
  if (report != nullptr) *report = std::move(r);
  return records;
}

std::vector<DetectionRecord> ReadDetections(std::istream& in,
                                            const ActionVocabulary& vocab,
                                            Strictness strictness,
                                            ValidationReport* report) {
  std::vector<DetectionRecord> records;
  ValidationReport r = ParseDetections(
      in, vocab, strictness,
      [&records](DetectionRecord&& rec) { records.push_back(std::move(rec)); });
  if (report != nullptr) *report = std::move(r);
  return records;
}

ActionVocabulary ParseVocabulary(std::istream& in) {
  LineReader reader(in);
  std::string_view line;
  std::vector<ActionClass> classes;
  std::map<ActionId, std::int64_t> id_lines;
  std::map<std::string, std::int64_t, std::less<>> name_lines;
  bool first_row = true;
  while (reader.Next(&line)) {
    if (line.empty()) continue;
    const std::int64_t line_no = reader.line_number();
    std::array<std::string_view, 2> fields;
    const std::size_t n = SplitFields(line, fields);
    const auto id = n >= 1 ? ParseInteger(fields[0]) : std::nullopt;
    if (first_row && !id) {
      first_row = false;
      continue;  // header
    }
    first_row = false;
    if (n != 2) {
      throw ParseError(line_no, fmt::format("expected 2 fields, found {}", n));
    }
    if (!id || *id < 1 || *id > std::numeric_limits<ActionId>::max()) {
      throw ParseError(line_no,
                       fmt::format("action_id '{}' is not a positive integer",
                                   fields[0]));
    }
    std::string_view name = fields[1];
    while (!name.empty() && name.front() == ' ') name.remove_prefix(1);
    while (!name.empty() && name.back() == ' ') name.remove_suffix(1);
    if (name.empty()) {
      throw ParseError(line_no, fmt::format("action {} has an empty name", *id));
    }
    const auto action = static_cast<ActionId>(*id);
    if (auto [it, inserted] = id_lines.emplace(action, line_no); !inserted) {
      throw ParseError(line_no, fmt::format("duplicate action id {} (first on "
                                            "line {})",
                                            action, it->second));
    }
    if (auto it = name_lines.find(name); it != name_lines.end()) {
      throw ParseError(line_no, fmt::format("duplicate action name '{}' (first "
                                            "on line {})",
                                            name, it->second));
    }
    name_lines.emplace(std::string(name), line_no);
    classes.push_back(ActionClass{action, std::string(name)});
  }
  if (classes.empty()) {
    throw ParseError(reader.line_number(), "vocabulary is empty");
  }
  return ActionVocabulary::FromClasses(std::move(classes));
}

std::string FormatGroundTruth(const GroundTruthRecord& r) {
  CheckStringField("video_id", r.video_id);
  return fmt::format("{},{:04d},{:.6f},{:.6f},{:.6f},{:.6f},{},{}\n", r.video_id,
                     r.timestamp_s, r.box.x1, r.box.y1, r.box.x2, r.box.y2,
                     r.action_id, r.person_id);
}

std::string FormatDetection(const DetectionRecord& r) {
  CheckStringField("video_id", r.video_id);
  std::string row =
      fmt::format("{},{:04d},{:.6f},{:.6f},{:.6f},{:.6f},{},{:.6f}", r.video_id,
                  r.timestamp_s, r.box.x1, r.box.y1, r.box.x2, r.box.y2,
                  r.action_id, r.score);
  if (r.answer_text) {
    CheckStringField("answer_text", *r.answer_text);
    row += ',';
    row += *r.answer_text;
  }
  row += '\n';
  return row;
}

void SerializeGroundTruth(std::span<const GroundTruthRecord> records,
                          std::ostream& out) {
  for (const auto& r : records) out << FormatGroundTruth(r);
}

void SerializeDetections(std::span<const DetectionRecord> records,
                         std::ostream& out) {
  for (const auto& r : records) out << FormatDetection(r);
}

void SerializeVocabulary(const ActionVocabulary& vocab, std::ostream& out) {
  out << "action_id,name\n";
  for (const auto& c : vocab.classes()) out << c.id << ',' << c.name << '\n';
}

}  // namespace avaeval
