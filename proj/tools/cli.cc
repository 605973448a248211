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

#include "cli.h"

#include <filesystem>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "avaeval/ava_data.h"
#include "avaeval/eval_index.h"
#include "avaeval/metrics.h"
#include "avaeval/prompt_schedule.h"
#include "avaeval/report.h"
#include "avaeval/version.h"

namespace avaeval::cli {
namespace {

namespace fs = std::filesystem;

// Bad flags, missing inputs, unwritable outputs.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inputs that were read but failed validation.
class ValidationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::ifstream OpenInput(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError(fmt::format("cannot open '{}'", path));
  return in;
}

// Writes to `path`, or to `fallback` when the path is empty or "-".
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw UsageError(fmt::format("cannot write '{}'", path));
      stream_ = file_.get();
    }
  }

  std::ostream& stream() { return *stream_; }

  void Close(const std::string& path) {
    if (!file_) {
      stream_->flush();
      return;
    }
    file_->close();
    if (!*file_) throw std::runtime_error(fmt::format("failed writing '{}'", path));
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

Strictness ToStrictness(bool strict) {
  return strict ? Strictness::kStrict : Strictness::kLenient;
}

ActionVocabulary LoadVocabulary(const std::string& path) {
  std::ifstream in = OpenInput(path);
  try {
    return ParseVocabulary(in);
  } catch (const ParseError& e) {
    throw ValidationFailure(fmt::format("{}: {}", path, e.what()));
  }
}

void PrintValidation(std::string_view label, const std::string& path,
                     const ValidationReport& report, std::ostream& out) {
  out << fmt::format("{}: {}\n", label, path);
  out << fmt::format("  rows: {}\n  parsed: {}\n  rejected: {}\n",
                     report.total_rows, report.parsed_rows,
                     report.rejected_rows());
  for (std::size_t i = 0; i < kNumRejectReasons; ++i) {
    if (report.rejected_by_reason[i] == 0) continue;
    out << fmt::format("    {}: {}\n",
                       RejectReasonName(static_cast<RejectReason>(i)),
                       report.rejected_by_reason[i]);
  }
  out << fmt::format("  classes: {}\n", report.per_class.size());
  for (const RowIssue& issue : report.samples) {
    out << fmt::format("  line {}: {}: {}\n", issue.line,
                       RejectReasonName(issue.reason), issue.detail);
  }
}

std::int64_t ErrorRows(const ValidationReport& report) {
  return report.rejected_rows() - report.rejected(RejectReason::kDuplicate);
}

struct GroundTruthLoad {
  EvalIndex index;
  ValidationReport report;
};

GroundTruthLoad LoadGroundTruth(const std::string& path,
                                const ActionVocabulary& vocab,
                                Strictness strictness) {
  std::ifstream in = OpenInput(path);
  EvalIndex::Builder builder;
  GroundTruthLoad load;
  try {
    load.report = ParseGroundTruth(
        in, vocab, strictness,
        [&builder](GroundTruthRecord&& r) { builder.Add(r); });
  } catch (const ParseError& e) {
    throw ValidationFailure(fmt::format("{}: {}", path, e.what()));
  }
  load.index = std::move(builder).Build();
  load.report.AbsorbDuplicates(load.index.duplicates_per_class());
  return load;
}

fs::path SiblingPath(const std::string& path, std::string_view suffix) {
  fs::path p(path);
  p.replace_extension(suffix);
  return p;
}

// --- validate ---------------------------------------------------------------

struct ValidateOptions {
  std::string gt;
  std::string det;
  std::string vocab;
  bool strict = false;
};

int RunValidate(const ValidateOptions& opt, std::ostream& out) {
  if (opt.gt.empty() && opt.det.empty()) {
    throw UsageError("validate needs --gt and/or --det");
  }
  const ActionVocabulary vocab = LoadVocabulary(opt.vocab);
  out << fmt::format("vocabulary: {}\n  classes: {}\n", opt.vocab, vocab.size());
  const Strictness strictness = ToStrictness(opt.strict);

  std::int64_t errors = 0;
  if (!opt.gt.empty()) {
    const GroundTruthLoad load = LoadGroundTruth(opt.gt, vocab, strictness);
    PrintValidation("ground truth", opt.gt, load.report, out);
    errors += ErrorRows(load.report);
  }
  if (!opt.det.empty()) {
    std::ifstream in = OpenInput(opt.det);
    ValidationReport report;
    try {
      report = ParseDetections(in, vocab, strictness, [](DetectionRecord&&) {});
    } catch (const ParseError& e) {
      throw ValidationFailure(fmt::format("{}: {}", opt.det, e.what()));
    }
    PrintValidation("detections", opt.det, report, out);
    errors += ErrorRows(report);
  }
  out << (errors == 0 ? "OK\n" : fmt::format("FAILED: {} invalid rows\n", errors));
  return errors == 0 ? kExitOk : kExitValidationFailure;
}

// --- prompts ----------------------------------------------------------------

struct PromptsOptions {
  std::string vocab;
  std::string pattern = PromptTemplate{}.pattern;
  std::string overrides;
  std::string out;
  bool strict = false;
  bool no_builtin = false;
};

int RunPrompts(const PromptsOptions& opt, std::ostream& out, std::ostream& err) {
  const ActionVocabulary vocab = LoadVocabulary(opt.vocab);
  PromptTemplate tmpl;
  tmpl.pattern = opt.pattern;
  tmpl.use_builtin_tables = !opt.no_builtin;
  if (!opt.overrides.empty()) {
    std::ifstream in = OpenInput(opt.overrides);
    try {
      tmpl.overrides = ParseQuestionOverrides(in);
    } catch (const ParseError& e) {
      throw ValidationFailure(fmt::format("{}: {}", opt.overrides, e.what()));
    }
  }
  try {
    tmpl.Validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const PromptBank bank = BuildPromptBank(vocab, tmpl, ToStrictness(opt.strict));
  for (const auto& w : bank.warnings) err << "warning: " << w << '\n';
  std::ostringstream buffer;
  SerializePromptBank(bank, buffer);
  Output sink(opt.out, out);
  sink.stream() << buffer.str();
  sink.Close(opt.out);
  return kExitOk;
}

// --- schedule ---------------------------------------------------------------

struct ScheduleOptions {
  std::vector<std::string> videos;
  std::string videos_file;
  ScheduleConfig config;
  std::string out;
};

int RunSchedule(const ScheduleOptions& opt, std::ostream& out) {
  std::vector<std::string> ids = opt.videos;
  if (!opt.videos_file.empty()) {
    std::ifstream in = OpenInput(opt.videos_file);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) ids.push_back(line);
    }
  }
  if (ids.empty()) throw UsageError("schedule needs --video or --videos");
  try {
    opt.config.Validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const KeyframeSchedule schedule = BuildSchedule(ids, opt.config);
  Output sink(opt.out, out);
  SerializeSchedule(schedule, sink.stream());
  sink.Close(opt.out);
  return kExitOk;
}

// --- evaluate ---------------------------------------------------------------

struct EvaluateOptions {
  std::string gt;
  std::string det;
  std::string vocab;
  std::string out;
  std::string manifest;
  std::string curves_out;
  std::string interpolation = "all_point";
  double iou_threshold = 0.5;
  double score_floor = 0.0;
  int threads = 0;
  bool strict = false;
  bool curves = false;
};

int RunEvaluate(const EvaluateOptions& opt, std::ostream& out,
                std::ostream& err) {
  EvalConfig config;
  config.iou_threshold = opt.iou_threshold;
  config.score_floor = opt.score_floor;
  config.retain_curves = opt.curves;
  config.num_threads = opt.threads > 0
                           ? opt.threads
                           : static_cast<int>(std::max(
                                 1u, std::thread::hardware_concurrency()));
  const auto mode = ParseInterpolation(opt.interpolation);
  if (!mode) {
    throw UsageError(fmt::format("unknown interpolation '{}'", opt.interpolation));
  }
  config.interpolation = *mode;
  try {
    config.Validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  const Strictness strictness = ToStrictness(opt.strict);
  const ActionVocabulary vocab = LoadVocabulary(opt.vocab);
  const GroundTruthLoad gt = LoadGroundTruth(opt.gt, vocab, strictness);

  Evaluator evaluator(gt.index, vocab, config);
  ValidationReport det_report;
  {
    std::ifstream in = OpenInput(opt.det);
    try {
      det_report = ParseDetections(
          in, vocab, strictness,
          [&evaluator](DetectionRecord&& d) { evaluator.Add(d); });
    } catch (const ParseError& e) {
      throw ValidationFailure(fmt::format("{}: {}", opt.det, e.what()));
    }
  }
  const EvaluationReport report = evaluator.Finish();
  const RankedTable table = RankClasses(report, vocab, 5);

  std::ostringstream csv;
  EmitReport(report, vocab, table, ReportFormat::kCsv, csv);
  Output report_out(opt.out, out);
  report_out.stream() << csv.str();
  report_out.Close(opt.out);

  if (opt.curves) {
    const std::string path = opt.curves_out.empty()
                                 ? SiblingPath(opt.out, ".pr.csv").string()
                                 : opt.curves_out;
    Output curves_out(path, out);
    EmitPrPoints(report, curves_out.stream());
    curves_out.Close(path);
  }

  RunManifest manifest;
  manifest.tool_version = kVersion;
  manifest.created_utc = UtcTimestampNow();
  manifest.inputs = {DigestFile("ground_truth", opt.gt),
                     DigestFile("detections", opt.det),
                     DigestFile("vocabulary", opt.vocab)};
  manifest.config = config;
  manifest.map_value = report.map_value;
  manifest.evaluable_classes = report.evaluable_classes;
  manifest.total_gt = report.total_gt;
  manifest.total_det = report.total_det;
  manifest.total_tp = report.total_tp;
  manifest.gt_rejected = ErrorRows(gt.report);
  manifest.det_rejected = det_report.rejected_rows();
  manifest.gt_duplicates = gt.index.duplicates();
  const std::string manifest_path =
      opt.manifest.empty() ? SiblingPath(opt.out, ".manifest.json").string()
                           : opt.manifest;
  Output manifest_out(manifest_path, out);
  manifest_out.stream() << ManifestToJson(manifest);
  manifest_out.Close(manifest_path);

  std::ostream& log = (opt.out.empty() || opt.out == "-") ? err : out;
  log << fmt::format("mAP: {:.4f} over {} classes ({} gt, {} detections, {} "
                     "rejected rows)\n",
                     *report.map_value, report.evaluable_classes, report.total_gt,
                     report.total_det,
                     manifest.gt_rejected + manifest.det_rejected);
  return kExitOk;
}

// --- report -----------------------------------------------------------------

struct ReportOptions {
  std::string report;
  std::string manifest;
  std::string format = "markdown";
  std::string out;
  int k = 5;
};

int RunReport(const ReportOptions& opt, std::ostream& out) {
  if (opt.k <= 0) throw UsageError(fmt::format("--k must be positive, got {}", opt.k));
  ReportFormat format;
  if (opt.format == "markdown") {
    format = ReportFormat::kMarkdown;
  } else if (opt.format == "csv") {
    format = ReportFormat::kCsv;
  } else {
    throw UsageError(fmt::format("unknown format '{}'", opt.format));
  }

  LoadedReport loaded;
  {
    std::ifstream in = OpenInput(opt.report);
    try {
      loaded = ParseReportCsv(in);
    } catch (const ParseError& e) {
      throw ValidationFailure(fmt::format("{}: {}", opt.report, e.what()));
    }
  }
  if (loaded.report.classes.empty()) {
    throw ValidationFailure("no evaluable classes");
  }

  std::string manifest_path = opt.manifest;
  if (manifest_path.empty()) {
    const fs::path sibling = SiblingPath(opt.report, ".manifest.json");
    if (fs::exists(sibling)) manifest_path = sibling.string();
  }
  bool echo_config = false;
  if (!manifest_path.empty()) {
    std::ifstream in = OpenInput(manifest_path);
    std::stringstream text;
    text << in.rdbuf();
    loaded.report.config = ManifestFromJson(text.str()).config;
    echo_config = true;
  }

  const RankedTable table = RankClasses(loaded.report, loaded.vocab, opt.k);
  std::ostringstream rendered;
  EmitReport(loaded.report, loaded.vocab, table, format, rendered, echo_config);
  Output sink(opt.out, out);
  sink.stream() << rendered.str();
  sink.Close(opt.out);
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Zero-shot action detection evaluation toolkit", "ava-eval"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  ValidateOptions validate;
  auto* validate_cmd =
      app.add_subcommand("validate", "Check vocabulary, ground truth and detection files");
  validate_cmd->add_option("--vocab", validate.vocab, "Vocabulary CSV")->required();
  validate_cmd->add_option("--gt", validate.gt, "Ground-truth CSV");
  validate_cmd->add_option("--det", validate.det, "Detection CSV");
  validate_cmd->add_flag("--strict", validate.strict, "Stop at the first invalid row");

  PromptsOptions prompts;
  auto* prompts_cmd = app.add_subcommand("prompts", "Emit the question bank CSV");
  prompts_cmd->add_option("--vocab", prompts.vocab, "Vocabulary CSV")->required();
  prompts_cmd->add_option("--template", prompts.pattern,
                          "Question pattern with one {action} placeholder");
  prompts_cmd->add_option("--overrides", prompts.overrides,
                          "CSV of name,question overrides");
  prompts_cmd->add_flag("--strict", prompts.strict,
                        "Fail on overrides naming unknown classes");
  prompts_cmd->add_flag("--no-builtin", prompts.no_builtin,
                        "Ignore the shipped question and gerund tables");
  prompts_cmd->add_option("--out", prompts.out, "Output path (default stdout)");

  ScheduleOptions schedule;
  auto* schedule_cmd = app.add_subcommand("schedule", "Emit the keyframe schedule CSV");
  schedule_cmd->add_option("--video", schedule.videos, "Video id (repeatable)");
  schedule_cmd->add_option("--videos", schedule.videos_file,
                           "File with one video id per line");
  schedule_cmd->add_option("--start", schedule.config.start_s, "First second")
      ->capture_default_str();
  schedule_cmd->add_option("--end", schedule.config.end_s, "Last second, inclusive")
      ->capture_default_str();
  schedule_cmd->add_option("--interval", schedule.config.interval_s,
                           "Seconds between keyframes")
      ->capture_default_str();
  schedule_cmd->add_option("--out", schedule.out, "Output path (default stdout)");

  EvaluateOptions evaluate;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score detections against ground truth");
  evaluate_cmd->add_option("--gt", evaluate.gt, "Ground-truth CSV")->required();
  evaluate_cmd->add_option("--det", evaluate.det, "Detection CSV")->required();
  evaluate_cmd->add_option("--vocab", evaluate.vocab, "Vocabulary CSV")->required();
  evaluate_cmd->add_option("--out", evaluate.out, "Report CSV path")->required();
  evaluate_cmd->add_option("--manifest", evaluate.manifest,
                           "Manifest path (default <out>.manifest.json)");
  evaluate_cmd->add_option("--iou-threshold", evaluate.iou_threshold,
                           "True-positive IoU threshold")
      ->capture_default_str();
  evaluate_cmd->add_option("--interpolation", evaluate.interpolation,
                           "all_point or eleven_point")
      ->capture_default_str();
  evaluate_cmd->add_option("--score-floor", evaluate.score_floor,
                           "Drop detections scoring below this")
      ->capture_default_str();
  evaluate_cmd->add_option("--threads", evaluate.threads,
                           "Worker threads (default: hardware concurrency)");
  evaluate_cmd->add_flag("--strict", evaluate.strict, "Stop at the first invalid row");
  evaluate_cmd->add_flag("--curves", evaluate.curves, "Write precision/recall points");
  evaluate_cmd->add_option("--curves-out", evaluate.curves_out,
                           "Precision/recall CSV path (default <out>.pr.csv)");
  // Accepted for symmetry with `report`; the CSV lists every class.
  int unused_k = 5;
  evaluate_cmd->add_option("--k", unused_k, "Rows per ranking table")->check(CLI::PositiveNumber);

  ReportOptions report;
  auto* report_cmd = app.add_subcommand("report", "Render rankings from a report CSV");
  report_cmd->add_option("--report", report.report, "Report CSV from evaluate")->required();
  report_cmd->add_option("--manifest", report.manifest,
                         "Manifest JSON (default <report>.manifest.json if present)");
  report_cmd->add_option("--k", report.k, "Rows per ranking table")->capture_default_str();
  report_cmd->add_option("--format", report.format, "markdown or csv")
      ->capture_default_str();
  report_cmd->add_option("--out", report.out, "Output path (default stdout)");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\nRun with --help for usage.\n";
    return kExitUsage;
  }

  try {
    if (*validate_cmd) return RunValidate(validate, out);
    if (*prompts_cmd) return RunPrompts(prompts, out, err);
    if (*schedule_cmd) return RunSchedule(schedule, out);
    if (*evaluate_cmd) return RunEvaluate(evaluate, out, err);
    if (*report_cmd) return RunReport(report, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidationFailure;
  }
  return kExitUsage;
}

}  // namespace avaeval::cli
