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
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "avaeval/report.h"

namespace avaeval::cli {
namespace {

namespace fs = std::filesystem;

std::string Fixture(const std::string& name) {
  return std::string(AVAEVAL_FIXTURE_DIR) + "/" + name;
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream text;
  text << in.rdbuf();
  return text.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("avaeval_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int Run(std::vector<std::string> args) {
    args.insert(args.begin(), "ava-eval");
    out_.str("");
    err_.str("");
    return RunCli(args, out_, err_);
  }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  void Write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name, std::ios::binary) << text;
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST_F(CliTest, EvaluatePerfectFixture) {
  ASSERT_EQ(Run({"evaluate", "--gt", Fixture("perfect_gt.csv"), "--det",
                 Fixture("perfect_det.csv"), "--vocab", Fixture("small_vocab.csv"),
                 "--out", Path("report.csv"), "--threads", "2"}),
            kExitOk)
      << err_.str();
  EXPECT_EQ(out_.str().rfind("mAP: 1.0000", 0), 0u) << out_.str();
  const std::string report = ReadFile(Path("report.csv"));
  EXPECT_EQ(report.rfind("action_id,name,ap,num_gt,num_det\n", 0), 0u);
  EXPECT_NE(report.find("11,sit,1.000000,"), std::string::npos);

  const RunManifest manifest = ManifestFromJson(ReadFile(Path("report.manifest.json")));
  ASSERT_TRUE(manifest.map_value.has_value());
  EXPECT_EQ(*manifest.map_value, 1.0);
  ASSERT_EQ(manifest.inputs.size(), 3u);
  EXPECT_EQ(manifest.inputs[0].sha256,
            Sha256Hex(ReadFile(Fixture("perfect_gt.csv"))));
  // Thread count does not affect results and is not recorded.
  EXPECT_EQ(ReadFile(Path("report.manifest.json")).find("thread"), std::string::npos);
}

TEST_F(CliTest, EvaluateEchoesConfigInManifest) {
  ASSERT_EQ(Run({"evaluate", "--gt", Fixture("perfect_gt.csv"), "--det",
                 Fixture("perfect_det.csv"), "--vocab", Fixture("small_vocab.csv"),
                 "--out", Path("r.csv"), "--interpolation", "eleven_point",
                 "--iou-threshold", "0.75", "--manifest", Path("m.json")}),
            kExitOk)
      << err_.str();
  const std::string json = ReadFile(Path("m.json"));
  EXPECT_NE(json.find("\"eleven_point\""), std::string::npos);
  const RunManifest manifest = ManifestFromJson(json);
  EXPECT_EQ(manifest.config.interpolation, Interpolation::kElevenPoint);
  EXPECT_EQ(manifest.config.iou_threshold, 0.75);

  // The report subcommand picks the config up from the explicit manifest.
  ASSERT_EQ(Run({"report", "--report", Path("r.csv"), "--manifest", Path("m.json")}),
            kExitOk);
  EXPECT_NE(out_.str().find("Interpolation: eleven_point\n"), std::string::npos);
  EXPECT_NE(out_.str().find("AP@0.75IOU"), std::string::npos);
}

TEST_F(CliTest, EvaluateWritesCurves) {
  ASSERT_EQ(Run({"evaluate", "--gt", Fixture("perfect_gt.csv"), "--det",
                 Fixture("perfect_det.csv"), "--vocab", Fixture("small_vocab.csv"),
                 "--out", Path("r.csv"), "--curves"}),
            kExitOk);
  const std::string curves = ReadFile(Path("r.pr.csv"));
  EXPECT_EQ(curves.rfind("action_id,rank,recall,precision\n", 0), 0u);
  EXPECT_NE(curves.find(",1.000000,1.000000\n"), std::string::npos);
}

TEST_F(CliTest, OutputsAreDeterministicAcrossThreadCounts) {
  for (const char* threads : {"1", "8"}) {
    ASSERT_EQ(Run({"evaluate", "--gt", Fixture("perfect_gt.csv"), "--det",
                   Fixture("perfect_det.csv"), "--vocab", Fixture("small_vocab.csv"),
                   "--out", Path(std::string("r") + threads + ".csv"), "--curves",
                   "--threads", threads}),
              kExitOk);
  }
  EXPECT_EQ(ReadFile(Path("r1.csv")), ReadFile(Path("r8.csv")));
  EXPECT_EQ(ReadFile(Path("r1.pr.csv")), ReadFile(Path("r8.pr.csv")));
  RunManifest a = ManifestFromJson(ReadFile(Path("r1.manifest.json")));
  RunManifest b = ManifestFromJson(ReadFile(Path("r8.manifest.json")));
  a.created_utc = b.created_utc = "";
  a.inputs = b.inputs;
  EXPECT_EQ(ManifestToJson(a), ManifestToJson(b));
}

TEST_F(CliTest, ValidateStrictReportsLine) {
  EXPECT_EQ(Run({"validate", "--vocab", Fixture("small_vocab.csv"), "--gt",
                 Fixture("one_bad_row_gt.csv"), "--strict"}),
            kExitValidationFailure);
  EXPECT_NE(err_.str().find("line 3"), std::string::npos) << err_.str();
}

TEST_F(CliTest, ValidateLenientCountsRejects) {
  EXPECT_EQ(Run({"validate", "--vocab", Fixture("small_vocab.csv"), "--gt",
                 Fixture("one_bad_row_gt.csv")}),
            kExitValidationFailure);
  EXPECT_NE(out_.str().find("rejected: 1"), std::string::npos) << out_.str();
  EXPECT_NE(out_.str().find("line 3"), std::string::npos);
  EXPECT_NE(out_.str().find("FAILED"), std::string::npos);

  EXPECT_EQ(Run({"validate", "--vocab", Fixture("small_vocab.csv"), "--gt",
                 Fixture("perfect_gt.csv"), "--det", Fixture("perfect_det.csv")}),
            kExitOk);
  EXPECT_NE(out_.str().find("OK\n"), std::string::npos);
}

TEST_F(CliTest, DuplicatesDoNotFailValidation) {
  const std::string row = "v,0902,0.100000,0.100000,0.500000,0.500000,11,0\n";
  Write("gt.csv", row + row);
  EXPECT_EQ(Run({"validate", "--vocab", Fixture("small_vocab.csv"), "--gt",
                 Path("gt.csv")}),
            kExitOk)
      << out_.str();
  EXPECT_NE(out_.str().find("duplicate: 1"), std::string::npos) << out_.str();
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(Run({}), kExitUsage);
  EXPECT_EQ(Run({"frobnicate"}), kExitUsage);
  EXPECT_EQ(Run({"evaluate", "--gt", Fixture("perfect_gt.csv")}), kExitUsage);
  EXPECT_EQ(Run({"evaluate", "--gt", Fixture("perfect_gt.csv"), "--det",
                 Fixture("perfect_det.csv"), "--vocab", Fixture("small_vocab.csv"),
                 "--out", Path("r.csv"), "--interpolation", "voc2007"}),
            kExitUsage);
  EXPECT_EQ(Run({"evaluate", "--gt", Fixture("perfect_gt.csv"), "--det",
                 Fixture("perfect_det.csv"), "--vocab", Fixture("small_vocab.csv"),
                 "--out", Path("r.csv"), "--iou-threshold", "0"}),
            kExitUsage);
  EXPECT_EQ(Run({"schedule", "--video", "a", "--start", "5", "--end", "1"}),
            kExitUsage);
  EXPECT_EQ(Run({"report", "--report", Fixture("published_ranking_report.csv"), "--k", "0"}),
            kExitUsage);
  EXPECT_EQ(Run({"validate", "--vocab", Fixture("small_vocab.csv")}), kExitUsage);
  EXPECT_FALSE(err_.str().empty());
}

TEST_F(CliTest, MissingFileIsUsageError) {
  EXPECT_EQ(Run({"evaluate", "--gt", Path("nope.csv"), "--det",
                 Fixture("perfect_det.csv"), "--vocab", Fixture("small_vocab.csv"),
                 "--out", Path("r.csv")}),
            kExitUsage);
  EXPECT_NE(err_.str().find("nope.csv"), std::string::npos);
}

TEST_F(CliTest, HelpAndVersion) {
  EXPECT_EQ(Run({"--help"}), kExitOk);
  EXPECT_NE(out_.str().find("evaluate"), std::string::npos);
  EXPECT_EQ(Run({"--version"}), kExitOk);
  EXPECT_FALSE(out_.str().empty());
}

TEST_F(CliTest, Prompts) {
  ASSERT_EQ(Run({"prompts", "--vocab", Fixture("small_vocab.csv")}), kExitOk);
  EXPECT_EQ(out_.str(),
            "8,is someone sleeping?\n11,is someone sitting?\n12,is someone standing?\n");

  Write("overrides.csv", "sit,is anyone seated?\njuggle,is someone juggling?\n");
  ASSERT_EQ(Run({"prompts", "--vocab", Fixture("small_vocab.csv"), "--overrides",
                 Path("overrides.csv"), "--out", Path("bank.csv")}),
            kExitOk);
  EXPECT_NE(ReadFile(Path("bank.csv")).find("11,is anyone seated?\n"),
            std::string::npos);
  EXPECT_NE(err_.str().find("warning"), std::string::npos);
  EXPECT_EQ(Run({"prompts", "--vocab", Fixture("small_vocab.csv"), "--overrides",
                 Path("overrides.csv"), "--strict"}),
            kExitValidationFailure);
  EXPECT_EQ(Run({"prompts", "--vocab", Fixture("small_vocab.csv"), "--template",
                 "no placeholder?"}),
            kExitUsage);
}

TEST_F(CliTest, Schedule) {
  ASSERT_EQ(Run({"schedule", "--video", "vid001", "--start", "902", "--end", "903"}),
            kExitOk);
  EXPECT_EQ(out_.str(), "vid001,0902\nvid001,0903\n");

  Write("videos.txt", "b\r\na\n\n");
  ASSERT_EQ(Run({"schedule", "--videos", Path("videos.txt"), "--out",
                 Path("sched.csv")}),
            kExitOk);
  const std::string sched = ReadFile(Path("sched.csv"));
  EXPECT_EQ(std::count(sched.begin(), sched.end(), '\n'), 2 * 897);
  EXPECT_EQ(sched.rfind("a,0902\n", 0), 0u);
}

TEST_F(CliTest, ReportMarkdownFromPublishedRanking) {
  ASSERT_EQ(Run({"report", "--report", Fixture("published_ranking_report.csv")}), kExitOk);
  const std::string md = out_.str();
  EXPECT_NE(md.find("| sleep | 0.0019 | answer phone | 0.0000 |\n"), std::string::npos)
      << md;
  EXPECT_NE(md.find("| dance | 0.0003 |"), std::string::npos);
  // No sibling manifest, so no config lines.
  EXPECT_EQ(md.find("Interpolation:"), std::string::npos);

  ASSERT_EQ(Run({"report", "--report", Fixture("published_ranking_report.csv"), "--format", "csv"}),
            kExitOk);
  EXPECT_EQ(out_.str(), ReadFile(Fixture("published_ranking_report.csv")));
}

TEST_F(CliTest, ReportWithoutEvaluableClassesFails) {
  Write("empty.csv", "action_id,name,ap,num_gt,num_det\n1,a,NA,0,4\n");
  EXPECT_EQ(Run({"report", "--report", Path("empty.csv")}), kExitValidationFailure);
  EXPECT_NE(err_.str().find("no evaluable classes"), std::string::npos);
}

}  // namespace
}  // namespace avaeval::cli
