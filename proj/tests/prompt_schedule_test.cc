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

#include "avaeval/prompt_schedule.h"

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "generators.h"

namespace avaeval {
namespace {

ActionVocabulary LoadFixtureVocabulary(const std::string& name) {
  std::ifstream in(std::string(AVAEVAL_FIXTURE_DIR) + "/" + name);
  return ParseVocabulary(in);
}

ActionVocabulary Vocab(std::vector<ActionClass> classes) {
  return ActionVocabulary::FromClasses(std::move(classes));
}

TEST(GerundTest, SpellingRules) {
  EXPECT_EQ(GerundByRule("dance"), "dancing");
  EXPECT_EQ(GerundByRule("sit"), "sitting");
  EXPECT_EQ(GerundByRule("sleep"), "sleeping");
  EXPECT_EQ(GerundByRule("lie"), "lying");
  EXPECT_EQ(GerundByRule("stand"), "standing");
  EXPECT_EQ(GerundByRule("row"), "rowing");
  EXPECT_EQ(GerundByRule("open"), "opening");
  EXPECT_EQ(GerundByRule("see"), "seeing");
}

TEST(GerundTest, OnlyLeadingVerbChanges) {
  EXPECT_EQ(Gerundize("ride (e.g. a bike)", {}), "riding (e.g. a bike)");
  EXPECT_EQ(Gerundize("run/jog", {}), "running/jogging");
  EXPECT_EQ(Gerundize("sit", {{"sit", "perching"}}), "perching");
  EXPECT_THROW(Gerundize("", {}), std::invalid_argument);
  EXPECT_THROW(Gerundize(" x", {}), std::invalid_argument);
}

// The shipped table exists for exceptions; regular verbs must agree with
// the rules so the table never silently masks a rule bug.
TEST(GerundTest, BuiltinTableAgreesWithRulesExceptFishing) {
  std::vector<std::string> disagreements;
  for (const auto& [verb, gerund] : BuiltinGerunds()) {
    if (GerundByRule(verb) != gerund) disagreements.push_back(verb);
  }
  EXPECT_EQ(disagreements, std::vector<std::string>{"fishing"});
}

TEST(PromptBankTest, DefaultTemplate) {
  const auto vocab = Vocab({{4, "dance"}, {8, "sleep"}, {11, "sit"}});
  const PromptBank bank = BuildPromptBank(vocab, PromptTemplate{}, Strictness::kStrict);
  EXPECT_EQ(bank.entries.at(4), "is someone dancing?");
  EXPECT_EQ(bank.entries.at(8), "is someone sleeping?");
  EXPECT_EQ(bank.entries.at(11), "is someone sitting?");
  EXPECT_TRUE(bank.warnings.empty());
}

TEST(PromptBankTest, OverridesWinOverEverything) {
  PromptTemplate tmpl;
  tmpl.overrides["answer phone"] = "is someone answering the phone?";
  tmpl.overrides["sit"] = "is anyone seated?";
  const auto vocab = Vocab({{11, "sit"}, {15, "answer phone"}});
  const PromptBank bank = BuildPromptBank(vocab, tmpl, Strictness::kStrict);
  EXPECT_EQ(bank.entries.at(15), "is someone answering the phone?");
  EXPECT_EQ(bank.entries.at(11), "is anyone seated?");
}

TEST(PromptBankTest, GerundOverride) {
  PromptTemplate tmpl;
  tmpl.gerund_overrides["sit"] = "sitting down";
  const PromptBank bank =
      BuildPromptBank(Vocab({{11, "sit"}}), tmpl, Strictness::kStrict);
  EXPECT_EQ(bank.entries.at(11), "is someone sitting down?");
}

TEST(PromptBankTest, CustomPatternWithoutBuiltins) {
  PromptTemplate tmpl;
  tmpl.pattern = "Q: is a person {action} here?";
  tmpl.use_builtin_tables = false;
  const PromptBank bank = BuildPromptBank(
      Vocab({{4, "dance"}, {15, "answer phone"}}), tmpl, Strictness::kStrict);
  EXPECT_EQ(bank.entries.at(4), "Q: is a person dancing here?");
  EXPECT_EQ(bank.entries.at(15), "Q: is a person answering phone here?");
  EXPECT_EQ(bank.pattern, tmpl.pattern);
}

TEST(PromptBankTest, TemplateValidation) {
  const auto vocab = Vocab({{1, "sit"}});
  PromptTemplate missing;
  missing.pattern = "is someone acting?";
  EXPECT_THROW(BuildPromptBank(vocab, missing, Strictness::kLenient),
               std::invalid_argument);
  PromptTemplate twice;
  twice.pattern = "{action} or {action}?";
  EXPECT_THROW(BuildPromptBank(vocab, twice, Strictness::kLenient),
               std::invalid_argument);
  PromptTemplate no_question;
  no_question.pattern = "someone is {action}";
  EXPECT_THROW(BuildPromptBank(vocab, no_question, Strictness::kLenient),
               std::invalid_argument);
  PromptTemplate bad_override;
  bad_override.overrides["sit"] = "sitting.";
  EXPECT_THROW(BuildPromptBank(vocab, bad_override, Strictness::kLenient),
               std::invalid_argument);
}

TEST(PromptBankTest, UnknownOverrideStrictVersusLenient) {
  PromptTemplate tmpl;
  tmpl.overrides["juggle"] = "is someone juggling?";
  const auto vocab = Vocab({{1, "sit"}});
  EXPECT_THROW(BuildPromptBank(vocab, tmpl, Strictness::kStrict),
               std::invalid_argument);
  const PromptBank bank = BuildPromptBank(vocab, tmpl, Strictness::kLenient);
  ASSERT_EQ(bank.warnings.size(), 1u);
  EXPECT_NE(bank.warnings[0].find("juggle"), std::string::npos);
  EXPECT_EQ(bank.entries.size(), 1u);
}

TEST(PromptBankTest, CollidingQuestionsThrow) {
  PromptTemplate tmpl;
  tmpl.overrides["sit"] = "is someone standing?";
  EXPECT_THROW(
      BuildPromptBank(Vocab({{11, "sit"}, {12, "stand"}}), tmpl, Strictness::kStrict),
      std::invalid_argument);
}

TEST(PromptBankTest, FullVocabularyIsBijectiveAndWellFormed) {
  const ActionVocabulary vocab = LoadFixtureVocabulary("ava_v2.2_actions.csv");
  ASSERT_EQ(vocab.size(), 80u);
  const PromptBank bank = BuildPromptBank(vocab, PromptTemplate{}, Strictness::kStrict);
  ASSERT_EQ(bank.entries.size(), 80u);
  std::set<std::string> distinct;
  for (const auto& [id, question] : bank.entries) {
    EXPECT_TRUE(vocab.Contains(id));
    EXPECT_EQ(question.back(), '?') << question;
    EXPECT_EQ(question.find(','), std::string::npos) << question;
    EXPECT_EQ(question.rfind("is someone ", 0), 0u) << question;
    distinct.insert(question);
  }
  EXPECT_EQ(distinct.size(), 80u);
  EXPECT_EQ(bank.entries.at(15), "is someone answering the phone?");
  EXPECT_EQ(bank.entries.at(11), "is someone sitting?");
  EXPECT_EQ(bank.entries.at(8), "is someone sleeping?");
}

TEST(PromptBankTest, SerializeExactRows) {
  const PromptBank bank = BuildPromptBank(Vocab({{4, "dance"}, {11, "sit"}}),
                                          PromptTemplate{}, Strictness::kStrict);
  std::ostringstream out;
  SerializePromptBank(bank, out);
  EXPECT_EQ(out.str(), "4,is someone dancing?\n11,is someone sitting?\n");
}

TEST(PromptBankTest, SerializeRejectsComma) {
  PromptTemplate tmpl;
  tmpl.overrides["sit"] = "is someone sitting, or not?";
  const PromptBank bank =
      BuildPromptBank(Vocab({{11, "sit"}}), tmpl, Strictness::kStrict);
  std::ostringstream out;
  EXPECT_THROW(SerializePromptBank(bank, out), std::invalid_argument);
  EXPECT_TRUE(out.str().empty());
}

TEST(PromptBankTest, RoundTripProperty) {
  testing::Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 40);
    PromptTemplate tmpl;
    std::vector<ActionClass> classes;
    for (int i = 0; i < n; ++i) {
      const std::string name = "verb" + std::to_string(i) + " thing";
      classes.push_back({static_cast<ActionId>(1 + i * 3), name});
      if (rng() % 4 == 0) tmpl.overrides[name] = "custom " + std::to_string(i) + "?";
    }
    const PromptBank bank =
        BuildPromptBank(Vocab(classes), tmpl, Strictness::kStrict);
    std::ostringstream out;
    SerializePromptBank(bank, out);
    std::istringstream in(out.str());
    EXPECT_EQ(ParsePromptBank(in), bank);
  }
}

TEST(PromptBankTest, ParseErrors) {
  std::istringstream bad_id("x,is someone sitting?\n");
  EXPECT_THROW(ParsePromptBank(bad_id), ParseError);
  std::istringstream dup("1,a?\n1,b?\n");
  try {
    ParsePromptBank(dup);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
  }
}

TEST(PromptBankTest, QuestionOverridesFile) {
  std::istringstream in("answer phone,is someone on the phone?\n\nsit,seated?\n");
  const auto overrides = ParseQuestionOverrides(in);
  ASSERT_EQ(overrides.size(), 2u);
  EXPECT_EQ(overrides.at("answer phone"), "is someone on the phone?");
  std::istringstream bad("sit\n");
  EXPECT_THROW(ParseQuestionOverrides(bad), ParseError);
}

TEST(ScheduleTest, DefaultWindow) {
  EXPECT_EQ(ScheduleConfig{}.FramesPerVideo(), 897);
  const std::vector<std::string> ids = {"vid001"};
  const KeyframeSchedule schedule = BuildSchedule(ids, ScheduleConfig{});
  const auto& stamps = schedule.videos.at("vid001");
  ASSERT_EQ(stamps.size(), 897u);
  EXPECT_EQ(stamps.front(), 902);
  EXPECT_EQ(stamps.back(), 1798);
}

TEST(ScheduleTest, SingleFrameWindow) {
  const std::vector<std::string> ids = {"a"};
  const KeyframeSchedule schedule = BuildSchedule(ids, ScheduleConfig{10, 10, 1});
  EXPECT_EQ(schedule.videos.at("a"), std::vector<Timestamp>{10});
}

TEST(ScheduleTest, FourHundredThirtyVideos) {
  std::vector<std::string> ids;
  for (int i = 0; i < 430; ++i) ids.push_back(testing::SyntheticVideoId(i));
  EXPECT_EQ(BuildSchedule(ids, ScheduleConfig{}).total_keyframes(), 385710);
}

TEST(ScheduleTest, CountMatchesClosedForm) {
  testing::Rng rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    ScheduleConfig config;
    config.start_s = static_cast<Timestamp>(rng() % 2000);
    config.end_s = config.start_s + static_cast<Timestamp>(rng() % 1000);
    config.interval_s = 1 + static_cast<Timestamp>(rng() % 30);
    const int videos = 1 + static_cast<int>(rng() % 5);
    std::vector<std::string> ids;
    for (int i = 0; i < videos; ++i) ids.push_back("v" + std::to_string(i));
    const KeyframeSchedule schedule = BuildSchedule(ids, config);
    const std::int64_t per_video =
        (config.end_s - config.start_s) / config.interval_s + 1;
    EXPECT_EQ(schedule.total_keyframes(), videos * per_video);
    for (const auto& [video, stamps] : schedule.videos) {
      EXPECT_EQ(stamps.front(), config.start_s);
      EXPECT_LE(stamps.back(), config.end_s);
      EXPECT_GT(stamps.back() + config.interval_s, config.end_s);
    }
  }
}

TEST(ScheduleTest, InvalidInputs) {
  const std::vector<std::string> ok = {"a"};
  EXPECT_THROW(BuildSchedule(ok, ScheduleConfig{20, 10, 1}), std::invalid_argument);
  EXPECT_THROW(BuildSchedule(ok, ScheduleConfig{1, 10, 0}), std::invalid_argument);
  EXPECT_THROW(BuildSchedule(ok, ScheduleConfig{-1, 10, 1}), std::invalid_argument);
  EXPECT_THROW(BuildSchedule({}, ScheduleConfig{}), std::invalid_argument);
  const std::vector<std::string> dup = {"a", "b", "a"};
  EXPECT_THROW(BuildSchedule(dup, ScheduleConfig{}), std::invalid_argument);
  const std::vector<std::string> comma = {"a,b"};
  EXPECT_THROW(BuildSchedule(comma, ScheduleConfig{}), std::invalid_argument);
}

TEST(ScheduleTest, SerializeExactRows) {
  const std::vector<std::string> ids = {"vid002", "vid001"};
  std::ostringstream out;
  SerializeSchedule(BuildSchedule(ids, ScheduleConfig{902, 903, 1}), out);
  EXPECT_EQ(out.str(), "vid001,0902\nvid001,0903\nvid002,0902\nvid002,0903\n");
}

}  // namespace
}  // namespace avaeval
