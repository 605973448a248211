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

// Question bank and keyframe schedule that drive model inference: one
// yes/no question per action class, asked at every scheduled keyframe.

#ifndef AVAEVAL_PROMPT_SCHEDULE_H_
#define AVAEVAL_PROMPT_SCHEDULE_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "avaeval/ava_data.h"

namespace avaeval {

using GerundTable = std::map<std::string, std::string, std::less<>>;

inline constexpr std::string_view kActionPlaceholder = "{action}";

struct PromptTemplate {
  std::string pattern = "is someone {action}?";
  // Class name -> complete question. Takes precedence over the pattern.
  std::map<std::string, std::string, std::less<>> overrides;
  // Verb -> gerund, consulted before the built-in table and the rules.
  GerundTable gerund_overrides;
  // Consult the shipped question and gerund tables for AVA class names.
  bool use_builtin_tables = true;

  // Throws std::invalid_argument unless the pattern holds the placeholder
  // exactly once and every override ends with '?'.
  void Validate() const;
};

// Gerund of a single verb by spelling rules alone:
//   consonant + "e"          -> drop "e"      (dance -> dancing)
//   "ie"                      -> "ying"        (lie -> lying)
//   one-syllable C-V-C        -> double final  (sit -> sitting)
//   otherwise                 -> append "ing"  (sleep -> sleeping)
std::string GerundByRule(std::string_view verb);

// Rewrites the leading verb of a phrase into its gerund; later tokens are
// kept as-is. Slash alternatives in the verb ("run/jog") are each
// converted. `overrides` is consulted per verb before the rules. Throws
// std::invalid_argument on an empty phrase.
std::string Gerundize(std::string_view phrase, const GerundTable& overrides);

// Shipped tables covering the 80 AVA v2.2 class names.
const GerundTable& BuiltinGerunds();
const std::map<std::string, std::string, std::less<>>& BuiltinQuestions();

struct PromptBank {
  std::map<ActionId, std::string> entries;
  std::string pattern;
  // Lenient-mode notes, e.g. overrides naming unknown classes.
  std::vector<std::string> warnings;

  friend bool operator==(const PromptBank& a, const PromptBank& b) {
    return a.entries == b.entries;
  }
};

// Throws std::invalid_argument for an invalid template, a question that is
// not unique, or (strict mode) an override naming a class missing from the
// vocabulary.
PromptBank BuildPromptBank(const ActionVocabulary& vocab,
                           const PromptTemplate& prompt_template,
                           Strictness strictness);

// `action_id,question` rows in ascending id order. Throws
// std::invalid_argument if a question contains a comma.
void SerializePromptBank(const PromptBank& bank, std::ostream& out);
PromptBank ParsePromptBank(std::istream& in);

// Reads `name,question` override rows.
std::map<std::string, std::string, std::less<>> ParseQuestionOverrides(
    std::istream& in);

struct ScheduleConfig {
  Timestamp start_s = 902;
  Timestamp end_s = 1798;  // inclusive
  Timestamp interval_s = 1;

  // Throws std::invalid_argument unless start_s <= end_s, interval_s >= 1
  // and start_s >= 0.
  void Validate() const;
  // floor((end_s - start_s) / interval_s) + 1
  std::int64_t FramesPerVideo() const;
};

struct KeyframeSchedule {
  std::map<std::string, std::vector<Timestamp>> videos;

  std::int64_t total_keyframes() const;
};

// Throws std::invalid_argument on an empty list, duplicate or malformed
// video ids, or an invalid config.
KeyframeSchedule BuildSchedule(std::span<const std::string> video_ids,
                               const ScheduleConfig& config);

// `video_id,timestamp` rows ordered by video then timestamp, timestamps
// zero-padded to 4 digits.
void SerializeSchedule(const KeyframeSchedule& schedule, std::ostream& out);

}  // namespace avaeval

#endif  // AVAEVAL_PROMPT_SCHEDULE_H_
