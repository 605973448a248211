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

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

#include "csv_line.h"

namespace avaeval {
namespace {

bool IsVowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

bool IsLetter(char c) { return c >= 'a' && c <= 'z'; }

int VowelGroups(std::string_view word) {
  int groups = 0;
  bool in_group = false;
  for (char c : word) {
    const bool v = IsVowel(c);
    if (v && !in_group) ++groups;
    in_group = v;
  }
  return groups;
}

bool EndsConsonantVowelConsonant(std::string_view w) {
  const std::size_t n = w.size();
  if (n < 3) return false;
  const char last = w[n - 1];
  if (!IsLetter(last) || IsVowel(last) || last == 'w' || last == 'x' ||
      last == 'y') {
    return false;
  }
  return IsVowel(w[n - 2]) && IsLetter(w[n - 3]) && !IsVowel(w[n - 3]);
}

std::string GerundOf(std::string_view verb, const GerundTable& overrides) {
  if (auto it = overrides.find(verb); it != overrides.end()) return it->second;
  return GerundByRule(verb);
}

}  // namespace

void PromptTemplate::Validate() const {
  const std::size_t first = pattern.find(kActionPlaceholder);
  if (first == std::string::npos ||
      pattern.find(kActionPlaceholder, first + 1) != std::string::npos) {
    throw std::invalid_argument(fmt::format(
        "pattern '{}' must contain {} exactly once", pattern, kActionPlaceholder));
  }
  for (const auto& [name, question] : overrides) {
    if (question.empty() || question.back() != '?') {
      throw std::invalid_argument(
          fmt::format("override for '{}' does not end with '?'", name));
    }
  }
}

std::string GerundByRule(std::string_view verb) {
  std::string out(verb);
  const std::size_t n = out.size();
  if (n >= 2 && out.ends_with("ie")) {
    out.resize(n - 2);
    return out + "ying";
  }
  if (n >= 2 && out.back() == 'e' && IsLetter(out[n - 2]) && !IsVowel(out[n - 2])) {
    out.pop_back();
    return out + "ing";
  }
  if (VowelGroups(out) == 1 && EndsConsonantVowelConsonant(out)) {
    return out + out.back() + "ing";
  }
  return out + "ing";
}

std::string Gerundize(std::string_view phrase, const GerundTable& overrides) {
  const std::size_t space = phrase.find(' ');
  const std::string_view head = phrase.substr(0, space);
  if (head.empty()) {
    throw std::invalid_argument("cannot form a gerund from an empty phrase");
  }
  std::string out;
  std::size_t start = 0;
  while (true) {
    const std::size_t slash = head.find('/', start);
    out += GerundOf(head.substr(start, slash - start), overrides);
    if (slash == std::string_view::npos) break;
    out += '/';
    start = slash + 1;
  }
  if (space != std::string_view::npos) out += phrase.substr(space);
  return out;
}

const GerundTable& BuiltinGerunds() {
  static const GerundTable* table = new GerundTable{
      {"answer", "answering"},   {"bend", "bending"},
      {"bow", "bowing"},         {"brush", "brushing"},
      {"carry", "carrying"},     {"catch", "catching"},
      {"chop", "chopping"},      {"climb", "climbing"},
      {"clink", "clinking"},     {"close", "closing"},
      {"cook", "cooking"},       {"crawl", "crawling"},
      {"crouch", "crouching"},   {"cut", "cutting"},
      {"dance", "dancing"},      {"dig", "digging"},
      {"dress", "dressing"},     {"drink", "drinking"},
      {"drive", "driving"},      {"eat", "eating"},
      {"enter", "entering"},     {"exit", "exiting"},
      {"extract", "extracting"}, {"fall", "falling"},
      {"fight", "fighting"},     {"fishing", "fishing"},
      {"get", "getting"},        {"give", "giving"},
      {"grab", "grabbing"},      {"hit", "hitting"},
      {"hold", "holding"},       {"hug", "hugging"},
      {"jog", "jogging"},        {"jump", "jumping"},
      {"kick", "kicking"},       {"kiss", "kissing"},
      {"kneel", "kneeling"},     {"leap", "leaping"},
      {"lift", "lifting"},       {"listen", "listening"},
      {"look", "looking"},       {"open", "opening"},
      {"paint", "painting"},     {"pick", "picking"},
      {"play", "playing"},       {"point", "pointing"},
      {"press", "pressing"},     {"pull", "pulling"},
      {"push", "pushing"},       {"put", "putting"},
      {"read", "reading"},       {"ride", "riding"},
      {"row", "rowing"},         {"run", "running"},
      {"sail", "sailing"},       {"serve", "serving"},
      {"shoot", "shooting"},     {"shovel", "shoveling"},
      {"sing", "singing"},       {"sit", "sitting"},
      {"sleep", "sleeping"},     {"smoke", "smoking"},
      {"stand", "standing"},     {"stir", "stirring"},
      {"swim", "swimming"},      {"take", "taking"},
      {"talk", "talking"},       {"text", "texting"},
      {"throw", "throwing"},     {"touch", "touching"},
      {"turn", "turning"},       {"walk", "walking"},
      {"watch", "watching"},     {"work", "working"},
      {"write", "writing"},
  };
  return *table;
}

const std::map<std::string, std::string, std::less<>>& BuiltinQuestions() {
  static const auto* table = new std::map<std::string, std::string, std::less<>>{
      {"answer phone", "is someone answering the phone?"},
      {"hand clap", "is someone clapping hands?"},
      {"hand shake", "is someone shaking hands?"},
      {"hand wave", "is someone waving a hand?"},
      {"martial art", "is someone doing martial arts?"},
      {"text on/look at a cellphone",
       "is someone texting on or looking at a cellphone?"},
  };
  return *table;
}

PromptBank BuildPromptBank(const ActionVocabulary& vocab,
                           const PromptTemplate& prompt_template,
                           Strictness strictness) {
  prompt_template.Validate();

  PromptBank bank;
  bank.pattern = prompt_template.pattern;
  for (const auto& [name, question] : prompt_template.overrides) {
    if (vocab.FindByName(name) != nullptr) continue;
    const std::string message =
        fmt::format("override '{}' names no vocabulary class", name);
    if (strictness == Strictness::kStrict) throw std::invalid_argument(message);
    bank.warnings.push_back(message);
  }

  GerundTable gerunds = prompt_template.gerund_overrides;
  if (prompt_template.use_builtin_tables) {
    gerunds.insert(BuiltinGerunds().begin(), BuiltinGerunds().end());
  }

  const std::size_t slot = prompt_template.pattern.find(kActionPlaceholder);
  std::map<std::string, ActionId, std::less<>> seen;
  for (const ActionClass& c : vocab.classes()) {
    std::string question;
    if (auto it = prompt_template.overrides.find(c.name);
        it != prompt_template.overrides.end()) {
      question = it->second;
    } else if (auto builtin = BuiltinQuestions().find(c.name);
               prompt_template.use_builtin_tables &&
               builtin != BuiltinQuestions().end()) {
      question = builtin->second;
    } else {
      question = prompt_template.pattern;
      question.replace(slot, kActionPlaceholder.size(), Gerundize(c.name, gerunds));
    }
    if (question.empty() || question.back() != '?') {
      throw std::invalid_argument(
          fmt::format("question for '{}' does not end with '?'", c.name));
    }
    if (auto [it, inserted] = seen.emplace(question, c.id); !inserted) {
      throw std::invalid_argument(fmt::format(
          "classes {} and {} share the question '{}'", it->second, c.id, question));
    }
    bank.entries.emplace(c.id, std::move(question));
  }
  return bank;
}

void SerializePromptBank(const PromptBank& bank, std::ostream& out) {
  for (const auto& [id, question] : bank.entries) {
    if (internal::ContainsRowBreak(question)) {
      throw std::invalid_argument(fmt::format(
          "question '{}' for class {} contains a comma or line break; rephrase "
          "the override",
          question, id));
    }
  }
  for (const auto& [id, question] : bank.entries) {
    out << id << ',' << question << '\n';
  }
}

PromptBank ParsePromptBank(std::istream& in) {
  internal::LineReader reader(in);
  std::string_view line;
  PromptBank bank;
  while (reader.Next(&line)) {
    if (line.empty()) continue;
    std::array<std::string_view, 2> fields;
    const std::size_t n = internal::SplitFields(line, fields);
    const auto id = n == 2 ? internal::ParseInteger(fields[0]) : std::nullopt;
    if (!id || *id < 1 || fields[1].empty()) {
      throw ParseError(reader.line_number(), "expected 'action_id,question'");
    }
    if (!bank.entries.emplace(static_cast<ActionId>(*id), std::string(fields[1]))
             .second) {
      throw ParseError(reader.line_number(),
                       fmt::format("duplicate action id {}", *id));
    }
  }
  return bank;
}

std::map<std::string, std::string, std::less<>> ParseQuestionOverrides(
    std::istream& in) {
  internal::LineReader reader(in);
  std::string_view line;
  std::map<std::string, std::string, std::less<>> overrides;
  while (reader.Next(&line)) {
    if (line.empty()) continue;
    std::array<std::string_view, 2> fields;
    const std::size_t n = internal::SplitFields(line, fields);
    if (n != 2 || fields[0].empty() || fields[1].empty()) {
      throw ParseError(reader.line_number(), "expected 'name,question'");
    }
    overrides.insert_or_assign(std::string(fields[0]), std::string(fields[1]));
  }
  return overrides;
}

void ScheduleConfig::Validate() const {
  if (start_s < 0) {
    throw std::invalid_argument(fmt::format("start {} is negative", start_s));
  }
  if (start_s > end_s) {
    throw std::invalid_argument(
        fmt::format("start {} is after end {}", start_s, end_s));
  }
  if (interval_s < 1) {
    throw std::invalid_argument(
        fmt::format("interval {} must be at least 1", interval_s));
  }
}

std::int64_t ScheduleConfig::FramesPerVideo() const {
  return (static_cast<std::int64_t>(end_s) - start_s) / interval_s + 1;
}

std::int64_t KeyframeSchedule::total_keyframes() const {
  std::int64_t total = 0;
  for (const auto& [video, stamps] : videos) {
    total += static_cast<std::int64_t>(stamps.size());
  }
  return total;
}

KeyframeSchedule BuildSchedule(std::span<const std::string> video_ids,
                               const ScheduleConfig& config) {
  config.Validate();
  if (video_ids.empty()) throw std::invalid_argument("no videos to schedule");

  std::vector<Timestamp> stamps;
  stamps.reserve(static_cast<std::size_t>(config.FramesPerVideo()));
  for (std::int64_t t = config.start_s; t <= config.end_s; t += config.interval_s) {
    stamps.push_back(static_cast<Timestamp>(t));
  }

  KeyframeSchedule schedule;
  for (const std::string& id : video_ids) {
    if (id.empty() || internal::ContainsRowBreak(id)) {
      throw std::invalid_argument(fmt::format("invalid video id '{}'", id));
    }
    if (!schedule.videos.emplace(id, stamps).second) {
      throw std::invalid_argument(fmt::format("duplicate video id '{}'", id));
    }
  }
  return schedule;
}

void SerializeSchedule(const KeyframeSchedule& schedule, std::ostream& out) {
  for (const auto& [video, stamps] : schedule.videos) {
    for (Timestamp t : stamps) out << fmt::format("{},{:04d}\n", video, t);
  }
}

}  // namespace avaeval
