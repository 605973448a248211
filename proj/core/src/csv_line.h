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

// Line-oriented helpers shared by every CSV reader in the library.

#ifndef AVAEVAL_SRC_CSV_LINE_H_
#define AVAEVAL_SRC_CSV_LINE_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace avaeval::internal {

// Reads '\n'-terminated lines, dropping a trailing '\r'. Throws
// std::ios_base::failure if the stream reports an unrecoverable error.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Returns false at end of input.
  bool Next(std::string_view* line);
  std::int64_t line_number() const { return line_number_; }

 private:
  std::istream& in_;
  std::string buffer_;
  std::int64_t line_number_ = 0;
};

// Splits on ',' into `fields`. Returns the number of fields found, which may
// exceed fields.size(); only the first fields.size() are stored.
std::size_t SplitFields(std::string_view line, std::span<std::string_view> fields);

// Whole-field numeric parses; nullopt on any leftover characters.
std::optional<std::int64_t> ParseInteger(std::string_view field);
std::optional<double> ParseDecimal(std::string_view field);

bool ContainsRowBreak(std::string_view text);

}  // namespace avaeval::internal

#endif  // AVAEVAL_SRC_CSV_LINE_H_
