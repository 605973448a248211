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

#include "csv_line.h"

#include <charconv>
#include <istream>
#include <system_error>

namespace avaeval::internal {

bool LineReader::Next(std::string_view* line) {
  if (!std::getline(in_, buffer_)) {
    if (in_.bad()) {
      throw std::ios_base::failure("read error after line " +
                                   std::to_string(line_number_));
    }
    return false;
  }
  ++line_number_;
  std::string_view view(buffer_);
  if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
  *line = view;
  return true;
}

std::size_t SplitFields(std::string_view line,
                        std::span<std::string_view> fields) {
  std::size_t count = 0;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    const std::size_t end = comma == std::string_view::npos ? line.size() : comma;
    if (count < fields.size()) fields[count] = line.substr(start, end - start);
    ++count;
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return count;
}

std::optional<std::int64_t> ParseInteger(std::string_view field) {
  std::int64_t value = 0;
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

std::optional<double> ParseDecimal(std::string_view field) {
  double value = 0.0;
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end) return std::nullopt;
  // Normalizes -0.0.
  return value + 0.0;
}

bool ContainsRowBreak(std::string_view text) {
  return text.find_first_of(",\n\r") != std::string_view::npos;
}

}  // namespace avaeval::internal
