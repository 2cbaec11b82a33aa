// Copyright 2026 The tsfnet Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TSF_CSV_H_
#define TSF_CSV_H_

#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace tsf {

// Minimal RFC 4180 CSV. Output always uses LF line endings so that file
// hashes do not depend on the platform.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  void AddRow(std::vector<std::string> fields);
  std::size_t num_rows() const { return rows_; }
  const std::string& str() const { return text_; }

 private:
  void AppendRecord(const std::vector<std::string>& fields);

  std::size_t width_;
  std::size_t rows_ = 0;
  std::string text_;
};

class CsvTable {
 public:
  static CsvTable Parse(std::string_view text, const std::string& source);
  static CsvTable Read(const std::filesystem::path& path);

  const std::vector<std::string>& header() const { return header_; }
  std::size_t num_rows() const { return rows_.size(); }
  const std::vector<std::string>& row(std::size_t i) const { return rows_[i]; }

  // Column index by name; throws ParseError naming the file when absent.
  std::size_t Column(std::string_view name) const;
  // Throws ParseError unless the header matches exactly.
  void RequireHeader(std::initializer_list<std::string_view> expected) const;

 private:
  std::string source_;
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// Locale-independent numeric formatting with round-trip precision.
std::string FormatDouble(double v);
std::string FormatFixed(double v, int decimals);
double ParseDouble(std::string_view s, std::string_view what);
long long ParseInt(std::string_view s, std::string_view what);

}  // namespace tsf

#endif  // TSF_CSV_H_
