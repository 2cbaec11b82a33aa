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

#include "tsf/csv.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "tsf/types.h"

namespace tsf {
namespace {

bool NeedsQuoting(std::string_view f) {
  return f.find_first_of(",\"\n\r") != std::string_view::npos;
}

}  // namespace

CsvWriter::CsvWriter(std::vector<std::string> header) : width_(header.size()) {
  AppendRecord(header);
}

void CsvWriter::AddRow(std::vector<std::string> fields) {
  if (fields.size() != width_) {
    throw Error(fmt::format("CsvWriter: row has {} fields, header has {}",
                            fields.size(), width_));
  }
  AppendRecord(fields);
  ++rows_;
}

void CsvWriter::AppendRecord(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) text_ += ',';
    const std::string& f = fields[i];
    if (NeedsQuoting(f)) {
      text_ += '"';
      for (char c : f) {
        if (c == '"') text_ += '"';
        text_ += c;
      }
      text_ += '"';
    } else {
      text_ += f;
    }
  }
  text_ += '\n';
}

CsvTable CsvTable::Parse(std::string_view text, const std::string& source) {
  CsvTable t;
  t.source_ = source;
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> rec;
  std::string field;
  bool in_quotes = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      in_quotes = true;
      any = true;
    } else if (c == ',') {
      rec.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\r') {
      // tolerated on input; never written
    } else if (c == '\n') {
      rec.push_back(std::move(field));
      field.clear();
      records.push_back(std::move(rec));
      rec.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (in_quotes) throw ParseError(source + ": unterminated quoted field");
  if (any || !field.empty()) {
    rec.push_back(std::move(field));
    records.push_back(std::move(rec));
  }
  if (records.empty()) throw ParseError(source + ": missing header row");
  t.header_ = std::move(records.front());
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != t.header_.size()) {
      throw ParseError(fmt::format("{}: line {} has {} fields, expected {}",
                                   source, r + 1, records[r].size(),
                                   t.header_.size()));
    }
    t.rows_.push_back(std::move(records[r]));
  }
  return t;
}

CsvTable CsvTable::Read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return Parse(ss.str(), path.filename().string());
}

std::size_t CsvTable::Column(std::string_view name) const {
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (header_[i] == name) return i;
  }
  throw ParseError(fmt::format("{}: missing column '{}'", source_, name));
}

void CsvTable::RequireHeader(
    std::initializer_list<std::string_view> expected) const {
  bool ok = expected.size() == header_.size();
  std::size_t i = 0;
  for (auto e : expected) {
    if (!ok) break;
    ok = header_[i++] == e;
  }
  if (!ok) throw ParseError(source_ + ": unexpected header");
}

std::string FormatDouble(double v) {
  if (std::isnan(v)) return "NA";
  return fmt::format("{}", v);
}

std::string FormatFixed(double v, int decimals) {
  if (std::isnan(v)) return "NA";
  return fmt::format("{:.{}f}", v, decimals);
}

double ParseDouble(std::string_view s, std::string_view what) {
  if (s == "NA") return std::nan("");
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(fmt::format("{}: not a number '{}'", what, s));
  }
  return v;
}

long long ParseInt(std::string_view s, std::string_view what) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(fmt::format("{}: not an integer '{}'", what, s));
  }
  return v;
}

}  // namespace tsf
