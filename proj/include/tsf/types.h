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

#ifndef TSF_TYPES_H_
#define TSF_TYPES_H_

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tsf {

// Where a person currently lives. "Origin" and "destination" are the two
// fieldwork sites of the migration corridor; "other" is anywhere else.
enum class Site : std::uint8_t { kOrigin = 0, kDestination = 1, kOther = 2 };
inline constexpr std::array<Site, 3> kAllSites = {Site::kOrigin,
                                                  Site::kDestination,
                                                  Site::kOther};
inline constexpr int kNumSites = 3;

enum class Sex : std::uint8_t { kFemale = 0, kMale = 1 };

enum class MigrantType : std::uint8_t {
  kMigrant = 0,
  kReturnee = 1,
  kNonMigrant = 2,
};

enum class TieKind : std::uint8_t { kKin = 0, kFriend = 1, kAcquaintance = 2 };

inline int Index(Site s) { return static_cast<int>(s); }
inline int Index(Sex s) { return static_cast<int>(s); }

// Fieldwork sites only; "other" is never a sampling site.
inline Site OtherFieldSite(Site s) {
  return s == Site::kOrigin ? Site::kDestination : Site::kOrigin;
}

std::string_view ToString(Site s);
std::string_view ToString(Sex s);
std::string_view ToString(MigrantType m);
std::string_view ToString(TieKind k);

// Parsers throw ParseError on unknown tokens.
Site ParseSite(std::string_view s);
Sex ParseSex(std::string_view s);
MigrantType ParseMigrantType(std::string_view s);
TieKind ParseTieKind(std::string_view s);

// Empty token maps to nullopt; anything else must parse.
std::optional<Site> ParseOptionalSite(std::string_view s);
std::optional<Sex> ParseOptionalSex(std::string_view s);

// Categorical attribute vocabularies. Populations store indices into these.
inline constexpr std::array<std::string_view, 8> kReligions = {
    "orthodox", "reformed", "pentecostal", "baptist",
    "adventist", "catholic", "other", "none"};
inline constexpr std::array<std::string_view, 11> kEducationLevels = {
    "none",        "lt4years",       "4years",    "5to8years",
    "8years_cert", "10years_diploma", "hs_no_diploma", "hs_diploma",
    "post_hs",     "ba",             "ma_phd"};
inline constexpr std::array<std::string_view, 7> kWorkStatuses = {
    "employed", "self_employed", "unemployed", "retired",
    "student",  "inactive",      "other"};
inline constexpr std::array<std::string_view, 7> kMaritalStatuses = {
    "married",   "single",  "stable_relationship", "divorced",
    "widowed",   "separated", "other"};

// Base class for all library errors; the CLI maps these onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace tsf

#endif  // TSF_TYPES_H_
