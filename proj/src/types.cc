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

#include "tsf/types.h"

#include <string>

namespace tsf {

std::string_view ToString(Site s) {
  switch (s) {
    case Site::kOrigin:
      return "origin";
    case Site::kDestination:
      return "destination";
    case Site::kOther:
      return "other";
  }
  return "?";
}

std::string_view ToString(Sex s) { return s == Sex::kFemale ? "F" : "M"; }

std::string_view ToString(MigrantType m) {
  switch (m) {
    case MigrantType::kMigrant:
      return "migrant";
    case MigrantType::kReturnee:
      return "returnee";
    case MigrantType::kNonMigrant:
      return "non_migrant";
  }
  return "?";
}

std::string_view ToString(TieKind k) {
  switch (k) {
    case TieKind::kKin:
      return "kin";
    case TieKind::kFriend:
      return "friend";
    case TieKind::kAcquaintance:
      return "acquaintance";
  }
  return "?";
}

Site ParseSite(std::string_view s) {
  if (s == "origin") return Site::kOrigin;
  if (s == "destination") return Site::kDestination;
  if (s == "other") return Site::kOther;
  throw ParseError("unknown site '" + std::string(s) + "'");
}

Sex ParseSex(std::string_view s) {
  if (s == "F") return Sex::kFemale;
  if (s == "M") return Sex::kMale;
  throw ParseError("unknown sex '" + std::string(s) + "'");
}

MigrantType ParseMigrantType(std::string_view s) {
  if (s == "migrant") return MigrantType::kMigrant;
  if (s == "returnee") return MigrantType::kReturnee;
  if (s == "non_migrant") return MigrantType::kNonMigrant;
  throw ParseError("unknown migrant type '" + std::string(s) + "'");
}

TieKind ParseTieKind(std::string_view s) {
  if (s == "kin") return TieKind::kKin;
  if (s == "friend") return TieKind::kFriend;
  if (s == "acquaintance") return TieKind::kAcquaintance;
  throw ParseError("unknown tie kind '" + std::string(s) + "'");
}

std::optional<Site> ParseOptionalSite(std::string_view s) {
  if (s.empty()) return std::nullopt;
  return ParseSite(s);
}

std::optional<Sex> ParseOptionalSex(std::string_view s) {
  if (s.empty()) return std::nullopt;
  return ParseSex(s);
}

}  // namespace tsf
