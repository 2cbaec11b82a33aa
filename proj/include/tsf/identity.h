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

#ifndef TSF_IDENTITY_H_
#define TSF_IDENTITY_H_

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tsf/synthpop.h"
#include "tsf/types.h"

namespace tsf {

class EncodingError : public Error {
 public:
  using Error::Error;
};

class LinkageError : public Error {
 public:
  using Error::Error;
};

// Pseudonymous identification code: the first three letters of the first
// name, the first three letters of the surname and the last four phone
// digits, e.g. "MARPOP3456". Short names are padded with '_'; a missing or
// short phone becomes "XXXX".
struct AliasCode {
  std::array<char, 3> name3{'_', '_', '_'};
  std::array<char, 3> surname3{'_', '_', '_'};
  std::array<char, 4> phone4{'X', 'X', 'X', 'X'};

  static constexpr char kPad = '_';
  static constexpr std::string_view kMissingPhone = "XXXX";

  std::string Render() const;
  static AliasCode Parse(std::string_view rendered);  // throws ParseError

  bool has_phone() const { return phone4[0] != 'X'; }
  // The six-character letter block.
  std::string letters() const;
  std::string_view phone() const { return {phone4.data(), phone4.size()}; }

  auto operator<=>(const AliasCode&) const = default;
  bool operator==(const AliasCode&) const = default;
};

// Folds diacritics to ASCII and uppercases; throws EncodingError when the
// first name has no letters.
AliasCode EncodeAlias(std::string_view first_name, std::string_view last_name,
                      std::optional<std::string_view> phone);

using ObsId = std::uint32_t;
using EntityId = std::uint32_t;

enum class ObservationSource : std::uint8_t {
  kRespondent = 0,
  kReferral = 1,
  kAlter = 2,
};
std::string_view ToString(ObservationSource s);
ObservationSource ParseObservationSource(std::string_view s);

// One mention of a person in the fieldwork data. Validation attributes may
// be absent; absent is consistent with anything.
struct ObservationRecord {
  ObsId id = 0;
  ObservationSource source = ObservationSource::kRespondent;
  AliasCode alias;
  std::optional<Sex> sex;
  std::optional<Site> residence;
  std::optional<std::uint8_t> occupation;  // index into kWorkStatuses
  std::optional<std::uint8_t> religion;    // index into kReligions
  std::optional<ObsId> reporting_respondent;

  bool operator==(const ObservationRecord&) const = default;
};

struct LinkPolicy {
  bool require_attribute_consistency = true;
  // 0: exact alias match only. 1: aliases one letter apart with the same
  // phone digits are merge candidates.
  int fuzzy_edit_distance = 0;
};

struct EntityProfile {
  std::optional<Sex> sex;
  std::optional<Site> residence;
  std::optional<std::uint8_t> occupation;
  std::optional<std::uint8_t> religion;
  AliasCode alias;  // alias of the lowest observation id
  std::size_t num_observations = 0;
};

class EntityPartition {
 public:
  EntityPartition() = default;
  EntityPartition(std::vector<std::pair<ObsId, EntityId>> mapping,
                  std::vector<EntityProfile> profiles);

  // Throws LinkageError naming the observation when it is not mapped.
  EntityId EntityOf(ObsId obs) const;
  bool Contains(ObsId obs) const;
  std::size_t num_entities() const { return profiles_.size(); }
  std::size_t num_observations() const { return mapping_.size(); }
  const std::vector<std::pair<ObsId, EntityId>>& mapping() const {
    return mapping_;
  }
  const EntityProfile& profile(EntityId e) const { return profiles_.at(e); }
  const std::vector<EntityProfile>& profiles() const { return profiles_; }

 private:
  std::vector<std::pair<ObsId, EntityId>> mapping_;  // sorted by ObsId
  std::vector<EntityProfile> profiles_;
};

enum class ConflictReason : std::uint8_t {
  kSameCodeDifferentPeople = 0,
  kDifferentCodesSamePersonSuspected = 1,
};
std::string_view ToString(ConflictReason r);

// What the linker did with the conflicting observations.
enum class ConflictResolution : std::uint8_t {
  kSplit = 0,           // hard contradiction: kept as distinct entities
  kMergedForReview = 1, // merged, but the evidence is weak or disagrees
  kUnresolved = 2,      // could belong to several entities; left alone
  kNotMerged = 3,       // near-miss codes that were left apart
  kMerged = 4,          // near-miss codes merged by the fuzzy rule
};
std::string_view ToString(ConflictResolution r);

struct Conflict {
  std::string alias;  // rendered; "A|B" for near-miss pairs
  std::vector<ObsId> observations;
  ConflictReason reason = ConflictReason::kSameCodeDifferentPeople;
  ConflictResolution resolution = ConflictResolution::kSplit;
};

struct ConflictReport {
  std::vector<Conflict> conflicts;
  std::size_t Count(ConflictReason reason) const;
  // True when the rendered alias occurs in any same-code conflict.
  bool Flags(const AliasCode& alias) const;
};

struct LinkResult {
  EntityPartition partition;
  ConflictReport conflicts;
};

// Resolves observations into entities. Identical aliases merge unless a
// hard contradiction separates them: different reported sex or residence,
// two interviews, two mentions by the same respondent in the same role, or a
// respondent named by themselves.
// Output does not depend on the order of `observations`.
LinkResult LinkRecords(std::span<const ObservationRecord> observations,
                       const LinkPolicy& policy);

struct LinkageMetrics {
  // Present only when ground truth was supplied.
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<std::size_t> merge_errors;  // entities spanning >1 person
  std::optional<std::size_t> split_errors;  // persons spanning >1 entity
  std::size_t same_code_conflicts = 0;
  std::size_t suspected_duplicates = 0;
};

// Pairwise precision/recall of the partition against the true person of
// each observation. Observations missing from `truth` are ignored.
LinkageMetrics AuditConflicts(const EntityPartition& partition,
                              const ConflictReport& conflicts,
                              const std::map<ObsId, PersonId>* truth);

}  // namespace tsf

#endif  // TSF_IDENTITY_H_
