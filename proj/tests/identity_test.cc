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

#include "tsf/identity.h"

#include <algorithm>
#include <map>
#include <set>

#include <gtest/gtest.h>

#include "tsf/fieldwork.h"
#include "tsf/rng.h"
#include "tsf/synthpop.h"

namespace tsf {
namespace {

TEST(EncodeAlias, Examples) {
  EXPECT_EQ(EncodeAlias("Maria", "Popescu", "+40 722 123 456").Render(), "MARPOP3456");
  EXPECT_EQ(EncodeAlias("Io", "Pop", std::nullopt).Render(), "IO_POPXXXX");
  EXPECT_EQ(EncodeAlias("Ștefan", "Bălan", "0711223344").Render(), "STEBAL3344");
  EXPECT_EQ(EncodeAlias("Ana", "Ion", "12").Render(), "ANAIONXXXX");
  EXPECT_THROW(EncodeAlias("", "Pop", std::nullopt), EncodingError);
}

TEST(EncodeAlias, RenderParseRoundTrip) {
  for (const char* s : {"MARPOP3456", "IO_POPXXXX", "A__B__0001"}) {
    EXPECT_EQ(AliasCode::Parse(s).Render(), s);
  }
  EXPECT_THROW(AliasCode::Parse("MARPOP345"), ParseError);
  EXPECT_THROW(AliasCode::Parse("mArPOP3456"), ParseError);
}

ObservationRecord Obs(ObsId id, std::string_view alias, std::optional<Sex> sex,
                      std::optional<Site> site,
                      ObservationSource source = ObservationSource::kAlter,
                      std::optional<ObsId> reporter = std::nullopt) {
  ObservationRecord o;
  o.id = id;
  o.alias = AliasCode::Parse(alias);
  o.sex = sex;
  o.residence = site;
  o.source = source;
  o.reporting_respondent = reporter;
  return o;
}

TEST(LinkRecords, ExactMatchMerges) {
  std::vector<ObservationRecord> obs = {
      Obs(1, "MARPOP3456", Sex::kFemale, Site::kDestination, ObservationSource::kAlter, 10),
      Obs(2, "MARPOP3456", Sex::kFemale, Site::kDestination, ObservationSource::kAlter, 11)};
  auto r = LinkRecords(obs, {});
  EXPECT_EQ(r.partition.num_entities(), 1u);
  EXPECT_EQ(r.partition.EntityOf(1), r.partition.EntityOf(2));
  EXPECT_TRUE(r.conflicts.conflicts.empty());
}

TEST(LinkRecords, SexContradictionSplitsAndReports) {
  std::vector<ObservationRecord> obs = {
      Obs(1, "MARPOP3456", Sex::kFemale, Site::kDestination, ObservationSource::kAlter, 10),
      Obs(2, "MARPOP3456", Sex::kMale, Site::kDestination, ObservationSource::kAlter, 11)};
  auto r = LinkRecords(obs, {});
  EXPECT_EQ(r.partition.num_entities(), 2u);
  EXPECT_EQ(r.conflicts.Count(ConflictReason::kSameCodeDifferentPeople), 1u);
  EXPECT_TRUE(r.conflicts.Flags(AliasCode::Parse("MARPOP3456")));
}

TEST(LinkRecords, TwoInterviewsNeverMerge) {
  std::vector<ObservationRecord> obs = {
      Obs(1, "MARPOP3456", Sex::kFemale, Site::kOrigin, ObservationSource::kRespondent),
      Obs(2, "MARPOP3456", Sex::kFemale, Site::kOrigin, ObservationSource::kRespondent)};
  EXPECT_EQ(LinkRecords(obs, {}).partition.num_entities(), 2u);
}

TEST(LinkRecords, RespondentCannotNameThemselves) {
  std::vector<ObservationRecord> obs = {
      Obs(1, "MARPOP3456", Sex::kFemale, Site::kOrigin, ObservationSource::kRespondent),
      Obs(2, "MARPOP3456", Sex::kFemale, Site::kOrigin, ObservationSource::kAlter, 1)};
  auto r = LinkRecords(obs, {});
  EXPECT_EQ(r.partition.num_entities(), 2u);
  EXPECT_EQ(r.conflicts.Count(ConflictReason::kSameCodeDifferentPeople), 1u);
}

TEST(LinkRecords, MissingAttributesAreConsistent) {
  std::vector<ObservationRecord> obs = {
      Obs(1, "MARPOP3456", Sex::kFemale, Site::kOrigin, ObservationSource::kAlter, 9),
      Obs(2, "MARPOP3456", std::nullopt, std::nullopt, ObservationSource::kReferral, 8)};
  EXPECT_EQ(LinkRecords(obs, {}).partition.num_entities(), 1u);
}

TEST(LinkRecords, MissingPhoneMergeIsQueuedForReview) {
  std::vector<ObservationRecord> obs = {
      Obs(1, "MARPOPXXXX", Sex::kFemale, Site::kOrigin, ObservationSource::kAlter, 9),
      Obs(2, "MARPOPXXXX", Sex::kFemale, Site::kOrigin, ObservationSource::kAlter, 8)};
  auto r = LinkRecords(obs, {});
  EXPECT_EQ(r.partition.num_entities(), 1u);
  ASSERT_EQ(r.conflicts.conflicts.size(), 1u);
  EXPECT_EQ(r.conflicts.conflicts[0].resolution, ConflictResolution::kMergedForReview);
}

TEST(LinkRecords, FuzzyNearMissNeedsPhoneAndConsistency) {
  std::vector<ObservationRecord> obs = {
      Obs(1, "MARPOP3456", Sex::kFemale, Site::kOrigin, ObservationSource::kAlter, 9),
      Obs(2, "MAXPOP3456", Sex::kFemale, Site::kOrigin, ObservationSource::kAlter, 8),
      Obs(3, "MAXPOX3456", Sex::kFemale, Site::kOrigin, ObservationSource::kAlter, 7),
      Obs(4, "ANAPOPXXXX", Sex::kFemale, Site::kOrigin, ObservationSource::kAlter, 7),
      Obs(5, "ANBPOPXXXX", Sex::kFemale, Site::kOrigin, ObservationSource::kAlter, 6)};
  auto exact = LinkRecords(obs, {});
  EXPECT_EQ(exact.partition.num_entities(), 5u);
  EXPECT_GE(exact.conflicts.Count(ConflictReason::kDifferentCodesSamePersonSuspected), 2u);
  LinkPolicy fuzzy;
  fuzzy.fuzzy_edit_distance = 1;
  auto r = LinkRecords(obs, fuzzy);
  // 1~2 and 2~3 chain transitively; the XXXX pair is never a candidate.
  EXPECT_EQ(r.partition.EntityOf(1), r.partition.EntityOf(3));
  EXPECT_NE(r.partition.EntityOf(4), r.partition.EntityOf(5));
  EXPECT_EQ(r.partition.num_entities(), 3u);

  obs[1].sex = Sex::kMale;
  auto blocked = LinkRecords(obs, fuzzy);
  EXPECT_NE(blocked.partition.EntityOf(1), blocked.partition.EntityOf(2));
}

TEST(LinkRecords, InvariantToInputOrder) {
  std::vector<ObservationRecord> obs;
  Rng rng(4);
  const char* aliases[] = {"MARPOP3456", "MARPOPXXXX", "IONION1111", "MAXPOP3456"};
  for (ObsId i = 0; i < 40; ++i) {
    auto sex = rng.Bernoulli(0.2) ? std::optional<Sex>() :
               std::optional<Sex>(rng.Bernoulli(0.5) ? Sex::kFemale : Sex::kMale);
    obs.push_back(Obs(i, aliases[rng.Index(4)], sex, Site::kOrigin,
                      ObservationSource::kAlter, 100 + static_cast<ObsId>(rng.Index(5))));
  }
  LinkPolicy fuzzy;
  fuzzy.fuzzy_edit_distance = 1;
  auto base = LinkRecords(obs, fuzzy);
  for (int k = 0; k < 5; ++k) {
    rng.Shuffle(obs);
    auto r = LinkRecords(obs, fuzzy);
    EXPECT_EQ(r.partition.mapping(), base.partition.mapping());
    EXPECT_EQ(r.conflicts.conflicts.size(), base.conflicts.conflicts.size());
  }
}

TEST(LinkRecords, ZeroNoiseRoundTripMatchesTruthOracle) {
  // Unique triples: every person observed two or three times.
  PopulationConfig c = PresetPopulation("small");
  c.site(Site::kOrigin).size = 200;
  c.site(Site::kDestination).size = 100;
  auto persons = GeneratePopulation(c, 3);
  AssignIdentifiers(persons, MakeNamePool(5000, 4), 0.0, 5);
  std::set<std::string> codes;
  for (const auto& p : persons) {
    codes.insert(EncodeAlias(p.first_name, p.last_name, p.phone).Render());
  }
  ASSERT_EQ(codes.size(), persons.size()) << "fixture must have unique triples";
  std::vector<ObservationRecord> obs;
  std::map<ObsId, PersonId> truth;
  Rng rng(6);
  for (const auto& p : persons) {
    const int times = 2 + static_cast<int>(rng.Index(2));
    for (int t = 0; t < times; ++t) {
      ObservationRecord o;
      o.id = static_cast<ObsId>(obs.size());
      o.source = ObservationSource::kAlter;
      o.alias = EncodeAlias(p.first_name, p.last_name, p.phone);
      o.sex = p.sex;
      o.residence = p.site;
      o.reporting_respondent = 100000 + o.id;
      truth[o.id] = p.id;
      obs.push_back(o);
    }
  }
  auto r = LinkRecords(obs, {});
  for (const auto& a : obs) {
    for (const auto& b : obs) {
      ASSERT_EQ(truth[a.id] == truth[b.id],
                r.partition.EntityOf(a.id) == r.partition.EntityOf(b.id));
    }
  }
  auto m = AuditConflicts(r.partition, r.conflicts, &truth);
  EXPECT_EQ(*m.precision, 1.0);
  EXPECT_EQ(*m.recall, 1.0);
  EXPECT_EQ(*m.merge_errors, 0u);
  EXPECT_EQ(*m.split_errors, 0u);
}

TEST(AuditConflicts, AllMergedPrecisionOracle) {
  // k true persons with m observations each, all in one entity:
  // recall 1, precision (m - 1) / (k m - 1).
  const int k = 4, m = 3;
  std::vector<std::pair<ObsId, EntityId>> mapping;
  std::map<ObsId, PersonId> truth;
  for (int i = 0; i < k * m; ++i) {
    mapping.emplace_back(static_cast<ObsId>(i), 0);
    truth[static_cast<ObsId>(i)] = static_cast<PersonId>(i / m);
  }
  EntityPartition p(mapping, {EntityProfile{}});
  auto metrics = AuditConflicts(p, {}, &truth);
  EXPECT_DOUBLE_EQ(*metrics.recall, 1.0);
  EXPECT_DOUBLE_EQ(*metrics.precision, (m - 1.0) / (k * m - 1.0));
  EXPECT_EQ(*metrics.merge_errors, 1u);
}

TEST(AuditConflicts, WithoutTruthOnlyCounts) {
  std::vector<ObservationRecord> obs = {
      Obs(1, "MARPOP3456", Sex::kFemale, Site::kDestination, ObservationSource::kAlter, 10),
      Obs(2, "MARPOP3456", Sex::kMale, Site::kDestination, ObservationSource::kAlter, 11)};
  auto r = LinkRecords(obs, {});
  auto m = AuditConflicts(r.partition, r.conflicts, nullptr);
  EXPECT_FALSE(m.precision.has_value());
  EXPECT_FALSE(m.recall.has_value());
  EXPECT_EQ(m.same_code_conflicts, 1u);
}

}  // namespace
}  // namespace tsf
