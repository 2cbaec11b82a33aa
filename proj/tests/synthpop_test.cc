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

#include "tsf/synthpop.h"

#include <cmath>
#include <map>
#include <set>

#include <gtest/gtest.h>

#include "tsf/io.h"
#include "tsf/types.h"

namespace tsf {
namespace {

PopulationConfig Sized(std::size_t origin, std::size_t destination, std::size_t other) {
  PopulationConfig c = PresetPopulation("small");
  c.site(Site::kOrigin).size = origin;
  c.site(Site::kDestination).size = destination;
  c.site(Site::kOther).size = other;
  return c;
}

TEST(GeneratePopulation, CountsAndMarginals) {
  PopulationConfig c = Sized(1000, 300, 0);
  c.site(Site::kOrigin).female_share = 0.51;
  c.site(Site::kOrigin).age_mean = 48;
  c.site(Site::kDestination).female_share = 0.53;
  c.site(Site::kDestination).age_mean = 41;
  auto persons = GeneratePopulation(c, 17);
  ASSERT_EQ(persons.size(), 1300u);
  std::map<Site, std::pair<double, double>> female_age;
  std::map<Site, int> n;
  for (const auto& p : persons) {
    EXPECT_GE(p.age, 18);
    EXPECT_LE(p.age, 95);
    female_age[p.site].first += p.sex == Sex::kFemale;
    female_age[p.site].second += p.age;
    ++n[p.site];
    if (p.site == Site::kDestination) EXPECT_EQ(p.migrant_type, MigrantType::kMigrant);
    if (p.site == Site::kOrigin) EXPECT_NE(p.migrant_type, MigrantType::kMigrant);
  }
  EXPECT_EQ(n[Site::kOrigin], 1000);
  EXPECT_EQ(n[Site::kDestination], 300);
  for (auto [site, share] : {std::pair{Site::kOrigin, 0.51}, std::pair{Site::kDestination, 0.53}}) {
    const double se = std::sqrt(share * (1 - share) / n[site]);
    EXPECT_NEAR(female_age[site].first / n[site], share, 3 * se);
  }
  // Truncation at 18 lifts the mean slightly; 2 years is generous.
  EXPECT_NEAR(female_age[Site::kOrigin].second / 1000, 48, 2.0);
  EXPECT_NEAR(female_age[Site::kDestination].second / 300, 41, 2.5);
}

TEST(GeneratePopulation, EmptyAndDeterministic) {
  EXPECT_TRUE(GeneratePopulation(Sized(0, 0, 0), 1).empty());
  auto c = Sized(50, 50, 10);
  EXPECT_EQ(PersonsCsv(GeneratePopulation(c, 3)), PersonsCsv(GeneratePopulation(c, 3)));
}

TEST(GeneratePopulation, InvalidConfigNamesField) {
  auto c = Sized(10, 10, 0);
  c.site(Site::kDestination).female_share = 1.5;
  try {
    GeneratePopulation(c, 1);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("population.destination.female_share"),
              std::string::npos);
  }
}

TEST(GenerateTies, NoBetweenSiteTiesWhenProbabilityZero) {
  auto persons = GeneratePopulation(Sized(100, 100, 0), 4);
  TieConfig t = TieConfig::Uniform(0.05, 0.0);
  t.kin.enabled = false;
  auto g = GenerateTies(persons, t, 5);
  ASSERT_FALSE(g.ties().empty());
  for (const auto& tie : g.ties()) {
    EXPECT_EQ(g.person(tie.a).site, g.person(tie.b).site);
  }
}

TEST(GenerateTies, TwoPersonsCertainTie) {
  auto persons = GeneratePopulation(Sized(2, 0, 0), 4);
  TieConfig t = TieConfig::Uniform(1.0, 0.0);
  t.kin.enabled = false;
  auto g = GenerateTies(persons, t, 1);
  ASSERT_EQ(g.ties().size(), 1u);
  EXPECT_TRUE(g.HasTie(0, 1));
  EXPECT_TRUE(g.HasTie(1, 0));
}

TEST(GenerateTies, DensityMatchesBernoulliOracle) {
  // 200 nodes, 100 replicates: the pooled density must sit within 3 SE of p.
  const double p = 0.03;
  auto persons = GeneratePopulation(Sized(100, 100, 0), 7);
  TieConfig t = TieConfig::Uniform(p, p);
  t.kin.enabled = false;
  const double dyads = 200.0 * 199 / 2;
  double ties = 0;
  for (int r = 0; r < 100; ++r) ties += static_cast<double>(GenerateTies(persons, t, 100 + r).ties().size());
  const double total = dyads * 100;
  const double se = std::sqrt(p * (1 - p) / total);
  EXPECT_NEAR(ties / total, p, 3 * se);
}

TEST(GenerateTies, InvariantsAndDeterminism) {
  auto persons = GeneratePopulation(Sized(300, 200, 50), 9);
  TieConfig t = TieConfig::Uniform(0.02, 0.005);
  t.sex_homophily_multiplier = 2.0;
  auto g1 = GenerateTies(persons, t, 10);
  auto g2 = GenerateTies(persons, t, 10);
  EXPECT_EQ(TiesCsv(g1.ties()), TiesCsv(g2.ties()));
  std::set<std::pair<PersonId, PersonId>> seen;
  for (const auto& tie : g1.ties()) {
    EXPECT_LT(tie.a, tie.b);
    EXPECT_TRUE(seen.insert({tie.a, tie.b}).second);
    EXPECT_TRUE(g1.HasTie(tie.b, tie.a));
  }
  // No friend ties among "other" persons.
  for (const auto& tie : g1.ties()) {
    if (tie.kind == TieKind::kKin) continue;
    EXPECT_FALSE(g1.person(tie.a).site == Site::kOther && g1.person(tie.b).site == Site::kOther);
  }
}

TEST(GenerateTies, SexHomophilyPlantsNegativeEi) {
  auto persons = GeneratePopulation(Sized(150, 150, 0), 21);
  TieConfig t = TieConfig::Uniform(0.02, 0.02);
  t.sex_homophily_multiplier = 3.0;
  t.kin.enabled = false;
  double sum = 0;
  for (int r = 0; r < 50; ++r) {
    auto g = GenerateTies(persons, t, 500 + r);
    double internal = 0, external = 0;
    for (const auto& tie : g.ties()) {
      (g.person(tie.a).sex == g.person(tie.b).sex ? internal : external) += 1;
    }
    sum += (external - internal) / (external + internal);
  }
  EXPECT_LT(sum / 50, 0.0);
}

TEST(GenerateTies, KinGroupsAreCliques) {
  auto persons = GeneratePopulation(Sized(60, 40, 0), 2);
  TieConfig t = TieConfig::Uniform(0.0, 0.0);
  auto g = GenerateTies(persons, t, 3);
  for (const auto& tie : g.ties()) EXPECT_EQ(tie.kind, TieKind::kKin);
  // Kin is transitive within a clique.
  for (PersonId a = 0; a < g.num_persons(); ++a) {
    auto nb = g.neighbors(a);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        EXPECT_TRUE(g.HasTie(nb[i].id, nb[j].id));
      }
    }
  }
}

TEST(AssignIdentifiers, SinglePairPoolForcesCollisions) {
  auto persons = GeneratePopulation(Sized(5, 0, 0), 1);
  NamePool pool = {{"Maria", "Popescu"}};
  AssignIdentifiers(persons, pool, 0.0, 2);
  for (const auto& p : persons) {
    EXPECT_EQ(p.first_name, "Maria");
    EXPECT_EQ(p.last_name, "Popescu");
    ASSERT_TRUE(p.phone.has_value());
    EXPECT_EQ(p.phone->size(), 10u);
  }
  EXPECT_THROW(AssignIdentifiers(persons, {}, 0.0, 2), ConfigError);
}

TEST(AssignIdentifiers, BirthdayCollisionOracle) {
  // Expected colliding pairs among m draws from N equally likely names:
  // C(m, 2) / N.
  const std::size_t n_pool = 10000, m = 300;
  auto persons = GeneratePopulation(Sized(m, 0, 0), 1);
  auto pool = MakeNamePool(n_pool, 5);
  const double expected = m * (m - 1) / 2.0 / n_pool;
  double total = 0, total_sq = 0;
  const int reps = 100;
  for (int r = 0; r < reps; ++r) {
    AssignIdentifiers(persons, pool, 0.0, 1000 + r);
    std::map<std::pair<std::string, std::string>, int> count;
    for (const auto& p : persons) ++count[{p.first_name, p.last_name}];
    double pairs = 0;
    for (const auto& [k, c] : count) pairs += c * (c - 1) / 2.0;
    total += pairs;
    total_sq += pairs * pairs;
  }
  const double mean = total / reps;
  const double var = total_sq / reps - mean * mean;
  const double se = std::sqrt(std::max(var, expected) / reps);
  EXPECT_NEAR(mean, expected, 3 * se);
}

TEST(MakeNamePool, DistinctPairsAndBound) {
  auto pool = MakeNamePool(2000, 3);
  std::set<std::pair<std::string, std::string>> u(pool.begin(), pool.end());
  EXPECT_EQ(u.size(), 2000u);
  EXPECT_THROW(MakeNamePool(NameUniverseSize() + 1, 3), ConfigError);
}

TEST(Presets, PaperSizes) {
  auto c = PresetPopulation("castellon_dambovita");
  EXPECT_EQ(c.site(Site::kOrigin).size, 406598u);
  EXPECT_EQ(c.site(Site::kDestination).size, 16840u);
  EXPECT_EQ(PresetPopulation("castellon_dambovita_census").site(Site::kDestination).size,
            30880u);
  EXPECT_THROW(PresetPopulation("nowhere"), ConfigError);
}

}  // namespace
}  // namespace tsf
