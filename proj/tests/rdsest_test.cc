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

#include "tsf/rdsest.h"

#include <cmath>
#include <map>
#include <set>

#include <gtest/gtest.h>

#include "tsf/rng.h"

namespace tsf {
namespace {

SampledRespondent Resp(Sex sex, double age, double degree, Site site = Site::kDestination) {
  SampledRespondent r;
  r.sex = sex;
  r.age = age;
  r.degree = degree;
  r.site = site;
  return r;
}

TEST(NaiveEstimate, Basics) {
  SampleFrame f;
  for (Sex s : {Sex::kFemale, Sex::kFemale, Sex::kFemale, Sex::kMale}) {
    f.respondents.push_back(Resp(s, 40, 3));
  }
  EXPECT_DOUBLE_EQ(NaiveEstimate(f, EstimandKind::kFemaleShare), 0.75);
  EXPECT_DOUBLE_EQ(NaiveEstimate(f, EstimandKind::kMeanAge), 40.0);
  EXPECT_THROW(NaiveEstimate(SampleFrame{}, EstimandKind::kMeanAge), Error);
}

TEST(NaiveEstimate, MatchesFold) {
  Rng rng(1);
  SampleFrame f;
  double female = 0, age = 0;
  for (int i = 0; i < 137; ++i) {
    auto r = Resp(rng.Bernoulli(0.4) ? Sex::kFemale : Sex::kMale, 18 + rng.Index(60),
                  1 + rng.Index(20));
    female += r.sex == Sex::kFemale;
    age += r.age;
    f.respondents.push_back(r);
  }
  EXPECT_NEAR(NaiveEstimate(f, EstimandKind::kFemaleShare), female / 137, 1e-15);
  EXPECT_NEAR(NaiveEstimate(f, EstimandKind::kMeanAge), age / 137, 1e-12);
}

TEST(Rds2Estimate, Formula) {
  SampleFrame f;
  f.respondents = {Resp(Sex::kFemale, 30, 1), Resp(Sex::kMale, 50, 2)};
  EXPECT_NEAR(Rds2Estimate(f, EstimandKind::kFemaleShare), 2.0 / 3.0, 1e-15);
  SampleFrame equal;
  for (int i = 0; i < 9; ++i) {
    equal.respondents.push_back(Resp(i % 3 ? Sex::kMale : Sex::kFemale, 20 + i, 7));
  }
  for (auto what : {EstimandKind::kFemaleShare, EstimandKind::kMeanAge}) {
    EXPECT_EQ(Rds2Estimate(equal, what), NaiveEstimate(equal, what));
  }
  equal.respondents[0].degree = 0;
  EXPECT_THROW(Rds2Estimate(equal, EstimandKind::kFemaleShare), AssumptionError);
}

TEST(Rds2Estimate, ScaleInvariant) {
  Rng rng(2);
  SampleFrame f, g;
  for (int i = 0; i < 50; ++i) {
    auto r = Resp(rng.Bernoulli(0.5) ? Sex::kFemale : Sex::kMale, 30, 1 + rng.Index(9));
    f.respondents.push_back(r);
    r.degree *= 4.0;
    g.respondents.push_back(r);
  }
  EXPECT_DOUBLE_EQ(Rds2Estimate(f, EstimandKind::kFemaleShare),
                   Rds2Estimate(g, EstimandKind::kFemaleShare));
  const double p = Rds2Estimate(f, EstimandKind::kFemaleShare);
  EXPECT_GE(p, 0.0);
  EXPECT_LE(p, 1.0);
}

struct Member {
  Sex sex;
  double degree;
};

std::vector<Member> HeterogeneousPopulation(Rng& rng, std::size_t n) {
  // Women carry larger personal networks, so degree-proportional sampling
  // over-represents them.
  std::vector<Member> pop;
  for (std::size_t i = 0; i < n; ++i) {
    const Sex s = rng.Bernoulli(0.5) ? Sex::kFemale : Sex::kMale;
    const double mean = s == Sex::kFemale ? 12.0 : 4.0;
    pop.push_back({s, 1.0 + static_cast<double>(rng.Poisson(mean))});
  }
  return pop;
}

TEST(Rds2Estimate, ReducesDegreeBias) {
  int better = 0;
  for (std::uint64_t rep = 0; rep < 200; ++rep) {
    Rng rng(1000 + rep);
    auto pop = HeterogeneousPopulation(rng, 2000);
    double truth = 0;
    std::vector<double> w;
    for (const auto& m : pop) {
      truth += m.sex == Sex::kFemale;
      w.push_back(m.degree);
    }
    truth /= static_cast<double>(pop.size());
    SampleFrame f;
    for (int i = 0; i < 150; ++i) {
      const auto& m = pop[rng.Categorical(w)];
      f.respondents.push_back(Resp(m.sex, 40, m.degree));
    }
    const double naive = NaiveEstimate(f, EstimandKind::kFemaleShare);
    const double weighted = Rds2Estimate(f, EstimandKind::kFemaleShare);
    better += std::abs(weighted - truth) < std::abs(naive - truth);
  }
  EXPECT_GE(better, 160);
}

TEST(NaiveEstimate, UnbiasedUnderUniformSampling) {
  Rng pop_rng(7);
  auto pop = HeterogeneousPopulation(pop_rng, 3000);
  double truth = 0;
  for (const auto& m : pop) truth += m.sex == Sex::kFemale;
  truth /= static_cast<double>(pop.size());
  double sum = 0, sum_sq = 0;
  const int reps = 500;
  for (int rep = 0; rep < reps; ++rep) {
    Rng rng(5000 + rep);
    SampleFrame f;
    for (std::size_t i : rng.SampleWithoutReplacement(pop.size(), 100)) {
      f.respondents.push_back(Resp(pop[i].sex, 40, pop[i].degree));
    }
    const double x = NaiveEstimate(f, EstimandKind::kFemaleShare);
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / reps;
  const double se = std::sqrt((sum_sq / reps - mean * mean) / reps);
  EXPECT_NEAR(mean, truth, 4 * se);
}

TEST(RepresentativenessReport, DeviationsAndFlags) {
  SampleFrame f;
  for (int i = 0; i < 10; ++i) {
    f.respondents.push_back(Resp(i < 5 ? Sex::kFemale : Sex::kMale, 44, 3, Site::kDestination));
  }
  std::array<SiteParameters, 2> params{};
  params[static_cast<std::size_t>(Index(Site::kDestination))] = {41.0, 0.5, 1000};
  params[static_cast<std::size_t>(Index(Site::kOrigin))] = {41.0, 0.5, 1000};
  auto rep = RepresentativenessReport(f, params);
  ASSERT_EQ(rep.rows.size(), 2u);  // origin has no respondents
  for (const auto& row : rep.rows) {
    if (row.what == EstimandKind::kMeanAge) {
      EXPECT_DOUBLE_EQ(*row.deviation, 3.0);
    } else {
      EXPECT_DOUBLE_EQ(*row.deviation, 0.0);
    }
    EXPECT_FALSE(row.flagged);
  }
  params[static_cast<std::size_t>(Index(Site::kDestination))].mean_age = 30.0;
  auto flagged = RepresentativenessReport(f, params);
  for (const auto& row : flagged.rows) {
    EXPECT_EQ(row.flagged, row.what == EstimandKind::kMeanAge);
  }
  auto no_params = RepresentativenessReport(f, std::nullopt);
  EXPECT_FALSE(no_params.rows[0].parameter.has_value());
}

TEST(ComputeMasking, MatchesSetScan) {
  PopulationConfig c = PresetPopulation("small");
  auto persons = GeneratePopulation(c, 11);
  AssignIdentifiers(persons, MakeNamePool(500, 11), 0.1, 12);
  auto truth = GenerateTies(std::move(persons), TieConfig::Uniform(0.05, 0.03), 13);
  StudyConfig study;
  study.n_seeds = 3;
  study.target_interviews = 60;
  auto log = RunStudy(truth, study, 14);
  // Partition by true person, so the oracle can work on person ids.
  std::vector<std::pair<ObsId, EntityId>> mapping(log.truth.begin(), log.truth.end());
  EntityPartition partition(mapping, std::vector<EntityProfile>(truth.num_persons()));
  auto got = ComputeMasking(log, partition);

  std::map<ObsId, std::set<PersonId>> referred, elicited;
  for (const auto& r : log.referrals) referred[r.referee].insert(r.referral_person);
  for (const auto& pn : log.personal_networks)
    for (const auto& a : pn.alters) elicited[pn.respondent].insert(a.person);
  std::array<double, 2> e{}, both{};
  for (const auto& iv : log.interviews) {
    if (iv.site == Site::kOther) continue;
    const auto s = static_cast<std::size_t>(Index(iv.site));
    e[s] += elicited[iv.respondent].size();
    for (PersonId p : elicited[iv.respondent]) both[s] += referred[iv.respondent].count(p);
  }
  ASSERT_GT(e[0] + e[1], 0);
  for (std::size_t s = 0; s < 2; ++s) {
    EXPECT_EQ(got[s].elicited, static_cast<std::size_t>(e[s]));
    if (e[s] == 0) continue;
    EXPECT_NEAR(got[s].masking(), 1.0 - both[s] / e[s], 1e-12);
  }
}

TEST(SampleFrame, DegreesFromLog) {
  PopulationConfig c = PresetPopulation("small");
  auto persons = GeneratePopulation(c, 21);
  AssignIdentifiers(persons, MakeNamePool(500, 21), 0.1, 22);
  auto truth = GenerateTies(std::move(persons), TieConfig::Uniform(0.05, 0.01), 23);
  StudyConfig study;
  study.n_seeds = 3;
  study.target_interviews = 30;
  auto log = RunStudy(truth, study, 24);
  auto elicited = BuildSampleFrame(log, truth, DegreeSource::kElicited);
  auto true_deg = BuildSampleFrame(log, truth, DegreeSource::kTrue);
  ASSERT_EQ(elicited.respondents.size(), log.interviews.size());
  std::map<ObsId, std::size_t> alters;
  for (const auto& pn : log.personal_networks) alters[pn.respondent] = pn.alters.size();
  for (std::size_t i = 0; i < elicited.respondents.size(); ++i) {
    const auto& r = elicited.respondents[i];
    EXPECT_EQ(r.degree, static_cast<double>(alters[r.obs]));
    EXPECT_EQ(true_deg.respondents[i].degree,
              static_cast<double>(truth.neighbors(r.person).size()));
  }
  auto dest = FilterSite(elicited, Site::kDestination);
  for (const auto& r : dest.respondents) EXPECT_EQ(r.site, Site::kDestination);
}

}  // namespace
}  // namespace tsf
