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

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>

namespace tsf {

std::string_view ToString(DegreeSource d) {
  return d == DegreeSource::kElicited ? "elicited" : "true";
}

DegreeSource ParseDegreeSource(std::string_view s) {
  if (s == "elicited") return DegreeSource::kElicited;
  if (s == "true") return DegreeSource::kTrue;
  throw ParseError(fmt::format("unknown degree source '{}'", s));
}

std::string_view ToString(EstimandKind e) {
  return e == EstimandKind::kFemaleShare ? "female_share" : "mean_age";
}

SampleFrame BuildSampleFrame(const StudyLog& log, const GroundTruthGraph& truth,
                             DegreeSource degrees, const std::set<ObsId>* only) {
  std::map<ObsId, std::size_t> elicited;
  for (const auto& pn : log.personal_networks) elicited[pn.respondent] = pn.alters.size();
  SampleFrame f;
  for (const auto& iv : log.interviews) {
    if (only && !only->count(iv.respondent)) continue;
    const Person& p = truth.person(iv.person);
    SampledRespondent r;
    r.obs = iv.respondent;
    r.person = iv.person;
    r.site = p.site;
    r.sex = p.sex;
    r.age = p.age;
    r.degree = degrees == DegreeSource::kTrue
                   ? static_cast<double>(truth.degree(iv.person))
                   : static_cast<double>(elicited[iv.respondent]);
    f.respondents.push_back(r);
  }
  return f;
}

SampleFrame FilterSite(const SampleFrame& frame, Site site) {
  SampleFrame f;
  for (const auto& r : frame.respondents) {
    if (r.site == site) f.respondents.push_back(r);
  }
  return f;
}

namespace {

double Value(const SampledRespondent& r, EstimandKind what) {
  return what == EstimandKind::kFemaleShare ? (r.sex == Sex::kFemale ? 1.0 : 0.0)
                                            : r.age;
}

}  // namespace

double NaiveEstimate(const SampleFrame& frame, EstimandKind what) {
  if (frame.respondents.empty()) throw Error("estimate requested on an empty sample");
  double sum = 0.0;
  for (const auto& r : frame.respondents) sum += Value(r, what);
  return sum / static_cast<double>(frame.respondents.size());
}

double Rds2Estimate(const SampleFrame& frame, EstimandKind what) {
  if (frame.respondents.empty()) throw Error("estimate requested on an empty sample");
  double min_degree = frame.respondents.front().degree;
  for (const auto& r : frame.respondents) {
    if (!(r.degree >= 1.0)) {
      throw AssumptionError(fmt::format(
          "respondent observation {} has degree {}; inverse-degree weighting needs "
          "degree >= 1",
          r.obs, r.degree));
    }
    min_degree = std::min(min_degree, r.degree);
  }
  // Weights relative to the smallest degree: equal degrees give unit
  // weights, so the estimate then coincides with the naive one bit for bit.
  double num = 0.0, den = 0.0;
  for (const auto& r : frame.respondents) {
    const double w = min_degree / r.degree;
    num += Value(r, what) * w;
    den += w;
  }
  return num / den;
}

double AgeSd(const SampleFrame& frame) {
  const auto n = frame.respondents.size();
  if (n < 2) return 0.0;
  double mean = NaiveEstimate(frame, EstimandKind::kMeanAge);
  double ss = 0.0;
  for (const auto& r : frame.respondents) ss += (r.age - mean) * (r.age - mean);
  return std::sqrt(ss / static_cast<double>(n - 1));
}

std::array<SiteParameters, 2> PopulationParameters(std::span<const Person> persons) {
  std::array<SiteParameters, 2> out{};
  std::array<double, 2> age{}, female{};
  for (const auto& p : persons) {
    if (p.site == Site::kOther || p.age < 18) continue;
    const auto s = static_cast<std::size_t>(Index(p.site));
    ++out[s].size;
    age[s] += p.age;
    if (p.sex == Sex::kFemale) female[s] += 1.0;
  }
  for (std::size_t s = 0; s < 2; ++s) {
    if (out[s].size == 0) continue;
    out[s].mean_age = age[s] / static_cast<double>(out[s].size);
    out[s].female_share = female[s] / static_cast<double>(out[s].size);
  }
  return out;
}

double MaskingDiagnostic::masking() const {
  if (elicited == 0) return 0.0;
  return 1.0 - static_cast<double>(elicited_referred) / static_cast<double>(elicited);
}

double MaskingDiagnostic::overlap() const {
  if (referred == 0) return 0.0;
  return static_cast<double>(elicited_referred) / static_cast<double>(referred);
}

EstimateReport RepresentativenessReport(
    const SampleFrame& frame,
    const std::optional<std::array<SiteParameters, 2>>& parameters,
    double reference_ci) {
  EstimateReport rep;
  rep.reference_ci = reference_ci;
  for (Site site : {Site::kDestination, Site::kOrigin}) {
    SampleFrame sub = FilterSite(frame, site);
    if (sub.respondents.empty()) continue;
    for (EstimandKind what : {EstimandKind::kMeanAge, EstimandKind::kFemaleShare}) {
      EstimateRow row;
      row.site = site;
      row.what = what;
      row.n = sub.respondents.size();
      row.naive = NaiveEstimate(sub, what);
      try {
        row.weighted = Rds2Estimate(sub, what);
      } catch (const AssumptionError&) {
        row.weighted.reset();
      }
      if (parameters) {
        const auto& par = (*parameters)[static_cast<std::size_t>(Index(site))];
        row.parameter =
            what == EstimandKind::kMeanAge ? par.mean_age : par.female_share;
        const double scale = what == EstimandKind::kMeanAge ? 1.0 : 100.0;
        row.deviation = (row.naive - *row.parameter) * scale;
        row.flagged = std::abs(*row.deviation) > reference_ci;
      }
      rep.rows.push_back(row);
    }
  }
  return rep;
}

std::array<MaskingDiagnostic, 2> ComputeMasking(const StudyLog& log,
                                                const EntityPartition& partition) {
  std::array<MaskingDiagnostic, 2> out{};
  out[0].site = Site::kOrigin;
  out[1].site = Site::kDestination;
  std::map<ObsId, std::set<EntityId>> referred;
  for (const auto& r : log.referrals) {
    referred[r.referee].insert(partition.EntityOf(r.referral));
  }
  std::map<ObsId, Site> site_of;
  for (const auto& iv : log.interviews) site_of[iv.respondent] = iv.site;
  std::map<ObsId, std::set<EntityId>> elicited;
  for (const auto& pn : log.personal_networks) {
    auto& e = elicited[pn.respondent];
    for (const auto& a : pn.alters) e.insert(partition.EntityOf(a.obs));
  }
  for (const auto& [resp, site] : site_of) {
    if (site == Site::kOther) continue;
    auto& d = out[static_cast<std::size_t>(Index(site))];
    const auto& e = elicited[resp];
    const auto& r = referred[resp];
    d.elicited += e.size();
    d.referred += r.size();
    for (EntityId x : r) d.elicited_referred += e.count(x);
  }
  return out;
}

}  // namespace tsf
