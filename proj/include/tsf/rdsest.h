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

#ifndef TSF_RDSEST_H_
#define TSF_RDSEST_H_

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "tsf/fieldwork.h"
#include "tsf/identity.h"
#include "tsf/synthpop.h"

namespace tsf {

class AssumptionError : public Error {
 public:
  using Error::Error;
};

enum class DegreeSource : std::uint8_t {
  kElicited,  // number of alters the respondent named
  kTrue,      // degree in the hidden graph (simulation only)
};
std::string_view ToString(DegreeSource d);
DegreeSource ParseDegreeSource(std::string_view s);

struct SampledRespondent {
  ObsId obs = 0;
  PersonId person = 0;
  Site site = Site::kDestination;
  Sex sex = Sex::kFemale;
  double age = 0.0;
  double degree = 0.0;
};

struct SampleFrame {
  std::vector<SampledRespondent> respondents;
};

// One row per interview. When `only` is given, respondents whose
// observation is not in it are skipped.
SampleFrame BuildSampleFrame(const StudyLog& log, const GroundTruthGraph& truth,
                             DegreeSource degrees,
                             const std::set<ObsId>* only = nullptr);
SampleFrame FilterSite(const SampleFrame& frame, Site site);

enum class EstimandKind : std::uint8_t { kFemaleShare, kMeanAge };
std::string_view ToString(EstimandKind e);

// Unweighted share or mean. Throws Error on an empty frame.
double NaiveEstimate(const SampleFrame& frame, EstimandKind what);
// Inverse-degree weighted share or mean. Throws AssumptionError when any
// degree is below 1.
double Rds2Estimate(const SampleFrame& frame, EstimandKind what);
// Sample standard deviation of age, for reporting.
double AgeSd(const SampleFrame& frame);

struct SiteParameters {
  double mean_age = 0.0;
  double female_share = 0.0;
  std::size_t size = 0;
};
// [origin, destination] parameters of the adult population.
std::array<SiteParameters, 2> PopulationParameters(std::span<const Person> persons);

struct EstimateRow {
  Site site = Site::kDestination;
  EstimandKind what = EstimandKind::kFemaleShare;
  std::size_t n = 0;
  double naive = 0.0;
  std::optional<double> weighted;  // absent when a degree is below 1
  std::optional<double> parameter;
  // Naive minus parameter, in years or percentage points.
  std::optional<double> deviation;
  bool flagged = false;
};

struct MaskingDiagnostic {
  Site site = Site::kDestination;
  std::size_t elicited = 0;         // elicited alters, summed over respondents
  std::size_t elicited_referred = 0;  // of which also nominated as referrals
  std::size_t referred = 0;         // nominated referrals
  // Share of elicited alters that were not nominated as referrals.
  double masking() const;
  // Share of referrals that were also elicited as alters.
  double overlap() const;
};

struct EstimateReport {
  std::vector<EstimateRow> rows;
  std::array<MaskingDiagnostic, 2> masking{};
  double reference_ci = 8.0;
};

EstimateReport RepresentativenessReport(
    const SampleFrame& frame,
    const std::optional<std::array<SiteParameters, 2>>& parameters,
    double reference_ci = 8.0);

// Per respondent, compares the alters they named with the referrals they
// nominated; persons are identified through the entity partition.
std::array<MaskingDiagnostic, 2> ComputeMasking(const StudyLog& log,
                                                const EntityPartition& partition);

}  // namespace tsf

#endif  // TSF_RDSEST_H_
