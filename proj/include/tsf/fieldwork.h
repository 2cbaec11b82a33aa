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

#ifndef TSF_FIELDWORK_H_
#define TSF_FIELDWORK_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tsf/identity.h"
#include "tsf/synthpop.h"
#include "tsf/types.h"

namespace tsf {

// Name-generator categories, relative to the respondent's residence.
enum class AlterCategory : std::uint8_t {
  kLocalFriends = 0,      // friends/acquaintances in the current site
  kLocalKin = 1,          // relatives in the current site
  kReturnees = 2,         // anyone who lived at the destination and returned
  kCorridorKin = 3,       // relatives in the other corridor site
  kCorridorFriends = 4,   // friends/acquaintances in the other corridor site
  kElsewhereKin = 5,      // relatives outside the corridor
  kElsewhereFriends = 6,  // friends/acquaintances outside the corridor
};
inline constexpr int kNumAlterCategories = 7;
std::string_view ToString(AlterCategory c);
AlterCategory ParseAlterCategory(std::string_view s);

struct AlterQuotas {
  std::array<int, kNumAlterCategories> cap = {10, 5, 5, 5, 5, 5, 5};
  int total() const;
};

// Reporting imperfections. All zero means every mention reproduces the
// truth exactly.
struct ObservationNoise {
  // Probability that one letter of a reported alias is mistyped.
  double alias_typo_rate = 0.0;
  // Probability that a respondent cannot give an alter's phone number.
  double alter_phone_unknown_rate = 0.0;
  // Probability that each alter attribute is misreported.
  double alter_attribute_noise = 0.0;
  // Probability that an alter-alter tie is perceived wrongly.
  double alter_tie_noise = 0.0;
};

enum class SeedAttribute : std::uint8_t {
  kSex,
  kMarital,
  kAgeBand,
  kEducation,
  kReligion,
  kWork,
};
std::vector<SeedAttribute> DefaultSeedAttributes();

struct StudyConfig {
  int n_seeds = 9;
  // When every chain has died out before the target, one further seed is
  // recruited, up to this many seeds in total.
  int max_seeds = 30;
  int referral_quota_per_site = 3;
  // Probability that a contacted referral agrees, by [site][sex] for the two
  // fieldwork sites (origin, destination) and (female, male).
  std::array<std::array<double, 2>, 2> participation = {{
      {0.265, 0.315},  // origin: F, M
      {0.300, 0.235},  // destination: F, M
  }};
  // Probability that a referee withholds an eligible contact, by the
  // referee's site (origin, destination).
  std::array<double, 2> masking = {0.39, 0.62};
  int target_interviews = 303;
  AlterQuotas alter_quotas;
  int alter_alter_sample_size = 9;
  // Relative weight of a same-sex contact when a referee picks nominees.
  double referral_sex_weight = 1.0;
  std::vector<SeedAttribute> seed_attributes = DefaultSeedAttributes();
  ObservationNoise noise;

  double participation_prob(Site s, Sex x) const {
    return participation[Index(s)][Index(x)];
  }
  double masking_prob(Site s) const { return masking[Index(s)]; }
  void SetParticipation(double p);

  // Throws ConfigError naming the offending field.
  void Validate() const;
};

struct ElicitedAlter {
  ObsId obs = 0;
  PersonId person = 0;
  AlterCategory category = AlterCategory::kLocalFriends;
};

struct AlterTieReport {
  ObsId a = 0;  // alter observation ids, a < b
  ObsId b = 0;
  bool present = false;
};

struct PersonalNetworkObservation {
  ObsId respondent = 0;
  PersonId respondent_person = 0;
  std::vector<ElicitedAlter> alters;
  std::vector<ObsId> sampled;  // alter observations, sorted
  std::vector<AlterTieReport> alter_ties;
};

struct InterviewEvent {
  std::size_t seq = 0;
  ObsId respondent = 0;
  PersonId person = 0;
  Site site = Site::kDestination;
  int wave = 0;
  Site interviewer_site = Site::kDestination;
};

struct ReferralEvent {
  std::size_t seq = 0;
  ObsId referee = 0;   // respondent observation of the nominator
  ObsId referral = 0;  // referral observation of the nominee
  PersonId referee_person = 0;
  PersonId referral_person = 0;
  Site site = Site::kDestination;  // nominee's site
  int wave = 0;                    // referee wave + 1
  bool accepted = false;
};

// Complete record of one simulated fieldwork run. Observation records carry
// what the field teams saw; `truth` maps each observation to its person and
// is only available in simulation.
struct StudyLog {
  std::vector<ObservationRecord> observations;
  std::map<ObsId, PersonId> truth;
  std::vector<InterviewEvent> interviews;
  std::vector<ReferralEvent> referrals;
  std::vector<PersonalNetworkObservation> personal_networks;
  std::vector<ObsId> seeds;  // respondent observations of the seeds
  bool exhausted = false;

  int max_wave() const;
  const ObservationRecord& observation(ObsId id) const;
};

// Greedy max-min diversity over the chosen attributes: the first seed is
// drawn at random, each further seed maximises its smallest attribute
// distance to those already chosen. Seeds come from the destination site.
std::vector<PersonId> SelectSeeds(std::span<const Person> population, int k,
                                  std::span<const SeedAttribute> attributes,
                                  std::uint64_t rng_seed);

// Category of `alter` for a name generator applied by `respondent`.
AlterCategory CategorizeAlter(const Person& respondent, const Person& alter,
                              TieKind kind);

// Elicited alters (no observation ids assigned yet: obs == 0).
PersonalNetworkObservation ElicitPersonalNetwork(PersonId respondent,
                                                 const GroundTruthGraph& truth,
                                                 const AlterQuotas& quotas,
                                                 std::uint64_t rng_seed);

// Samples min(k, |alters|) alters and reports every pair among them.
// Alters must have distinct observation ids.
std::vector<AlterTieReport> SampleAlterAlterTies(
    PersonalNetworkObservation& pnet, const GroundTruthGraph& truth, int k,
    double perception_noise, std::uint64_t rng_seed);

struct Nomination {
  PersonId person = 0;
  Site site = Site::kDestination;
};

// Up to `quota_per_site` unmasked true contacts per fieldwork site.
std::vector<Nomination> NominateReferrals(PersonId respondent,
                                          const GroundTruthGraph& truth,
                                          int quota_per_site, double masking_prob,
                                          double sex_weight,
                                          std::uint64_t rng_seed);

StudyLog RunStudy(const GroundTruthGraph& truth, const StudyConfig& config,
                  std::uint64_t rng_seed);

struct ParticipationCell {
  std::size_t contacted = 0;
  std::size_t participated = 0;
};

// Distinct contacted persons (seeds included) by site and sex, as in a
// referee/referral participation table.
struct ParticipationSummary {
  // [site: origin, destination][sex: F, M]
  std::array<std::array<ParticipationCell, 2>, 2> cells{};
  std::size_t nominations = 0;           // distinct nominated persons
  std::size_t accepted_nominations = 0;  // of which agreed
  std::size_t interviews = 0;

  ParticipationCell site_total(Site s) const;
  ParticipationCell sex_total(Sex x) const;
  ParticipationCell grand_total() const;
  // Accepted / nominated; 0 when nothing was nominated.
  double success_rate() const;
};

ParticipationSummary SummarizeParticipation(const StudyLog& log);

}  // namespace tsf

#endif  // TSF_FIELDWORK_H_
