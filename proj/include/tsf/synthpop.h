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

#ifndef TSF_SYNTHPOP_H_
#define TSF_SYNTHPOP_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tsf/types.h"

namespace tsf {

using PersonId = std::uint32_t;

// Attribute distribution for the persons living in one site.
struct SiteConfig {
  std::size_t size = 0;
  double female_share = 0.5;
  double age_mean = 40.0;
  double age_sd = 15.0;
  // Probability vectors over kReligions, kEducationLevels, kWorkStatuses and
  // kMaritalStatuses respectively.
  std::vector<double> religion;
  std::vector<double> education;
  std::vector<double> work;
  std::vector<double> marital;
  // Origin only: fraction of residents who are return migrants.
  double returnee_share = 0.0;
};

struct PopulationConfig {
  std::array<SiteConfig, kNumSites> sites;
  // Distinct (first, last) name pairs available to assign_identifiers.
  std::size_t name_pool_size = 15000;
  double phone_missing_rate = 0.05;

  SiteConfig& site(Site s) { return sites[Index(s)]; }
  const SiteConfig& site(Site s) const { return sites[Index(s)]; }
  std::size_t total_size() const;

  // Throws ConfigError naming the first offending field, e.g.
  // "population.destination.female_share".
  void Validate() const;
};

struct Person {
  PersonId id = 0;
  Site site = Site::kOrigin;
  Sex sex = Sex::kFemale;
  int age = 18;
  std::uint8_t religion = 0;
  std::uint8_t education = 0;
  std::uint8_t work = 0;
  std::uint8_t marital = 0;
  MigrantType migrant_type = MigrantType::kNonMigrant;
  std::string first_name;
  std::string last_name;
  std::optional<std::string> phone;

  bool operator==(const Person&) const = default;
};

struct Tie {
  PersonId a = 0;  // a < b
  PersonId b = 0;
  TieKind kind = TieKind::kFriend;

  bool operator==(const Tie&) const = default;
};

// Kin ties are complete subgraphs over kin groups. A group is founded in
// one site; each further member is drawn from site t with probability
// member_site[founder_site][t].
struct KinClusterRule {
  bool enabled = true;
  double mean_size = 6.0;
  std::array<std::array<double, kNumSites>, kNumSites> member_site = {{
      {0.80, 0.05, 0.15},
      {0.45, 0.43, 0.12},
      {0.30, 0.10, 0.60},
  }};
};

struct TieConfig {
  // Base probability of a friend/acquaintance tie per unordered dyad,
  // indexed by the two endpoint sites (symmetric).
  std::array<std::array<double, kNumSites>, kNumSites> site_pair_prob{};
  // Applied to the base probability when both endpoints share a sex.
  double sex_homophily_multiplier = 1.0;
  // Share of non-kin ties labelled acquaintance rather than friend.
  double acquaintance_share = 0.5;
  KinClusterRule kin;

  // Same base probability for every within-site pair and every
  // between-site pair. "Other" persons get no ties among themselves.
  static TieConfig Uniform(double p_within_site, double p_between_site);

  void Validate() const;
};

// The hidden social field. Ties are stored once per unordered pair in
// (a, b) order; the adjacency view lists both directions.
class GroundTruthGraph {
 public:
  struct Neighbor {
    PersonId id;
    TieKind kind;
  };

  GroundTruthGraph() = default;
  GroundTruthGraph(std::vector<Person> persons, std::vector<Tie> ties);

  const std::vector<Person>& persons() const { return persons_; }
  const std::vector<Tie>& ties() const { return ties_; }
  const Person& person(PersonId id) const { return persons_.at(id); }
  std::size_t num_persons() const { return persons_.size(); }

  std::span<const Neighbor> neighbors(PersonId id) const;
  std::size_t degree(PersonId id) const { return neighbors(id).size(); }
  bool HasTie(PersonId a, PersonId b) const;

 private:
  std::vector<Person> persons_;
  std::vector<Tie> ties_;
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> adjacency_;
};

using NamePool = std::vector<std::pair<std::string, std::string>>;

// Preset populations. "castellon_dambovita" uses the destination size of the
// population of interest; "castellon_dambovita_census" the larger count of
// adult nationals; "small" is a 50-person smoke-test population.
PopulationConfig PresetPopulation(const std::string& name);
TieConfig PresetTies(const std::string& name);
std::vector<std::string> PresetNames();

std::vector<Person> GeneratePopulation(const PopulationConfig& config,
                                       std::uint64_t rng_seed);

// Deterministic pool of `size` distinct (first, last) pairs of
// Romanian-looking names, with diacritics.
NamePool MakeNamePool(std::size_t size, std::uint64_t rng_seed);
// Number of distinct name pairs MakeNamePool can draw from.
std::size_t NameUniverseSize();

// Draws a name pair uniformly from the pool for every person and a 10-digit
// phone number with probability 1 - phone_missing_rate.
void AssignIdentifiers(std::vector<Person>& persons, const NamePool& pool,
                       double phone_missing_rate, std::uint64_t rng_seed);

GroundTruthGraph GenerateTies(std::vector<Person> persons,
                              const TieConfig& config, std::uint64_t rng_seed);

}  // namespace tsf

#endif  // TSF_SYNTHPOP_H_
