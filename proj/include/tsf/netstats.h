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

#ifndef TSF_NETSTATS_H_
#define TSF_NETSTATS_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tsf/fieldwork.h"
#include "tsf/netbuild.h"
#include "tsf/synthpop.h"

namespace tsf {

enum class NodeAttr : std::uint8_t { kSex, kSite, kSiteSex };
std::string_view ToString(NodeAttr a);
NodeAttr ParseNodeAttr(std::string_view s);

// Category code per node of a layer, plus the category names.
struct Categorical {
  std::vector<std::string> names;
  std::vector<int> code;
  std::size_t num_present() const;
};
// Throws Error listing the nodes whose attribute is missing.
Categorical NodeCategories(const Digraph& g, NodeAttr attr);

double Density(const Digraph& g);

struct DyadCensus {
  std::size_t mutual = 0;
  std::size_t asymmetric = 0;
  std::size_t null = 0;
};
DyadCensus CountDyads(const Digraph& g);

struct MixingMatrix {
  std::vector<std::string> categories;
  std::vector<std::vector<std::size_t>> counts;  // [from][to]
  std::size_t total() const;
};
MixingMatrix ComputeMixing(const Digraph& g, const Categorical& attr);

// (E - I) / (E + I) over directed arcs. Throws on a layer without arcs.
double EiGlobal(const Digraph& g, std::span<const int> code);
// Over the out-arcs of node v; nullopt when v sends nothing.
std::optional<double> EiNode(const Digraph& g, std::size_t v,
                             std::span<const int> code);

struct EIResult {
  double observed = 0.0;
  double mean = 0.0;
  double sd = 0.0;
  double p = 1.0;
  int n_permutations = 0;
};
// Node-label permutation with the graph held fixed. Permutation i draws from
// DeriveSeed(rng_seed, "ei_perm", i).
EIResult EiPermutationTest(const Digraph& g, std::span<const int> code,
                           int n_permutations, std::uint64_t rng_seed);

enum class CentralityKind : std::uint8_t {
  kIndegree,
  kOutdegree,
  kDegree,
  kBetweenness,
};
std::string_view ToString(CentralityKind k);

struct Centralization {
  double value = 0.0;    // fraction in [0, 1]
  bool caution = false;  // fewer than 3 nodes
};
Centralization ComputeCentralization(const Digraph& g, CentralityKind kind);
// Directed shortest-path betweenness of every node.
std::vector<double> Betweenness(const Digraph& g);

struct LayerStats {
  std::size_t nodes = 0;
  std::size_t arcs = 0;
  DyadCensus dyads;
  std::optional<double> density;
  std::array<std::optional<Centralization>, 4> centralization;
  std::size_t components = 0;
  double main_component_share = 0.0;
};
LayerStats SummarizeLayer(const Digraph& g);

// Chain columns of the composition table.
struct CompositionColumn {
  std::string label;
  std::size_t volume = 0;
  // [site][role]: role 0 participants (seeds included), 1 others
  std::array<std::array<std::size_t, 2>, kNumSites + 1> by_site_role{};
  std::array<std::size_t, 3> by_sex{};  // F, M, unknown
  // [site][sex][role] for the corridor sites
  std::array<std::array<std::array<std::size_t, 2>, 2>, 2> by_site_sex_role{};
  std::array<std::size_t, 2> by_role{};
  std::optional<DistanceSummary> distances;
  double share_of_network = 0.0;
};
// `members` are layer indices. Sites beyond origin/destination and missing
// sites land in the last by_site_role row.
CompositionColumn ComposeMembers(const MultiLayerNetwork& net, const Digraph& layer,
                                 std::span<const std::size_t> members,
                                 std::string label);
std::vector<CompositionColumn> ChainComposition(const MultiLayerNetwork& net,
                                                const Digraph& layer,
                                                std::span<const Chain> chains);

enum class RespondentClass : std::uint8_t { kMigrant, kReturnee, kNonMigrant };
inline constexpr int kNumRespondentClasses = 3;
std::string_view ToString(RespondentClass c);
RespondentClass ClassOf(const Person& p);

// Rows of the alter table: friends by alter residence (destination, origin,
// elsewhere), friends total, kin by residence, kin total, all alters.
inline constexpr int kNumAlterRows = 9;
std::string_view AlterRowName(int row);

struct CountStat {
  std::size_t total = 0;
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation
};
struct AlterSummary {
  // [row][class]; class index kNumRespondentClasses is all respondents.
  std::array<std::array<CountStat, kNumRespondentClasses + 1>, kNumAlterRows> cells{};
  std::array<std::size_t, kNumRespondentClasses + 1> respondents{};
};
// Per-respondent alter counts folded by respondent class. `persons` is
// indexed by person id. Returnee alters
// count as friends living at the origin.
AlterSummary SummarizeAlters(const StudyLog& log, std::span<const Person> persons);

// Participant demographics by interview site (origin, destination).
struct DemographicSummary {
  std::array<std::size_t, 2> n{};
  std::array<std::array<std::size_t, 2>, 2> sex{};       // [site][F, M]
  std::array<double, 2> age_mean{};
  std::array<double, 2> age_sd{};
  std::array<std::array<std::size_t, 3>, 2> migrant{};   // [site][type]
  std::array<std::vector<std::size_t>, 2> religion;
  std::array<std::vector<std::size_t>, 2> education;
  std::array<std::vector<std::size_t>, 2> work;
  std::array<std::vector<std::size_t>, 2> marital;
};
DemographicSummary SummarizeParticipants(const StudyLog& log,
                                         std::span<const Person> persons);

}  // namespace tsf

#endif  // TSF_NETSTATS_H_
