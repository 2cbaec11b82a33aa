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

#include "tsf/netstats.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include <fmt/format.h>

#include "tsf/rng.h"

namespace tsf {

std::string_view ToString(NodeAttr a) {
  switch (a) {
    case NodeAttr::kSex: return "sex";
    case NodeAttr::kSite: return "site";
    case NodeAttr::kSiteSex: return "site_sex";
  }
  return "?";
}

NodeAttr ParseNodeAttr(std::string_view s) {
  if (s == "sex") return NodeAttr::kSex;
  if (s == "site") return NodeAttr::kSite;
  if (s == "site_sex") return NodeAttr::kSiteSex;
  throw ParseError(fmt::format("unknown node attribute '{}'", s));
}

std::size_t Categorical::num_present() const {
  std::vector<bool> seen(names.size(), false);
  for (int c : code) seen[static_cast<std::size_t>(c)] = true;
  return static_cast<std::size_t>(std::count(seen.begin(), seen.end(), true));
}

Categorical NodeCategories(const Digraph& g, NodeAttr attr) {
  Categorical c;
  if (attr == NodeAttr::kSex) {
    c.names = {"F", "M"};
  } else if (attr == NodeAttr::kSite) {
    for (Site s : kAllSites) c.names.emplace_back(ToString(s));
  } else {
    for (Site s : kAllSites) {
      for (Sex x : {Sex::kFemale, Sex::kMale}) {
        c.names.push_back(fmt::format("{}_{}", ToString(s), ToString(x)));
      }
    }
  }
  std::vector<EntityId> missing;
  c.code.resize(g.num_nodes());
  for (std::size_t v = 0; v < g.num_nodes(); ++v) {
    bool need_sex = attr != NodeAttr::kSite;
    bool need_site = attr != NodeAttr::kSex;
    if ((need_sex && !g.sex(v)) || (need_site && !g.site(v))) {
      missing.push_back(g.id(v));
      continue;
    }
    switch (attr) {
      case NodeAttr::kSex: c.code[v] = Index(*g.sex(v)); break;
      case NodeAttr::kSite: c.code[v] = Index(*g.site(v)); break;
      case NodeAttr::kSiteSex: c.code[v] = Index(*g.site(v)) * 2 + Index(*g.sex(v)); break;
    }
  }
  if (!missing.empty()) {
    std::string list;
    for (std::size_t i = 0; i < missing.size() && i < 20; ++i) {
      list += (i ? "," : "") + std::to_string(missing[i]);
    }
    if (missing.size() > 20) list += ",...";
    throw Error(fmt::format("{} node(s) lack attribute {}: {}", missing.size(),
                            ToString(attr), list));
  }
  return c;
}

double Density(const Digraph& g) {
  const std::size_t n = g.num_nodes();
  if (n < 2) throw Error("density is undefined for fewer than 2 nodes");
  return static_cast<double>(g.num_arcs()) / (static_cast<double>(n) * (n - 1));
}

DyadCensus CountDyads(const Digraph& g) {
  DyadCensus d;
  for (std::size_t u = 0; u < g.num_nodes(); ++u) {
    for (std::size_t v : g.out(u)) {
      if (g.HasArc(v, u)) {
        if (u < v) ++d.mutual;
      } else {
        ++d.asymmetric;
      }
    }
  }
  const std::size_t n = g.num_nodes();
  d.null = n * (n > 0 ? n - 1 : 0) / 2 - d.mutual - d.asymmetric;
  return d;
}

std::size_t MixingMatrix::total() const {
  std::size_t t = 0;
  for (const auto& row : counts) t = std::accumulate(row.begin(), row.end(), t);
  return t;
}

MixingMatrix ComputeMixing(const Digraph& g, const Categorical& attr) {
  MixingMatrix m;
  m.categories = attr.names;
  m.counts.assign(attr.names.size(), std::vector<std::size_t>(attr.names.size(), 0));
  for (auto [u, v] : g.ArcList()) {
    ++m.counts[static_cast<std::size_t>(attr.code[u])][static_cast<std::size_t>(attr.code[v])];
  }
  return m;
}

namespace {

struct EiCount {
  std::size_t external = 0;
  std::size_t internal = 0;
  double value() const {
    return (static_cast<double>(external) - static_cast<double>(internal)) /
           static_cast<double>(external + internal);
  }
};

EiCount CountEi(const std::vector<std::pair<std::size_t, std::size_t>>& arcs,
                std::span<const int> code) {
  EiCount c;
  for (auto [u, v] : arcs) {
    if (code[u] == code[v]) {
      ++c.internal;
    } else {
      ++c.external;
    }
  }
  return c;
}

void CheckCodes(const Digraph& g, std::span<const int> code) {
  if (code.size() != g.num_nodes()) {
    throw Error(fmt::format("attribute vector has {} entries for {} nodes",
                            code.size(), g.num_nodes()));
  }
}

}  // namespace

double EiGlobal(const Digraph& g, std::span<const int> code) {
  CheckCodes(g, code);
  if (g.num_arcs() == 0) throw Error("E-I index is undefined without arcs");
  return CountEi(g.ArcList(), code).value();
}

std::optional<double> EiNode(const Digraph& g, std::size_t v,
                             std::span<const int> code) {
  CheckCodes(g, code);
  if (v >= g.num_nodes()) throw Error(fmt::format("node index {} out of range", v));
  if (g.out(v).empty()) return std::nullopt;
  EiCount c;
  for (std::size_t w : g.out(v)) {
    if (code[v] == code[w]) {
      ++c.internal;
    } else {
      ++c.external;
    }
  }
  return c.value();
}

EIResult EiPermutationTest(const Digraph& g, std::span<const int> code,
                           int n_permutations, std::uint64_t rng_seed) {
  CheckCodes(g, code);
  if (g.num_arcs() == 0) throw Error("E-I index is undefined without arcs");
  if (n_permutations < 1) throw Error("need at least one permutation");
  std::vector<int> sorted(code.begin(), code.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.empty() || sorted.front() == sorted.back()) {
    throw Error("E-I permutation test is degenerate with a single category");
  }
  const auto arcs = g.ArcList();
  EIResult r;
  r.n_permutations = n_permutations;
  r.observed = CountEi(arcs, code).value();
  std::vector<double> perm(static_cast<std::size_t>(n_permutations));
  std::vector<int> shuffled(code.size());
  for (int i = 0; i < n_permutations; ++i) {
    std::copy(code.begin(), code.end(), shuffled.begin());
    Rng rng(DeriveSeed(rng_seed, "ei_perm", static_cast<std::uint64_t>(i)));
    rng.Shuffle(shuffled);
    perm[static_cast<std::size_t>(i)] = CountEi(arcs, shuffled).value();
  }
  double sum = std::accumulate(perm.begin(), perm.end(), 0.0);
  r.mean = sum / n_permutations;
  double ss = 0.0;
  for (double x : perm) ss += (x - r.mean) * (x - r.mean);
  r.sd = std::sqrt(ss / n_permutations);
  const double obs_dev = std::abs(r.observed - r.mean);
  // Relative tolerance so that permutations equal to the observation up to
  // rounding are counted as at least as extreme.
  const double tol = 1e-12 * std::max(1.0, obs_dev);
  std::size_t extreme = 0;
  for (double x : perm) {
    if (std::abs(x - r.mean) >= obs_dev - tol) ++extreme;
  }
  r.p = (1.0 + static_cast<double>(extreme)) / (n_permutations + 1.0);
  return r;
}

std::string_view ToString(CentralityKind k) {
  switch (k) {
    case CentralityKind::kIndegree: return "indegree";
    case CentralityKind::kOutdegree: return "outdegree";
    case CentralityKind::kDegree: return "degree";
    case CentralityKind::kBetweenness: return "betweenness";
  }
  return "?";
}

std::vector<double> Betweenness(const Digraph& g) {
  const std::size_t n = g.num_nodes();
  std::vector<double> cb(n, 0.0);
  std::vector<std::vector<std::size_t>> pred(n);
  std::vector<double> sigma(n), delta(n);
  std::vector<long> dist(n);
  std::vector<std::size_t> order;
  std::deque<std::size_t> queue;
  for (std::size_t s = 0; s < n; ++s) {
    for (auto& p : pred) p.clear();
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    std::fill(dist.begin(), dist.end(), -1);
    order.clear();
    sigma[s] = 1.0;
    dist[s] = 0;
    queue.push_back(s);
    while (!queue.empty()) {
      std::size_t v = queue.front();
      queue.pop_front();
      order.push_back(v);
      for (std::size_t w : g.out(v)) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          queue.push_back(w);
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] += sigma[v];
          pred[w].push_back(v);
        }
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      std::size_t w = *it;
      for (std::size_t v : pred[w]) {
        delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      }
      if (w != s) cb[w] += delta[w];
    }
  }
  return cb;
}

Centralization ComputeCentralization(const Digraph& g, CentralityKind kind) {
  const std::size_t n = g.num_nodes();
  if (n < 2) throw Error("centralization is undefined for fewer than 2 nodes");
  std::vector<double> c(n);
  double denom = 0.0;
  const double nm1 = static_cast<double>(n - 1);
  const double nm2 = static_cast<double>(n - 2);
  switch (kind) {
    case CentralityKind::kIndegree:
      for (std::size_t v = 0; v < n; ++v) c[v] = static_cast<double>(g.in(v).size());
      denom = nm1 * nm1;
      break;
    case CentralityKind::kOutdegree:
      for (std::size_t v = 0; v < n; ++v) c[v] = static_cast<double>(g.out(v).size());
      denom = nm1 * nm1;
      break;
    case CentralityKind::kDegree:
      for (std::size_t v = 0; v < n; ++v) {
        c[v] = static_cast<double>(g.in(v).size() + g.out(v).size());
      }
      denom = 2.0 * nm1 * nm2;
      break;
    case CentralityKind::kBetweenness:
      c = Betweenness(g);
      denom = nm1 * nm1 * nm2;
      break;
  }
  Centralization r;
  r.caution = n < 3;
  if (denom <= 0.0) return r;
  const double cmax = *std::max_element(c.begin(), c.end());
  double sum = 0.0;
  for (double x : c) sum += cmax - x;
  r.value = sum / denom;
  return r;
}

LayerStats SummarizeLayer(const Digraph& g) {
  LayerStats s;
  s.nodes = g.num_nodes();
  s.arcs = g.num_arcs();
  s.dyads = CountDyads(g);
  if (s.nodes >= 2) {
    s.density = Density(g);
    for (int k = 0; k < 4; ++k) {
      s.centralization[static_cast<std::size_t>(k)] =
          ComputeCentralization(g, static_cast<CentralityKind>(k));
    }
  }
  auto comp = WeakComponents(g);
  s.components = comp.sizes.size();
  s.main_component_share = comp.main_share();
  return s;
}

CompositionColumn ComposeMembers(const MultiLayerNetwork& net, const Digraph& layer,
                                 std::span<const std::size_t> members,
                                 std::string label) {
  CompositionColumn col;
  col.label = std::move(label);
  col.volume = members.size();
  for (std::size_t v : members) {
    const Node* node = net.FindNode(layer.id(v));
    if (!node) throw Error(fmt::format("layer node {} not in network", layer.id(v)));
    const int role = node->role == NodeRole::kParticipant ? 0 : 1;
    ++col.by_role[static_cast<std::size_t>(role)];
    const int site = node->site ? Index(*node->site) : kNumSites;
    ++col.by_site_role[static_cast<std::size_t>(site)][static_cast<std::size_t>(role)];
    const int sex = node->sex ? Index(*node->sex) : 2;
    ++col.by_sex[static_cast<std::size_t>(sex)];
    if (node->site && node->sex && *node->site != Site::kOther) {
      ++col.by_site_sex_role[static_cast<std::size_t>(Index(*node->site))]
                            [static_cast<std::size_t>(sex)][static_cast<std::size_t>(role)];
    }
  }
  if (layer.num_nodes() > 0) {
    col.share_of_network =
        static_cast<double>(members.size()) / static_cast<double>(layer.num_nodes());
  }
  return col;
}

std::vector<CompositionColumn> ChainComposition(const MultiLayerNetwork& net,
                                                const Digraph& layer,
                                                std::span<const Chain> chains) {
  std::vector<CompositionColumn> cols;
  for (std::size_t i = 0; i < chains.size(); ++i) {
    auto col = ComposeMembers(net, layer, chains[i].members,
                              fmt::format("seed_{}", i + 1));
    col.distances = ChainDistances(layer, chains[i]);
    cols.push_back(std::move(col));
  }
  std::vector<std::size_t> all(layer.num_nodes());
  std::iota(all.begin(), all.end(), std::size_t{0});
  auto total = ComposeMembers(net, layer, all, "link_tracing");
  total.distances = LayerDistances(layer);
  cols.push_back(std::move(total));
  return cols;
}

std::string_view ToString(RespondentClass c) {
  switch (c) {
    case RespondentClass::kMigrant: return "migrant";
    case RespondentClass::kReturnee: return "returnee";
    case RespondentClass::kNonMigrant: return "non_migrant";
  }
  return "?";
}

RespondentClass ClassOf(const Person& p) {
  if (p.site == Site::kDestination || p.migrant_type == MigrantType::kMigrant) {
    return RespondentClass::kMigrant;
  }
  return p.migrant_type == MigrantType::kReturnee ? RespondentClass::kReturnee
                                                  : RespondentClass::kNonMigrant;
}

std::string_view AlterRowName(int row) {
  static constexpr std::array<std::string_view, kNumAlterRows> kNames = {
      "friends_destination", "friends_origin", "friends_elsewhere",
      "friends_total",       "kin_destination", "kin_origin",
      "kin_elsewhere",       "kin_total",       "all_alters"};
  return kNames.at(static_cast<std::size_t>(row));
}

namespace {

// Row of the alter table for a category seen from a respondent's site.
int AlterRow(AlterCategory c, Site respondent_site) {
  auto residence_offset = [](Site s) {
    return s == Site::kDestination ? 0 : s == Site::kOrigin ? 1 : 2;
  };
  const Site local = respondent_site;
  const Site corridor = OtherFieldSite(respondent_site);
  switch (c) {
    case AlterCategory::kLocalFriends: return residence_offset(local);
    case AlterCategory::kLocalKin: return 4 + residence_offset(local);
    case AlterCategory::kReturnees: return residence_offset(Site::kOrigin);
    case AlterCategory::kCorridorKin: return 4 + residence_offset(corridor);
    case AlterCategory::kCorridorFriends: return residence_offset(corridor);
    case AlterCategory::kElsewhereKin: return 6;
    case AlterCategory::kElsewhereFriends: return 2;
  }
  return 8;
}

const Person& PersonAt(std::span<const Person> persons, PersonId id) {
  if (id >= persons.size()) throw Error(fmt::format("unknown person {}", id));
  return persons[id];
}

CountStat Fold(const std::vector<double>& xs) {
  CountStat s;
  if (xs.empty()) return s;
  double sum = std::accumulate(xs.begin(), xs.end(), 0.0);
  s.total = static_cast<std::size_t>(std::llround(sum));
  s.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return s;
}

}  // namespace

AlterSummary SummarizeAlters(const StudyLog& log, std::span<const Person> persons) {
  constexpr int kAll = kNumRespondentClasses;
  std::array<std::array<std::vector<double>, kNumRespondentClasses + 1>, kNumAlterRows> xs;
  AlterSummary out;
  for (const auto& pn : log.personal_networks) {
    const Person& ego = PersonAt(persons, pn.respondent_person);
    const int cls = static_cast<int>(ClassOf(ego));
    std::array<double, kNumAlterRows> counts{};
    for (const auto& a : pn.alters) {
      int row = AlterRow(a.category, ego.site);
      counts[static_cast<std::size_t>(row)] += 1.0;
    }
    counts[3] = counts[0] + counts[1] + counts[2];
    counts[7] = counts[4] + counts[5] + counts[6];
    counts[8] = counts[3] + counts[7];
    for (int r = 0; r < kNumAlterRows; ++r) {
      xs[static_cast<std::size_t>(r)][static_cast<std::size_t>(cls)].push_back(counts[static_cast<std::size_t>(r)]);
      xs[static_cast<std::size_t>(r)][kAll].push_back(counts[static_cast<std::size_t>(r)]);
    }
    ++out.respondents[static_cast<std::size_t>(cls)];
    ++out.respondents[kAll];
  }
  for (std::size_t r = 0; r < kNumAlterRows; ++r) {
    for (std::size_t c = 0; c <= kNumRespondentClasses; ++c) out.cells[r][c] = Fold(xs[r][c]);
  }
  return out;
}

DemographicSummary SummarizeParticipants(const StudyLog& log,
                                         std::span<const Person> persons) {
  DemographicSummary d;
  for (int s = 0; s < 2; ++s) {
    d.religion[static_cast<std::size_t>(s)].assign(kReligions.size(), 0);
    d.education[static_cast<std::size_t>(s)].assign(kEducationLevels.size(), 0);
    d.work[static_cast<std::size_t>(s)].assign(kWorkStatuses.size(), 0);
    d.marital[static_cast<std::size_t>(s)].assign(kMaritalStatuses.size(), 0);
  }
  std::array<std::vector<double>, 2> ages;
  for (const auto& iv : log.interviews) {
    const Person& p = PersonAt(persons, iv.person);
    if (p.site == Site::kOther) continue;
    const auto s = static_cast<std::size_t>(Index(p.site));
    ++d.n[s];
    ++d.sex[s][static_cast<std::size_t>(Index(p.sex))];
    ages[s].push_back(p.age);
    ++d.migrant[s][static_cast<std::size_t>(p.migrant_type)];
    ++d.religion[s][p.religion];
    ++d.education[s][p.education];
    ++d.work[s][p.work];
    ++d.marital[s][p.marital];
  }
  for (std::size_t s = 0; s < 2; ++s) {
    auto f = Fold(ages[s]);
    d.age_mean[s] = f.mean;
    d.age_sd[s] = f.sd;
  }
  return d;
}

}  // namespace tsf
