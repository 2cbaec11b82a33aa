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

#include "tsf/netbuild.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <set>

#include <fmt/format.h>

namespace tsf {

std::string_view ToString(NodeRole r) {
  switch (r) {
    case NodeRole::kParticipant: return "participant";
    case NodeRole::kNonParticipantReferral: return "referral";
    case NodeRole::kAlterOnly: return "alter";
  }
  return "?";
}

NodeRole ParseNodeRole(std::string_view s) {
  if (s == "participant") return NodeRole::kParticipant;
  if (s == "referral") return NodeRole::kNonParticipantReferral;
  if (s == "alter") return NodeRole::kAlterOnly;
  throw ParseError(fmt::format("unknown node role '{}'", s));
}

std::string_view ToString(ArcKind k) {
  return k == ArcKind::kReferral ? "referral" : "nomination";
}

ArcKind ParseArcKind(std::string_view s) {
  if (s == "referral") return ArcKind::kReferral;
  if (s == "nomination") return ArcKind::kNomination;
  throw ParseError(fmt::format("unknown arc kind '{}'", s));
}

MultiLayerNetwork::MultiLayerNetwork(std::vector<Node> nodes,
                                     std::vector<Arc> arcs,
                                     std::vector<Edge> edges)
    : nodes_(std::move(nodes)), arcs_(std::move(arcs)), edges_(std::move(edges)) {
  std::sort(nodes_.begin(), nodes_.end(),
            [](const Node& a, const Node& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    if (nodes_[i].id == nodes_[i - 1].id) {
      throw Error(fmt::format("duplicate node {}", nodes_[i].id));
    }
  }
  std::sort(arcs_.begin(), arcs_.end());
  arcs_.erase(std::unique(arcs_.begin(), arcs_.end()), arcs_.end());
  for (auto& e : edges_) {
    if (e.a > e.b) std::swap(e.a, e.b);
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  for (const auto& a : arcs_) {
    if (a.src == a.dst) throw Error(fmt::format("self-arc on node {}", a.src));
    if (!FindNode(a.src) || !FindNode(a.dst)) {
      throw Error(fmt::format("arc {}->{} has an unknown endpoint", a.src, a.dst));
    }
  }
  for (const auto& e : edges_) {
    if (e.a == e.b) throw Error(fmt::format("self-edge on node {}", e.a));
    if (!FindNode(e.a) || !FindNode(e.b)) {
      throw Error(fmt::format("edge {}-{} has an unknown endpoint", e.a, e.b));
    }
  }
}

const Node* MultiLayerNetwork::FindNode(EntityId id) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                             [](const Node& n, EntityId v) { return n.id < v; });
  if (it == nodes_.end() || it->id != id) return nullptr;
  return &*it;
}

std::size_t MultiLayerNetwork::CountArcs(ArcKind kind) const {
  return static_cast<std::size_t>(std::count_if(
      arcs_.begin(), arcs_.end(), [kind](const Arc& a) { return a.kind == kind; }));
}

namespace {

class Assembler {
 public:
  Assembler(const StudyLog& log, const EntityPartition& partition)
      : log_(log), partition_(partition) {}

  void AddNode(ObsId obs, NodeRole role) {
    EntityId e = partition_.EntityOf(obs);
    auto [it, inserted] = roles_.emplace(e, role);
    if (!inserted && static_cast<int>(role) < static_cast<int>(it->second)) {
      it->second = role;
    }
  }

  void AddArc(ObsId src, ObsId dst, ArcKind kind) {
    EntityId a = partition_.EntityOf(src);
    EntityId b = partition_.EntityOf(dst);
    if (a != b) arcs_.push_back({a, b, kind});
  }

  void AddEdge(ObsId x, ObsId y) {
    EntityId a = partition_.EntityOf(x);
    EntityId b = partition_.EntityOf(y);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    edges_.push_back({a, b});
  }

  void LinkTracing() {
    for (const auto& iv : log_.interviews) AddNode(iv.respondent, NodeRole::kParticipant);
    for (const auto& r : log_.referrals) {
      AddNode(r.referee, NodeRole::kParticipant);
      AddNode(r.referral, NodeRole::kNonParticipantReferral);
      AddArc(r.referee, r.referral, ArcKind::kReferral);
    }
  }

  void Personal() {
    for (const auto& pn : log_.personal_networks) {
      AddNode(pn.respondent, NodeRole::kParticipant);
      for (const auto& alter : pn.alters) {
        AddNode(alter.obs, NodeRole::kAlterOnly);
        AddArc(pn.respondent, alter.obs, ArcKind::kNomination);
      }
      for (const auto& t : pn.alter_ties) {
        if (t.present) AddEdge(t.a, t.b);
      }
    }
  }

  MultiLayerNetwork Finish() {
    std::set<EntityId> seeds;
    for (ObsId s : log_.seeds) seeds.insert(partition_.EntityOf(s));
    std::vector<Node> nodes;
    nodes.reserve(roles_.size());
    for (const auto& [e, role] : roles_) {
      const EntityProfile& p = partition_.profile(e);
      nodes.push_back({e, role, seeds.count(e) > 0, p.sex, p.residence});
    }
    return MultiLayerNetwork(std::move(nodes), std::move(arcs_), std::move(edges_));
  }

 private:
  const StudyLog& log_;
  const EntityPartition& partition_;
  std::map<EntityId, NodeRole> roles_;
  std::vector<Arc> arcs_;
  std::vector<Edge> edges_;
};

}  // namespace

MultiLayerNetwork BuildLinkTracingNetwork(const StudyLog& log,
                                          const EntityPartition& partition) {
  Assembler a(log, partition);
  a.LinkTracing();
  return a.Finish();
}

MultiLayerNetwork BuildNetworkOfNetworks(const StudyLog& log,
                                         const EntityPartition& partition) {
  Assembler a(log, partition);
  a.LinkTracing();
  a.Personal();
  return a.Finish();
}

Digraph Digraph::FromArcs(std::size_t n,
                          std::span<const std::pair<std::size_t, std::size_t>> arcs) {
  Digraph g(n);
  for (auto [u, v] : arcs) g.AddArc(u, v);
  return g;
}

std::optional<std::size_t> Digraph::IndexOf(EntityId id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return std::nullopt;
  return static_cast<std::size_t>(it - ids_.begin());
}

bool Digraph::HasArc(std::size_t u, std::size_t v) const {
  return std::binary_search(out_[u].begin(), out_[u].end(), v);
}

void Digraph::AddArc(std::size_t u, std::size_t v) {
  if (u >= num_nodes() || v >= num_nodes()) {
    throw Error(fmt::format("arc {}->{} out of range", u, v));
  }
  if (u == v) throw Error(fmt::format("self-loop on node {}", u));
  auto it = std::lower_bound(out_[u].begin(), out_[u].end(), v);
  if (it != out_[u].end() && *it == v) return;
  out_[u].insert(it, v);
  in_[v].insert(std::lower_bound(in_[v].begin(), in_[v].end(), u), u);
  ++num_arcs_;
}

std::vector<std::pair<std::size_t, std::size_t>> Digraph::ArcList() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  out.reserve(num_arcs_);
  for (std::size_t u = 0; u < num_nodes(); ++u) {
    for (std::size_t v : out_[u]) out.emplace_back(u, v);
  }
  return out;
}

Digraph Digraph::Induced(std::span<const std::size_t> members) const {
  Digraph g(members.size());
  std::vector<std::size_t> pos(num_nodes(), SIZE_MAX);
  for (std::size_t i = 0; i < members.size(); ++i) {
    pos[members[i]] = i;
    g.ids_[i] = ids_[members[i]];
    g.sex_[i] = sex_[members[i]];
    g.site_[i] = site_[members[i]];
  }
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t v : out_[members[i]]) {
      if (pos[v] != SIZE_MAX) g.AddArc(i, pos[v]);
    }
  }
  return g;
}

Digraph MakeLayer(const MultiLayerNetwork& net, std::span<const ArcKind> kinds,
                  bool participants_only) {
  auto wanted = [&](ArcKind k) {
    return std::find(kinds.begin(), kinds.end(), k) != kinds.end();
  };
  bool referral_only = kinds.size() == 1 && kinds[0] == ArcKind::kReferral;
  std::vector<const Node*> keep;
  for (const auto& n : net.nodes()) {
    if (participants_only && n.role != NodeRole::kParticipant) continue;
    if (referral_only && n.role == NodeRole::kAlterOnly) continue;
    keep.push_back(&n);
  }
  Digraph g(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    g.ids_[i] = keep[i]->id;
    g.sex_[i] = keep[i]->sex;
    g.site_[i] = keep[i]->site;
  }
  for (const auto& a : net.arcs()) {
    if (!wanted(a.kind)) continue;
    auto u = g.IndexOf(a.src);
    auto v = g.IndexOf(a.dst);
    if (u && v) g.AddArc(*u, *v);
  }
  return g;
}

Digraph LinkTracingLayer(const MultiLayerNetwork& net) {
  const ArcKind k[] = {ArcKind::kReferral};
  return MakeLayer(net, k);
}

Digraph ParticipantLayer(const MultiLayerNetwork& net) {
  const ArcKind k[] = {ArcKind::kReferral};
  return MakeLayer(net, k, true);
}

Digraph NetworkOfNetworksLayer(const MultiLayerNetwork& net) {
  const ArcKind k[] = {ArcKind::kReferral, ArcKind::kNomination};
  return MakeLayer(net, k);
}

PersonalNetwork PersonalLayer(const MultiLayerNetwork& net, EntityId ego) {
  if (!net.FindNode(ego)) throw Error(fmt::format("unknown node {}", ego));
  PersonalNetwork p;
  p.ego = ego;
  for (const auto& a : net.arcs()) {
    if (a.src == ego && a.kind == ArcKind::kNomination) p.alters.push_back(a.dst);
  }
  for (const auto& e : net.edges()) {
    if (std::binary_search(p.alters.begin(), p.alters.end(), e.a) &&
        std::binary_search(p.alters.begin(), p.alters.end(), e.b)) {
      p.alter_edges.push_back(e);
    }
  }
  return p;
}

double ComponentResult::main_share() const {
  if (sizes.empty()) return 0.0;
  std::size_t total = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
  return static_cast<double>(sizes.front()) / static_cast<double>(total);
}

ComponentResult WeakComponents(const Digraph& g) {
  const std::size_t n = g.num_nodes();
  ComponentResult r;
  r.label.assign(n, 0);
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<std::size_t> comp;
    seen[s] = true;
    stack.push_back(s);
    while (!stack.empty()) {
      std::size_t u = stack.back();
      stack.pop_back();
      comp.push_back(u);
      for (const auto* adj : {&g.out(u), &g.in(u)}) {
        for (std::size_t v : *adj) {
          if (!seen[v]) {
            seen[v] = true;
            stack.push_back(v);
          }
        }
      }
    }
    EntityId label = g.id(comp[0]);
    for (std::size_t u : comp) label = std::min(label, g.id(u));
    for (std::size_t u : comp) r.label[u] = label;
    r.sizes.push_back(comp.size());
  }
  std::sort(r.sizes.begin(), r.sizes.end(), std::greater<>());
  return r;
}

namespace {

std::vector<int> BfsDepths(const Digraph& g, std::size_t src) {
  std::vector<int> depth(g.num_nodes(), -1);
  std::deque<std::size_t> queue{src};
  depth[src] = 0;
  while (!queue.empty()) {
    std::size_t u = queue.front();
    queue.pop_front();
    for (std::size_t v : g.out(u)) {
      if (depth[v] < 0) {
        depth[v] = depth[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return depth;
}

void PairwiseInto(const Digraph& g, DistanceSummary& s) {
  double sum = 0.0, sum_sq = 0.0;
  std::size_t count = 0;
  for (std::size_t u = 0; u < g.num_nodes(); ++u) {
    auto d = BfsDepths(g, u);
    for (std::size_t v = 0; v < g.num_nodes(); ++v) {
      if (v == u || d[v] < 0) continue;
      sum += d[v];
      sum_sq += static_cast<double>(d[v]) * d[v];
      ++count;
    }
  }
  s.reachable_pairs = count;
  if (count == 0) return;
  s.avg_pairwise = sum / static_cast<double>(count);
  double var = sum_sq / static_cast<double>(count) - s.avg_pairwise * s.avg_pairwise;
  s.sd_pairwise = std::sqrt(std::max(0.0, var));
}

}  // namespace

std::vector<Chain> DecomposeChains(const Digraph& layer,
                                   std::span<const EntityId> seeds) {
  std::vector<Chain> chains;
  for (EntityId seed : seeds) {
    auto idx = layer.IndexOf(seed);
    if (!idx) throw Error(fmt::format("seed {} is not a node of the layer", seed));
    auto d = BfsDepths(layer, *idx);
    Chain c;
    c.seed = seed;
    for (std::size_t v = 0; v < d.size(); ++v) {
      if (d[v] >= 0) {
        c.members.push_back(v);
        c.depth[v] = d[v];
      }
    }
    chains.push_back(std::move(c));
  }
  return chains;
}

DistanceSummary ChainDistances(const Digraph& layer, const Chain& chain) {
  if (chain.members.empty()) throw Error("empty chain");
  DistanceSummary s;
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& [v, d] : chain.depth) {
    s.longest_from_seed = std::max(s.longest_from_seed, d);
    if (d > 0) {
      sum += d;
      ++count;
    }
  }
  if (count > 0) s.avg_from_seed = sum / static_cast<double>(count);
  PairwiseInto(layer.Induced(chain.members), s);
  return s;
}

DistanceSummary LayerDistances(const Digraph& layer) {
  DistanceSummary s;
  PairwiseInto(layer, s);
  return s;
}

std::vector<EntityId> SeedEntities(const StudyLog& log,
                                   const EntityPartition& partition) {
  std::vector<EntityId> out;
  for (ObsId s : log.seeds) out.push_back(partition.EntityOf(s));
  return out;
}

}  // namespace tsf
