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

#ifndef TSF_NETBUILD_H_
#define TSF_NETBUILD_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "tsf/fieldwork.h"
#include "tsf/identity.h"
#include "tsf/types.h"

namespace tsf {

enum class NodeRole : std::uint8_t {
  kParticipant = 0,
  kNonParticipantReferral = 1,
  kAlterOnly = 2,
};
std::string_view ToString(NodeRole r);
NodeRole ParseNodeRole(std::string_view s);

enum class ArcKind : std::uint8_t { kReferral = 0, kNomination = 1 };
std::string_view ToString(ArcKind k);
ArcKind ParseArcKind(std::string_view s);

struct Node {
  EntityId id = 0;
  NodeRole role = NodeRole::kAlterOnly;
  bool seed = false;
  std::optional<Sex> sex;
  std::optional<Site> site;

  bool operator==(const Node&) const = default;
};

struct Arc {
  EntityId src = 0;
  EntityId dst = 0;
  ArcKind kind = ArcKind::kReferral;

  auto operator<=>(const Arc&) const = default;
};

struct Edge {
  EntityId a = 0;  // a < b
  EntityId b = 0;

  auto operator<=>(const Edge&) const = default;
};

// Entities with typed arcs and undirected alter-alter edges. Elements are
// kept sorted (nodes by id, arcs by (src, dst, kind), edges by (a, b)) and
// deduplicated, so equal networks compare equal.
class MultiLayerNetwork {
 public:
  MultiLayerNetwork() = default;
  // Validates: no self-arcs or self-edges, every endpoint is a node.
  MultiLayerNetwork(std::vector<Node> nodes, std::vector<Arc> arcs,
                    std::vector<Edge> edges);

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Node* FindNode(EntityId id) const;
  std::size_t CountArcs(ArcKind kind) const;

  bool operator==(const MultiLayerNetwork&) const = default;

 private:
  std::vector<Node> nodes_;
  std::vector<Arc> arcs_;
  std::vector<Edge> edges_;
};

MultiLayerNetwork BuildLinkTracingNetwork(const StudyLog& log,
                                          const EntityPartition& partition);
MultiLayerNetwork BuildNetworkOfNetworks(const StudyLog& log,
                                         const EntityPartition& partition);

// Simple directed graph over dense indices: the analysis view of one layer.
// Parallel arcs collapse; self-loops are rejected.
class Digraph {
 public:
  Digraph() = default;
  explicit Digraph(std::size_t n) : ids_(n), sex_(n), site_(n), out_(n), in_(n) {
    for (std::size_t i = 0; i < n; ++i) ids_[i] = static_cast<EntityId>(i);
  }
  // Builds from arcs over nodes 0..n-1.
  static Digraph FromArcs(std::size_t n,
                          std::span<const std::pair<std::size_t, std::size_t>> arcs);

  std::size_t num_nodes() const { return ids_.size(); }
  std::size_t num_arcs() const { return num_arcs_; }
  EntityId id(std::size_t v) const { return ids_[v]; }
  std::optional<std::size_t> IndexOf(EntityId id) const;
  const std::vector<std::size_t>& out(std::size_t v) const { return out_[v]; }
  const std::vector<std::size_t>& in(std::size_t v) const { return in_[v]; }
  bool HasArc(std::size_t u, std::size_t v) const;
  std::vector<std::pair<std::size_t, std::size_t>> ArcList() const;

  const std::optional<Sex>& sex(std::size_t v) const { return sex_[v]; }
  const std::optional<Site>& site(std::size_t v) const { return site_[v]; }
  void set_sex(std::size_t v, std::optional<Sex> s) { sex_[v] = s; }
  void set_site(std::size_t v, std::optional<Site> s) { site_[v] = s; }

  void AddArc(std::size_t u, std::size_t v);  // no-op if present
  // Subgraph induced by `members` (indices), in the given order.
  Digraph Induced(std::span<const std::size_t> members) const;

 private:
  friend Digraph MakeLayer(const MultiLayerNetwork&, std::span<const ArcKind>,
                           bool participants_only);
  std::vector<EntityId> ids_;
  std::vector<std::optional<Sex>> sex_;
  std::vector<std::optional<Site>> site_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> in_;
  std::size_t num_arcs_ = 0;
};

// Layer views. Nodes are indexed in ascending entity-id order.
Digraph MakeLayer(const MultiLayerNetwork& net, std::span<const ArcKind> kinds,
                  bool participants_only = false);
// Referral arcs over every node that takes part in referrals.
Digraph LinkTracingLayer(const MultiLayerNetwork& net);
// Referral arcs among participants only.
Digraph ParticipantLayer(const MultiLayerNetwork& net);
// All arcs, kinds collapsed, over all nodes; alter-alter edges excluded.
Digraph NetworkOfNetworksLayer(const MultiLayerNetwork& net);

// One respondent's star plus reported alter-alter edges.
struct PersonalNetwork {
  EntityId ego = 0;
  std::vector<EntityId> alters;
  std::vector<Edge> alter_edges;
};
PersonalNetwork PersonalLayer(const MultiLayerNetwork& net, EntityId ego);

struct ComponentResult {
  // Component label per node: the smallest entity id in the component.
  std::vector<EntityId> label;
  // Component sizes, largest first.
  std::vector<std::size_t> sizes;
  double main_share() const;
};
// Weak components: arc direction is ignored.
ComponentResult WeakComponents(const Digraph& g);

struct Chain {
  EntityId seed = 0;
  std::vector<std::size_t> members;  // layer indices, ascending
  std::map<std::size_t, int> depth;  // layer index -> BFS depth from seed
};
// Forward reachability from each seed. Throws Error when a seed is not a
// node of the layer.
std::vector<Chain> DecomposeChains(const Digraph& layer,
                                   std::span<const EntityId> seeds);

struct DistanceSummary {
  int longest_from_seed = 0;
  double avg_from_seed = 0.0;  // over non-seed members
  double avg_pairwise = 0.0;   // over ordered reachable pairs
  double sd_pairwise = 0.0;    // population standard deviation
  std::size_t reachable_pairs = 0;
};
// Distances inside the chain's induced subgraph.
DistanceSummary ChainDistances(const Digraph& layer, const Chain& chain);
// Pairwise distances of a whole layer (seed fields left zero).
DistanceSummary LayerDistances(const Digraph& layer);

// Seed entities in interview order.
std::vector<EntityId> SeedEntities(const StudyLog& log, const EntityPartition& partition);

}  // namespace tsf

#endif  // TSF_NETBUILD_H_
