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

#include "tsf/hiveplot.h"

#include <algorithm>
#include <numeric>

#include "tsf/csv.h"

namespace tsf {

HivePlotData MakeHivePlot(const Digraph& layer, NodeAttr axis) {
  const Categorical cat = NodeCategories(layer, axis);
  const std::size_t n = layer.num_nodes();
  HivePlotData h;
  h.nodes.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    auto& node = h.nodes[v];
    node.id = layer.id(v);
    node.axis = cat.names[static_cast<std::size_t>(cat.code[v])];
    node.out_degree = layer.out(v).size();
    if (layer.sex(v)) node.color = std::string(ToString(*layer.sex(v)));
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return h.nodes[a].out_degree > h.nodes[b].out_degree;
  });
  std::map<std::string, std::size_t> next_rank;
  for (std::size_t v : order) h.nodes[v].rank = ++next_rank[h.nodes[v].axis];
  for (auto [u, v] : layer.ArcList()) {
    HiveArc a{layer.id(u), layer.id(v), h.nodes[u].axis, h.nodes[v].axis, false};
    a.within = a.src_axis == a.dst_axis;
    ++(a.within ? h.within : h.between);
    ++h.axis_counts[{a.src_axis, a.dst_axis}];
    h.arcs.push_back(std::move(a));
  }
  return h;
}

std::string HiveNodesCsv(const HivePlotData& h) {
  CsvWriter w({"entity_id", "axis", "out_degree", "rank", "color"});
  for (const auto& n : h.nodes) {
    w.AddRow({std::to_string(n.id), n.axis, std::to_string(n.out_degree),
              std::to_string(n.rank), n.color});
  }
  return w.str();
}

std::string HiveArcsCsv(const HivePlotData& h) {
  CsvWriter w({"src", "dst", "src_axis", "dst_axis", "class"});
  for (const auto& a : h.arcs) {
    w.AddRow({std::to_string(a.src), std::to_string(a.dst), a.src_axis, a.dst_axis,
              a.within ? "within" : "between"});
  }
  return w.str();
}

}  // namespace tsf
