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

#ifndef TSF_HIVEPLOT_H_
#define TSF_HIVEPLOT_H_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tsf/netbuild.h"
#include "tsf/netstats.h"

namespace tsf {

struct HiveNode {
  EntityId id = 0;
  std::string axis;
  std::size_t out_degree = 0;
  // 1 for the largest out-degree on the axis; equal degrees keep the
  // order of the entity ids.
  std::size_t rank = 0;
  std::string color;  // sex, empty when unknown
};

struct HiveArc {
  EntityId src = 0;
  EntityId dst = 0;
  std::string src_axis;
  std::string dst_axis;
  bool within = false;
};

struct HivePlotData {
  std::vector<HiveNode> nodes;
  std::vector<HiveArc> arcs;
  // Arc counts per (source axis, target axis).
  std::map<std::pair<std::string, std::string>, std::size_t> axis_counts;
  std::size_t within = 0;
  std::size_t between = 0;
};

// Throws Error when a node lacks the axis attribute.
HivePlotData MakeHivePlot(const Digraph& layer, NodeAttr axis = NodeAttr::kSite);

std::string HiveNodesCsv(const HivePlotData& h);
std::string HiveArcsCsv(const HivePlotData& h);

}  // namespace tsf

#endif  // TSF_HIVEPLOT_H_
