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

#ifndef TSF_ERGM_H_
#define TSF_ERGM_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tsf/netbuild.h"
#include "tsf/netstats.h"

namespace tsf {

class FitError : public Error {
 public:
  using Error::Error;
};

enum class TermKind : std::uint8_t {
  kEdges,
  kUniformHomophily,
  kDifferentialHomophily,
  kGwdsp,
};

struct TermSpec {
  TermKind kind = TermKind::kEdges;
  NodeAttr attr = NodeAttr::kSex;
  std::string category;  // differential homophily only
  double decay = 0.5;    // gwdsp only

  static TermSpec Edges() { return {}; }
  static TermSpec Uniform(NodeAttr a) { return {TermKind::kUniformHomophily, a, {}, 0.5}; }
  static TermSpec Differential(NodeAttr a, std::string c) {
    return {TermKind::kDifferentialHomophily, a, std::move(c), 0.5};
  }
  static TermSpec Gwdsp(double decay) { return {TermKind::kGwdsp, NodeAttr::kSex, {}, decay}; }

  // "edges", "nodematch.sex", "nodematch.site.destination", "gwdsp.0.5".
  std::string Label() const;
  // Accepts the Label() forms.
  static TermSpec Parse(std::string_view s);
};

double GwdspStatistic(const Digraph& g, double decay);

// Prepared attribute codes and graph views for repeated change statistics.
class ChangeStatistics {
 public:
  ChangeStatistics(const Digraph& g, std::span<const TermSpec> terms);
  std::size_t num_terms() const { return terms_.size(); }
  // Difference in each term's statistic between the layer with and without
  // the arc u -> v, every other arc fixed.
  std::vector<double> Compute(std::size_t u, std::size_t v) const;
  void ComputeInto(std::size_t u, std::size_t v, std::span<double> out) const;

 private:
  std::size_t SharedPartners(std::size_t a, std::size_t b) const;
  bool Adjacent(std::size_t a, std::size_t b) const;

  const Digraph& g_;
  std::vector<TermSpec> terms_;
  std::vector<std::vector<int>> codes_;  // per term; empty if unused
  std::vector<int> target_;              // differential homophily category
  std::vector<std::vector<std::size_t>> undirected_;
};

std::vector<double> ChangeStats(const Digraph& g, std::span<const TermSpec> terms,
                                std::size_t u, std::size_t v);

struct Solver {
  int max_iter = 100;
  double tol = 1e-8;
};

struct TermEstimate {
  std::string term;
  double theta = 0.0;
  double se = 0.0;
  double p_value = 1.0;
  std::string stars;
};

struct FitResult {
  std::vector<TermEstimate> terms;
  double log_pseudo_likelihood = 0.0;
  double aic = 0.0;  // pseudo-likelihood based
  double bic = 0.0;  // pseudo-likelihood based
  bool converged = false;
  int iterations = 0;
  std::size_t n_dyads = 0;
  std::size_t n_unique_rows = 0;
};

// Maximum pseudo-likelihood over all ordered non-self pairs. Throws FitError
// when the design is rank deficient or the Newton iterations diverge.
FitResult FitMple(const Digraph& g, std::span<const TermSpec> terms,
                  const Solver& solver = {});

std::string Stars(double p);
double CoefficientProbability(double theta);
std::string InterpretCoefficient(const std::string& term, double theta);

}  // namespace tsf

#endif  // TSF_ERGM_H_
