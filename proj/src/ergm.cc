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

#include "tsf/ergm.h"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/Dense>
#include <fmt/format.h>

namespace tsf {

std::string TermSpec::Label() const {
  switch (kind) {
    case TermKind::kEdges: return "edges";
    case TermKind::kUniformHomophily: return fmt::format("nodematch.{}", ToString(attr));
    case TermKind::kDifferentialHomophily:
      return fmt::format("nodematch.{}.{}", ToString(attr), category);
    case TermKind::kGwdsp: return fmt::format("gwdsp.{}", decay);
  }
  return "?";
}

TermSpec TermSpec::Parse(std::string_view s) {
  if (s == "edges") return Edges();
  constexpr std::string_view kMatch = "nodematch.";
  constexpr std::string_view kGw = "gwdsp";
  if (s.starts_with(kMatch)) {
    std::string_view rest = s.substr(kMatch.size());
    auto dot = rest.find('.');
    if (dot == std::string_view::npos) return Uniform(ParseNodeAttr(rest));
    return Differential(ParseNodeAttr(rest.substr(0, dot)),
                        std::string(rest.substr(dot + 1)));
  }
  if (s.starts_with(kGw)) {
    std::string_view rest = s.substr(kGw.size());
    if (rest.empty()) return Gwdsp(0.5);
    if (rest[0] != '.') throw ParseError(fmt::format("unknown model term '{}'", s));
    double d = 0.0;
    try {
      std::size_t used = 0;
      d = std::stod(std::string(rest.substr(1)), &used);
      if (used != rest.size() - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError(fmt::format("bad gwdsp decay in '{}'", s));
    }
    if (!(d >= 0.0) || !std::isfinite(d)) {
      throw ParseError(fmt::format("gwdsp decay must be >= 0 in '{}'", s));
    }
    return Gwdsp(d);
  }
  throw ParseError(fmt::format("unknown model term '{}'", s));
}

namespace {

std::vector<std::vector<std::size_t>> Collapse(const Digraph& g) {
  std::vector<std::vector<std::size_t>> adj(g.num_nodes());
  for (std::size_t u = 0; u < g.num_nodes(); ++u) {
    auto& a = adj[u];
    std::merge(g.out(u).begin(), g.out(u).end(), g.in(u).begin(), g.in(u).end(),
               std::back_inserter(a));
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  return adj;
}

std::size_t Intersect(const std::vector<std::size_t>& a,
                      const std::vector<std::size_t>& b) {
  std::size_t n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

}  // namespace

double GwdspStatistic(const Digraph& g, double decay) {
  if (!(decay >= 0.0)) throw Error("gwdsp decay must be >= 0");
  const auto adj = Collapse(g);
  const std::size_t n = g.num_nodes();
  // Shared-partner counts for pairs at distance <= 2, via each partner.
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> sp;
  for (std::size_t w = 0; w < n; ++w) {
    const auto& nb = adj[w];
    for (std::size_t i = 0; i < nb.size(); ++i) {
      for (std::size_t j = i + 1; j < nb.size(); ++j) ++sp[{nb[i], nb[j]}];
    }
  }
  const double r = 1.0 - std::exp(-decay);
  double total = 0.0;
  for (const auto& [pair, k] : sp) {
    total += std::exp(decay) * (1.0 - std::pow(r, static_cast<double>(k)));
  }
  return total;
}

ChangeStatistics::ChangeStatistics(const Digraph& g, std::span<const TermSpec> terms)
    : g_(g), terms_(terms.begin(), terms.end()) {
  codes_.resize(terms_.size());
  target_.assign(terms_.size(), -1);
  bool need_adj = false;
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    const TermSpec& spec = terms_[t];
    if (spec.kind == TermKind::kGwdsp) {
      if (!(spec.decay >= 0.0)) throw Error("gwdsp decay must be >= 0");
      need_adj = true;
    }
    if (spec.kind != TermKind::kUniformHomophily &&
        spec.kind != TermKind::kDifferentialHomophily) {
      continue;
    }
    Categorical c = NodeCategories(g, spec.attr);
    if (spec.kind == TermKind::kDifferentialHomophily) {
      auto it = std::find(c.names.begin(), c.names.end(), spec.category);
      if (it == c.names.end()) {
        throw Error(fmt::format("category '{}' does not exist for attribute {}",
                                spec.category, ToString(spec.attr)));
      }
      target_[t] = static_cast<int>(it - c.names.begin());
    }
    codes_[t] = std::move(c.code);
  }
  if (need_adj) undirected_ = Collapse(g);
}

bool ChangeStatistics::Adjacent(std::size_t a, std::size_t b) const {
  return std::binary_search(undirected_[a].begin(), undirected_[a].end(), b);
}

std::size_t ChangeStatistics::SharedPartners(std::size_t a, std::size_t b) const {
  return Intersect(undirected_[a], undirected_[b]);
}

std::vector<double> ChangeStatistics::Compute(std::size_t u, std::size_t v) const {
  std::vector<double> out(terms_.size());
  ComputeInto(u, v, out);
  return out;
}

void ChangeStatistics::ComputeInto(std::size_t u, std::size_t v,
                                   std::span<double> out) const {
  if (u == v) throw Error(fmt::format("change statistic requested for self-loop {}", u));
  if (u >= g_.num_nodes() || v >= g_.num_nodes()) {
    throw Error(fmt::format("pair ({}, {}) out of range", u, v));
  }
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    const TermSpec& spec = terms_[t];
    switch (spec.kind) {
      case TermKind::kEdges:
        out[t] = 1.0;
        break;
      case TermKind::kUniformHomophily:
        out[t] = codes_[t][u] == codes_[t][v] ? 1.0 : 0.0;
        break;
      case TermKind::kDifferentialHomophily:
        out[t] = codes_[t][u] == target_[t] && codes_[t][v] == target_[t] ? 1.0 : 0.0;
        break;
      case TermKind::kGwdsp: {
        // The undirected edge {u, v} only toggles when v -> u is absent.
        if (g_.HasArc(v, u)) {
          out[t] = 0.0;
          break;
        }
        const bool present = Adjacent(u, v);
        const double r = 1.0 - std::exp(-spec.decay);
        double delta = 0.0;
        auto side = [&](std::size_t a, std::size_t b) {
          // Each neighbour w of a gains a as a partner shared with b.
          for (std::size_t w : undirected_[a]) {
            if (w == b) continue;
            std::size_t s = SharedPartners(b, w);
            if (present) --s;  // discount a itself, reached through {a, b}
            delta += std::pow(r, static_cast<double>(s));
          }
        };
        side(u, v);
        side(v, u);
        out[t] = delta;
        break;
      }
    }
  }
}

std::vector<double> ChangeStats(const Digraph& g, std::span<const TermSpec> terms,
                                std::size_t u, std::size_t v) {
  return ChangeStatistics(g, terms).Compute(u, v);
}

std::string Stars(double p) {
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "";
}

double CoefficientProbability(double theta) {
  if (!std::isfinite(theta)) throw Error("coefficient must be finite");
  return 1.0 / (1.0 + std::exp(-theta));
}

std::string InterpretCoefficient(const std::string& term, double theta) {
  const double p = CoefficientProbability(theta);
  return fmt::format("{}: conditional tie probability {:.4f} (log-odds {:.3f})", term,
                     p, theta);
}

FitResult FitMple(const Digraph& g, std::span<const TermSpec> terms,
                  const Solver& solver) {
  const std::size_t p = terms.size();
  const std::size_t n = g.num_nodes();
  if (p == 0) throw FitError("model has no terms");
  if (n < 2) throw FitError("model needs at least 2 nodes");
  ChangeStatistics cs(g, terms);

  struct Cell {
    double trials = 0.0;
    double successes = 0.0;
  };
  std::map<std::vector<double>, Cell> cells;
  std::vector<double> row(p);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      if (u == v) continue;
      cs.ComputeInto(u, v, row);
      auto it = cells.find(row);
      if (it == cells.end()) it = cells.emplace(row, Cell{}).first;
      it->second.trials += 1.0;
      if (g.HasArc(u, v)) it->second.successes += 1.0;
    }
  }
  const Eigen::Index m = static_cast<Eigen::Index>(cells.size());
  const Eigen::Index k = static_cast<Eigen::Index>(p);
  Eigen::MatrixXd x(m, k);
  Eigen::VectorXd trials(m), succ(m);
  {
    Eigen::Index i = 0;
    for (const auto& [key, cell] : cells) {
      for (Eigen::Index j = 0; j < k; ++j) x(i, j) = key[static_cast<std::size_t>(j)];
      trials(i) = cell.trials;
      succ(i) = cell.successes;
      ++i;
    }
  }
  std::vector<std::string> labels;
  for (const auto& t : terms) labels.push_back(t.Label());

  // Rank check on the trial-weighted design.
  Eigen::MatrixXd xw = trials.cwiseSqrt().asDiagonal() * x;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xw);
  qr.setThreshold(1e-10);
  if (qr.rank() < k) {
    std::string names;
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index j = qr.rank(); j < k; ++j) {
      names += (names.empty() ? "" : ", ") + labels[static_cast<std::size_t>(perm(j))];
    }
    throw FitError(fmt::format(
        "rank-deficient design ({} of {} terms identifiable); dependent: {}",
        qr.rank(), k, names));
  }
  const double total_succ = succ.sum();
  const double total_trials = trials.sum();
  if (total_succ == 0.0 || total_succ == total_trials) {
    throw FitError(fmt::format(
        "infinite coefficients: {} of {} dyads present", total_succ, total_trials));
  }

  auto loglik = [&](const Eigen::VectorXd& th) {
    Eigen::VectorXd eta = x * th;
    double ll = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      double e = eta(i);
      double log1pexp = e > 0 ? e + std::log1p(std::exp(-e)) : std::log1p(std::exp(e));
      ll += succ(i) * e - trials(i) * log1pexp;
    }
    return ll;
  };

  FitResult fit;
  fit.n_dyads = static_cast<std::size_t>(total_trials);
  fit.n_unique_rows = static_cast<std::size_t>(m);
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(k);
  Eigen::MatrixXd info(k, k);
  double ll = loglik(theta);
  constexpr double kDivergence = 40.0;
  for (int iter = 0; iter < solver.max_iter; ++iter) {
    Eigen::VectorXd eta = x * theta;
    Eigen::VectorXd mu(m), w(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      double pr = 1.0 / (1.0 + std::exp(-eta(i)));
      mu(i) = trials(i) * pr;
      w(i) = trials(i) * pr * (1.0 - pr);
    }
    Eigen::VectorXd grad = x.transpose() * (succ - mu);
    info = x.transpose() * w.asDiagonal() * x;
    fit.iterations = iter;
    if (grad.norm() <= solver.tol) {
      fit.converged = true;
      break;
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
    Eigen::VectorXd step = ldlt.solve(grad);
    if (ldlt.info() != Eigen::Success || !step.allFinite()) break;
    double scale = 1.0;
    Eigen::VectorXd next = theta + step;
    double ll_next = loglik(next);
    while (ll_next < ll - 1e-12 * std::abs(ll) && scale > 1e-8) {
      scale *= 0.5;
      next = theta + scale * step;
      ll_next = loglik(next);
    }
    theta = next;
    ll = ll_next;
    if (theta.cwiseAbs().maxCoeff() > kDivergence) break;
  }
  if (!fit.converged) {
    Eigen::Index worst = 0;
    theta.cwiseAbs().maxCoeff(&worst);
    throw FitError(fmt::format(
        "MPLE did not converge after {} iterations; term {} at {:.3g} suggests "
        "separation",
        fit.iterations, labels[static_cast<std::size_t>(worst)], theta(worst)));
  }
  Eigen::MatrixXd cov = info.inverse();
  for (Eigen::Index j = 0; j < k; ++j) {
    TermEstimate est;
    est.term = labels[static_cast<std::size_t>(j)];
    est.theta = theta(j);
    est.se = std::sqrt(std::max(0.0, cov(j, j)));
    double z = est.se > 0 ? est.theta / est.se : 0.0;
    est.p_value = std::erfc(std::abs(z) / std::sqrt(2.0));
    est.stars = Stars(est.p_value);
    fit.terms.push_back(std::move(est));
  }
  fit.log_pseudo_likelihood = ll;
  fit.aic = 2.0 * static_cast<double>(k) - 2.0 * ll;
  fit.bic = static_cast<double>(k) * std::log(total_trials) - 2.0 * ll;
  return fit;
}

}  // namespace tsf
