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

#include "tsf/report.h"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

#include <fmt/format.h>

#include "tsf/csv.h"
#include "tsf/types.h"

namespace tsf {

namespace fs = std::filesystem;

namespace {

// Reads an artifact; on absence or emptiness appends a notice and returns
// nothing so the caller can skip its section.
std::optional<CsvTable> Load(const fs::path& dir, const std::string& name, std::string& out) {
  const fs::path path = dir / name;
  if (!fs::exists(path)) {
    out += fmt::format("_Section skipped: `{}` is missing._\n\n", name);
    return std::nullopt;
  }
  try {
    CsvTable t = CsvTable::Read(path);
    if (t.num_rows() == 0) {
      out += fmt::format("_Section skipped: `{}` has no rows._\n\n", name);
      return std::nullopt;
    }
    return t;
  } catch (const std::exception& e) {
    out += fmt::format("_Section skipped: `{}` could not be read ({})._\n\n", name, e.what());
    return std::nullopt;
  }
}

// Numbers are rounded for display only; the CSVs keep full precision.
std::string Fixed(const std::string& cell, int decimals) {
  if (cell.empty() || cell == "NA") return cell.empty() ? "" : "NA";
  try {
    return FormatFixed(ParseDouble(cell, "report cell"), decimals);
  } catch (const std::exception&) {
    return cell;
  }
}

std::string Escape(std::string s) {
  std::string r;
  for (char c : s) {
    if (c == '|') r += "\\|";
    else if (c == '\n') r += ' ';
    else r += c;
  }
  return r;
}

void TableHeader(std::string& out, const std::vector<std::string>& cols) {
  out += "|";
  for (const auto& c : cols) out += " " + c + " |";
  out += "\n|";
  for (std::size_t i = 0; i < cols.size(); ++i) out += (i == 0 ? " --- |" : " ---: |");
  out += "\n";
}

void TableRow(std::string& out, const std::vector<std::string>& cells) {
  out += "|";
  for (const auto& c : cells) out += " " + Escape(c) + " |";
  out += "\n";
}

struct Col {
  const CsvTable& t;
  std::string_view name;
  std::size_t idx;
  Col(const CsvTable& table, std::string_view n) : t(table), name(n), idx(table.Column(n)) {}
  const std::string& operator()(std::size_t r) const { return t.row(r)[idx]; }
};

// Pivots a long table (row key, column key, value) into a wide one,
// keeping first-seen order for both keys.
struct Pivot {
  std::vector<std::string> rows;
  std::vector<std::string> cols;
  std::map<std::pair<std::string, std::string>, std::string> cells;

  void Add(const std::string& r, const std::string& c, const std::string& v) {
    if (std::find(rows.begin(), rows.end(), r) == rows.end()) rows.push_back(r);
    if (std::find(cols.begin(), cols.end(), c) == cols.end()) cols.push_back(c);
    cells[{r, c}] = v;
  }
  std::string Get(const std::string& r, const std::string& c) const {
    auto it = cells.find({r, c});
    return it == cells.end() ? "" : it->second;
  }
};

void Participation(const fs::path& dir, std::string& out) {
  out += "## Participation\n\n";
  if (auto t = Load(dir, "participation.csv", out)) {
    Col site(*t, "site"), sex(*t, "sex"), contacted(*t, "contacted"),
        participated(*t, "participated"), rate(*t, "rate");
    TableHeader(out, {"Site", "Sex", "Contacted", "Participated", "Rate"});
    for (std::size_t r = 0; r < t->num_rows(); ++r) {
      TableRow(out, {site(r), sex(r), contacted(r), participated(r), Fixed(rate(r), 3)});
    }
    out += "\n";
  }
  if (auto t = Load(dir, "fieldwork.csv", out)) {
    Col metric(*t, "metric"), value(*t, "value");
    TableHeader(out, {"Fieldwork", "Value"});
    for (std::size_t r = 0; r < t->num_rows(); ++r) {
      TableRow(out, {metric(r), metric(r) == "success_rate" ? Fixed(value(r), 3) : value(r)});
    }
    out += "\n";
  }
}

void Demographics(const fs::path& dir, std::string& out) {
  out += "## Participant demographics\n\n";
  auto t = Load(dir, "demographics.csv", out);
  if (!t) return;
  Col site(*t, "site"), var(*t, "variable"), cat(*t, "category"), value(*t, "value");
  Pivot p;
  for (std::size_t r = 0; r < t->num_rows(); ++r) {
    std::string key = cat(r).empty() ? var(r) : var(r) + ": " + cat(r);
    p.Add(key, site(r), var(r) == "age" ? Fixed(value(r), 1) : value(r));
  }
  std::vector<std::string> head = {"Variable"};
  head.insert(head.end(), p.cols.begin(), p.cols.end());
  TableHeader(out, head);
  for (const auto& row : p.rows) {
    std::vector<std::string> cells = {row};
    for (const auto& c : p.cols) cells.push_back(p.Get(row, c));
    TableRow(out, cells);
  }
  out += "\n";
}

void EiSection(const fs::path& dir, std::string& out) {
  out += "## E-I index and permutation test\n\n";
  auto t = Load(dir, "ei_permutation.csv", out);
  if (!t) return;
  Col layer(*t, "layer"), attr(*t, "attribute"), obs(*t, "observed"), mean(*t, "mean"),
      sd(*t, "sd"), p(*t, "p"), n(*t, "n_perm"), note(*t, "note");
  TableHeader(out, {"Layer", "Attribute", "Observed E-I", "Permutation mean", "Permutation SD",
                    "p", "Permutations", "Note"});
  for (std::size_t r = 0; r < t->num_rows(); ++r) {
    TableRow(out, {layer(r), attr(r), Fixed(obs(r), 3), Fixed(mean(r), 3), Fixed(sd(r), 3),
                   Fixed(p(r), 4), n(r), note(r)});
  }
  out += "\n";
}

void Chains(const fs::path& dir, std::string& out) {
  out += "## Chains\n\n";
  auto t = Load(dir, "composition.csv", out);
  if (!t) return;
  Col column(*t, "column"), metric(*t, "metric"), value(*t, "value");
  Pivot p;
  for (std::size_t r = 0; r < t->num_rows(); ++r) {
    const bool real = metric(r).starts_with("avg") || metric(r).starts_with("sd") ||
                      metric(r) == "share_of_network";
    p.Add(metric(r), column(r), real ? Fixed(value(r), 2) : value(r));
  }
  std::vector<std::string> head = {"Metric"};
  head.insert(head.end(), p.cols.begin(), p.cols.end());
  TableHeader(out, head);
  for (const auto& row : p.rows) {
    std::vector<std::string> cells = {row};
    for (const auto& c : p.cols) cells.push_back(p.Get(row, c));
    TableRow(out, cells);
  }
  out += "\n";
}

void Alters(const fs::path& dir, std::string& out) {
  out += "## Personal network alters\n\n";
  auto t = Load(dir, "alters.csv", out);
  if (!t) return;
  Col row(*t, "row"), cls(*t, "class"), resp(*t, "respondents"), total(*t, "total"),
      mean(*t, "mean"), sd(*t, "sd");
  Pivot p;
  std::map<std::string, std::string> respondents;
  for (std::size_t r = 0; r < t->num_rows(); ++r) {
    p.Add(row(r), cls(r),
          fmt::format("{} ({} / {})", total(r), Fixed(mean(r), 2), Fixed(sd(r), 2)));
    respondents[cls(r)] = resp(r);
  }
  std::vector<std::string> head = {"Alters: total (mean / SD)"};
  for (const auto& c : p.cols) head.push_back(fmt::format("{} (n = {})", c, respondents[c]));
  TableHeader(out, head);
  for (const auto& r : p.rows) {
    std::vector<std::string> cells = {r};
    for (const auto& c : p.cols) cells.push_back(p.Get(r, c));
    TableRow(out, cells);
  }
  out += "\n";
}

void Structure(const fs::path& dir, std::string& out) {
  out += "## Network structure\n\n";
  if (auto t = Load(dir, "stats.csv", out)) {
    Col layer(*t, "layer"), stat(*t, "statistic"), value(*t, "value");
    Pivot p;
    for (std::size_t r = 0; r < t->num_rows(); ++r) {
      const std::string& s = stat(r);
      std::string v = value(r);
      if (s == "density") v = Fixed(v, 3);
      else if (s.starts_with("centralization") || s == "main_component_share") v = Fixed(v, 3);
      p.Add(s, layer(r), v);
    }
    std::vector<std::string> head = {"Statistic"};
    head.insert(head.end(), p.cols.begin(), p.cols.end());
    TableHeader(out, head);
    for (const auto& row : p.rows) {
      std::vector<std::string> cells = {row};
      for (const auto& c : p.cols) cells.push_back(p.Get(row, c));
      TableRow(out, cells);
    }
    out += "\nCentralization values are fractions of the star maximum; a caution flag marks "
           "layers with fewer than three nodes.\n\n";
  }
  if (auto t = Load(dir, "hive_summary.csv", out)) {
    Col layer(*t, "layer"), src(*t, "src_axis"), dst(*t, "dst_axis"), cls(*t, "class"),
        arcs(*t, "arcs");
    TableHeader(out, {"Hive layer", "From axis", "To axis", "Class", "Arcs"});
    for (std::size_t r = 0; r < t->num_rows(); ++r) {
      TableRow(out, {layer(r), src(r), dst(r), cls(r), arcs(r)});
    }
    out += "\nReference split from the field survey network of networks: within-axis "
           "1,524 and 2,237; between-axis 1,133, 223 and 360. Printed for comparison only.\n\n";
  }
}

void Representativeness(const fs::path& dir, std::string& out) {
  out += "## Representativeness\n\n";
  if (auto t = Load(dir, "estimates.csv", out)) {
    Col scope(*t, "scope"), site(*t, "site"), attr(*t, "attribute"), n(*t, "n"),
        naive(*t, "naive"), weighted(*t, "weighted"), param(*t, "parameter"),
        dev(*t, "deviation"), flagged(*t, "flagged"), sd(*t, "sd");
    TableHeader(out, {"Sample", "Site", "Attribute", "n", "Naive", "RDS-II", "Population",
                      "Deviation", "Beyond reference CI", "Sample SD"});
    for (std::size_t r = 0; r < t->num_rows(); ++r) {
      TableRow(out, {scope(r), site(r), attr(r), n(r), Fixed(naive(r), 3), Fixed(weighted(r), 3),
                     Fixed(param(r), 3), Fixed(dev(r), 2), flagged(r) == "1" ? "yes" : "no",
                     Fixed(sd(r), 2)});
    }
    out += "\nDeviations are in years for age and percentage points for shares.\n\n";
  }
  if (auto t = Load(dir, "population.csv", out)) {
    Col site(*t, "site"), pop(*t, "population"), age(*t, "mean_age"), fem(*t, "female_share");
    TableHeader(out, {"Population", "Adults", "Mean age", "Female share"});
    for (std::size_t r = 0; r < t->num_rows(); ++r) {
      TableRow(out, {site(r), pop(r), Fixed(age(r), 2), Fixed(fem(r), 3)});
    }
    out += "\n";
  }
  if (auto t = Load(dir, "masking.csv", out)) {
    Col site(*t, "site"), el(*t, "elicited"), both(*t, "elicited_referred"),
        ref(*t, "referred"), mask(*t, "masking"), ov(*t, "overlap");
    TableHeader(out, {"Masking", "Elicited", "Elicited and referred", "Referred",
                      "Masking share", "Overlap share"});
    for (std::size_t r = 0; r < t->num_rows(); ++r) {
      TableRow(out, {site(r), el(r), both(r), ref(r), Fixed(mask(r), 3), Fixed(ov(r), 3)});
    }
    out += "\n";
  }
}

void Ergm(const fs::path& dir, std::string& out) {
  out += "## ERGM fits\n\n";
  out += "> Estimates are maximum pseudo-likelihood (MPLE), not MCMC maximum likelihood. "
         "Standard errors from the pseudo-likelihood are optimistic when dyads are "
         "dependent.\n\n";
  auto fit = Load(dir, "fit.csv", out);
  auto sum = Load(dir, "fit_summary.csv", out);
  if (!sum) return;
  Col model(*sum, "model"), nodes(*sum, "nodes"), arcs(*sum, "arcs"), ll(*sum, "log_pseudo_likelihood"),
      aic(*sum, "aic"), bic(*sum, "bic"), conv(*sum, "converged"), err(*sum, "error");
  std::vector<std::string> models;
  for (std::size_t r = 0; r < sum->num_rows(); ++r) models.push_back(model(r));
  Pivot p;
  if (fit) {
    Col fm(*fit, "model"), term(*fit, "term"), theta(*fit, "theta"), se(*fit, "se"),
        stars(*fit, "stars");
    for (std::size_t r = 0; r < fit->num_rows(); ++r) {
      p.Add(term(r), fm(r),
            fmt::format("{}{} ({})", Fixed(theta(r), 3), stars(r), Fixed(se(r), 3)));
    }
  }
  std::vector<std::string> head = {"Term"};
  head.insert(head.end(), models.begin(), models.end());
  TableHeader(out, head);
  for (const auto& row : p.rows) {
    std::vector<std::string> cells = {row};
    for (const auto& m : models) cells.push_back(p.Get(row, m));
    TableRow(out, cells);
  }
  auto summary_row = [&](const std::string& label, const Col& c, int decimals) {
    std::vector<std::string> cells = {label};
    for (std::size_t r = 0; r < sum->num_rows(); ++r) {
      cells.push_back(decimals < 0 ? c(r) : Fixed(c(r), decimals));
    }
    TableRow(out, cells);
  };
  summary_row("nodes", nodes, -1);
  summary_row("arcs", arcs, -1);
  summary_row("log pseudo-likelihood", ll, 2);
  summary_row("AIC", aic, 2);
  summary_row("BIC", bic, 2);
  summary_row("converged", conv, -1);
  out += "\nSignificance: *** p < 0.001, ** p < 0.01, * p < 0.05. Standard errors in "
         "parentheses.\n";
  for (std::size_t r = 0; r < sum->num_rows(); ++r) {
    if (!err(r).empty()) out += fmt::format("\n- `{}` not fitted: {}\n", model(r), err(r));
  }
  out += "\n";
}

}  // namespace

std::string RenderReport(const fs::path& dir) {
  std::string out = "# Link-tracing study report\n\n";
  Participation(dir, out);
  Demographics(dir, out);
  EiSection(dir, out);
  Chains(dir, out);
  Alters(dir, out);
  Structure(dir, out);
  Representativeness(dir, out);
  Ergm(dir, out);
  return out;
}

}  // namespace tsf
