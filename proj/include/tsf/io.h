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

#ifndef TSF_IO_H_
#define TSF_IO_H_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "tsf/csv.h"
#include "tsf/fieldwork.h"
#include "tsf/identity.h"
#include "tsf/netbuild.h"
#include "tsf/synthpop.h"

namespace tsf {

class IoError : public Error {
 public:
  using Error::Error;
};

std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, const std::string& text);

// Stage outputs are first written as "<name>.partial" and renamed together
// by Commit(). Files of a failed stage keep the suffix.
class StageWriter {
 public:
  explicit StageWriter(std::filesystem::path dir);
  void Write(const std::string& name, const std::string& text);
  void Commit();
  const std::vector<std::string>& files() const { return files_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> files_;
};

// Population and hidden graph.
std::string PersonsCsv(const std::vector<Person>& persons);
std::vector<Person> ParsePersons(const CsvTable& t);
std::string TiesCsv(const std::vector<Tie>& ties);
std::vector<Tie> ParseTies(const CsvTable& t);

// Study log, split over several files.
struct StudyLogFiles {
  std::string observations;        // observations.csv
  std::string observations_truth;  // observations_truth.csv
  std::string interviews;          // interviews.csv
  std::string referrals;           // referrals.csv
  std::string elicitations;        // elicitations.csv
  std::string alter_ties;          // alter_ties.csv
  std::string study;               // study.csv
  std::string events;              // study_log.csv: interviews and referrals by seq
};
StudyLogFiles StudyLogCsv(const StudyLog& log);
void WriteStudyLog(StageWriter& w, const StudyLog& log);
StudyLog ReadStudyLog(const std::filesystem::path& dir);

std::string ObservationsCsv(const std::vector<ObservationRecord>& obs);
std::vector<ObservationRecord> ParseObservations(const CsvTable& t);

// Linkage output: entities.csv maps observations to entities and
// entity_profiles.csv holds the merged attributes.
std::string EntityMapCsv(const EntityPartition& p);
std::string EntityProfilesCsv(const EntityPartition& p);
EntityPartition ParsePartition(const CsvTable& map, const CsvTable& entities);
std::string ConflictsCsv(const ConflictReport& r);
ConflictReport ParseConflicts(const CsvTable& t);

// Network interchange triple.
std::string NodesCsv(const MultiLayerNetwork& net);
std::string ArcsCsv(const MultiLayerNetwork& net);
std::string EdgesCsv(const MultiLayerNetwork& net);
MultiLayerNetwork ParseNetwork(const CsvTable& nodes, const CsvTable& arcs,
                               const CsvTable& edges);
// "link_tracing" keeps referral arcs and the nodes taking part in them;
// "network_of_networks" keeps everything.
MultiLayerNetwork SelectLayer(const MultiLayerNetwork& net, const std::string& layer);
// Writes nodes.csv, arcs.csv and edges.csv into `dir`.
void ExportNetwork(const MultiLayerNetwork& net, const std::string& layer,
                   const std::filesystem::path& dir);
MultiLayerNetwork ImportNetwork(const std::filesystem::path& dir);

}  // namespace tsf

#endif  // TSF_IO_H_
