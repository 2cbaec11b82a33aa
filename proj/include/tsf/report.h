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

#ifndef TSF_REPORT_H_
#define TSF_REPORT_H_

#include <filesystem>
#include <string>

namespace tsf {

// Markdown report assembled from the CSV artifacts in `dir`. Sections whose
// inputs are missing or empty are replaced by a notice.
std::string RenderReport(const std::filesystem::path& dir);

}  // namespace tsf

#endif  // TSF_REPORT_H_
