// Copyright 2026 The mateval Authors.
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

#ifndef MATEVAL_REPORT_HPP_
#define MATEVAL_REPORT_HPP_

#include <string>

#include "json.hpp"
#include "mateval/scoring.hpp"

namespace mateval {

// {"fingerprint", "aggregates": {...}, "per_paper": [...],
//  "failures": [...], "warnings": [...]}
nlohmann::ordered_json report_to_json(const CorpusReport& report);

// Header row, one row per paper, then an "__aggregate__" row.
std::string report_to_table(const CorpusReport& report, char delimiter = ',');

}  // namespace mateval

#endif  // MATEVAL_REPORT_HPP_
