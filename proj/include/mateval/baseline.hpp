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

// Majority-vote property baseline.
//
// For each property category the validation corpus yields a medoid curve
// (least cumulative discrete Fréchet distance to the other curves of the
// category), the most frequent x and y labels, and the mean number of
// curves per sample. Predicted compositions are then given that many copies
// of the baseline curve.

#ifndef MATEVAL_BASELINE_HPP_
#define MATEVAL_BASELINE_HPP_

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "mateval/model.hpp"
#include "mateval/options.hpp"

namespace mateval {

struct BaselineEntry {
  PointSeq medoid_curve;
  std::string modal_x_header;
  std::string modal_y_header;
  double medoid_cumulative_distance = 0.0;
  std::size_t candidate_count = 0;

  bool operator==(const BaselineEntry&) const = default;
};

struct BaselineProfile {
  Domain domain = Domain::kPNC;
  std::size_t sample_count = 0;
  // One value per category of the domain, including empty ones.
  std::map<PropertyCategory, double> mean_count_per_sample;
  // Only categories with at least one non-empty curve.
  std::map<PropertyCategory, BaselineEntry> entries;

  bool operator==(const BaselineProfile&) const = default;
};

// Throws ContractError when the corpus has no papers.
BaselineProfile build_profile(std::span<const PaperRecord> validation,
                              Domain domain);

// Index of the medoid among `curves`: least cumulative discrete Fréchet
// distance, ties to the lowest index. Throws ContractError if empty or if
// any curve has no points.
std::size_t medoid_index(std::span<const PointSeq> curves);

std::size_t round_count(double mean, RoundingMode mode);

struct BaselineExpansion {
  PaperRecord paper;
  std::vector<std::string> warnings;
};

// Replaces every sample's curves with baseline curves: round(mean count)
// copies per PNC category, exactly one for PBD.
BaselineExpansion expand_with_baseline(
    const PaperRecord& pred, const BaselineProfile& profile,
    RoundingMode rounding = RoundingMode::kHalfUp);

nlohmann::ordered_json profile_to_json(const BaselineProfile& profile);
BaselineProfile profile_from_json(const nlohmann::json& j);

}  // namespace mateval

#endif  // MATEVAL_BASELINE_HPP_
