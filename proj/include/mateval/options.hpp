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

// Every scoring behaviour that is a judgement call is a switch here, and the
// full set is recorded in each report as a fingerprint string.

#ifndef MATEVAL_OPTIONS_HPP_
#define MATEVAL_OPTIONS_HPP_

#include <optional>
#include <string>
#include <string_view>

#include "mateval/metrics.hpp"

namespace mateval {

enum class Aggregation {
  kMacro,  // mean of per-paper columns
  kMicro,  // pooled counts and sums across papers
};

// How fractional mean curve counts become copies in the baseline.
enum class RoundingMode {
  kHalfUp,
  kHalfEven,
};

struct DecisionSwitches {
  HeaderJoin header_join = HeaderJoin::kConcat;
  CurveNorm curve_norm = CurveNorm::kFrobenius;
  Aggregation aggregation = Aggregation::kMacro;
  RoundingMode rounding = RoundingMode::kHalfUp;

  MetricOptions metric() const { return {header_join, curve_norm}; }
};

std::string_view to_string(HeaderJoin v);
std::string_view to_string(CurveNorm v);
std::string_view to_string(Aggregation v);
std::string_view to_string(RoundingMode v);

std::optional<HeaderJoin> parse_header_join(std::string_view s);
std::optional<CurveNorm> parse_curve_norm(std::string_view s);
std::optional<Aggregation> parse_aggregation(std::string_view s);
std::optional<RoundingMode> parse_rounding(std::string_view s);

// "key=value;..." over every switch, in a fixed order.
std::string fingerprint(const DecisionSwitches& switches);

}  // namespace mateval

#endif  // MATEVAL_OPTIONS_HPP_
