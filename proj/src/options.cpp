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

#include "mateval/options.hpp"

namespace mateval {

std::string_view to_string(HeaderJoin v) {
  return v == HeaderJoin::kConcat ? "concat" : "mean";
}

std::string_view to_string(CurveNorm v) {
  return v == CurveNorm::kFrobenius ? "frobenius" : "bbox";
}

std::string_view to_string(Aggregation v) {
  return v == Aggregation::kMacro ? "macro" : "micro";
}

std::string_view to_string(RoundingMode v) {
  return v == RoundingMode::kHalfUp ? "half-up" : "half-even";
}

std::optional<HeaderJoin> parse_header_join(std::string_view s) {
  if (s == "concat") return HeaderJoin::kConcat;
  if (s == "mean") return HeaderJoin::kMean;
  return std::nullopt;
}

std::optional<CurveNorm> parse_curve_norm(std::string_view s) {
  if (s == "frobenius") return CurveNorm::kFrobenius;
  if (s == "bbox") return CurveNorm::kBoundingBox;
  return std::nullopt;
}

std::optional<Aggregation> parse_aggregation(std::string_view s) {
  if (s == "macro") return Aggregation::kMacro;
  if (s == "micro") return Aggregation::kMicro;
  return std::nullopt;
}

std::optional<RoundingMode> parse_rounding(std::string_view s) {
  if (s == "half-up") return RoundingMode::kHalfUp;
  if (s == "half-even") return RoundingMode::kHalfEven;
  return std::nullopt;
}

std::string fingerprint(const DecisionSwitches& s) {
  std::string out;
  out += "header-join=" + std::string(to_string(s.header_join));
  out += ";curve-norm=" + std::string(to_string(s.curve_norm));
  out += ";agg=" + std::string(to_string(s.aggregation));
  out += ";rounding=" + std::string(to_string(s.rounding));
  out += ";composition-match=exact-normalized";
  out += ";empty-curves=1";
  return out;
}

}  // namespace mateval
