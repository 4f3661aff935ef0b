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

// Distance kernels and the curve similarity score.
//
// The curve similarity score of a predicted curve against a ground-truth
// curve is
//
//   css = (1 - nl_lev(headers)) * (1 - nl_frechet(points))
//
//   nl_lev     = min(1, levenshtein(h_p, h_t) / max(len(h_p), len(h_t)))
//   nl_frechet = min(1, discrete_frechet(c_p, c_t) / ||c_t||)

#ifndef MATEVAL_METRICS_HPP_
#define MATEVAL_METRICS_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include "mateval/model.hpp"

namespace mateval {

// How the two axis labels enter the header term.
enum class HeaderJoin {
  kConcat,  // one distance over "x|y"
  kMean,    // mean of the per-label normalized distances
};

// What ||c_t|| means.
enum class CurveNorm {
  kFrobenius,    // Euclidean norm of all coordinates as one vector
  kBoundingBox,  // diagonal of the axis-aligned bounding box
};

struct MetricOptions {
  HeaderJoin header_join = HeaderJoin::kConcat;
  CurveNorm curve_norm = CurveNorm::kFrobenius;
};

struct HeaderPair {
  std::string x_label;
  std::string y_label;
  std::string joined;
};

// Labels normalized; joined = x + "|" + y, or just x when there is no
// y label.
HeaderPair make_header_pair(const Curve& curve);

struct ScoreBreakdown {
  double header_factor = 0.0;
  double curve_factor = 0.0;
  double css = 0.0;
};

// Number of Unicode scalar values in a UTF-8 string. Invalid bytes count as
// one unit each.
std::size_t utf8_length(std::string_view s);

// Unit-cost edit distance over Unicode scalar values.
std::size_t levenshtein(std::string_view a, std::string_view b);

// 0 when a == b (including both empty), saturating at 1.
double normalized_levenshtein(std::string_view a, std::string_view b);

// Throws ContractError if either sequence is empty.
double discrete_frechet(std::span<const Point> p, std::span<const Point> q);

// Throws ContractError if c is empty.
double curve_norm(std::span<const Point> c,
                  CurveNorm mode = CurveNorm::kFrobenius);

// Empty prediction scores 1 (worst). When ||c_t|| is 0 the result is 0 for
// a zero distance and 1 otherwise. Throws ContractError if truth is empty.
double normalized_frechet(std::span<const Point> pred,
                          std::span<const Point> truth,
                          CurveNorm mode = CurveNorm::kFrobenius);

double header_factor(const Curve& pred, const Curve& truth,
                     const MetricOptions& opts = {});

// When the ground-truth curve has no points: 1 if the prediction has none
// either, 0 otherwise.
double curve_factor(const Curve& pred, const Curve& truth,
                    const MetricOptions& opts = {});

ScoreBreakdown css(const Curve& pred, const Curve& truth,
                   const MetricOptions& opts = {});

}  // namespace mateval

#endif  // MATEVAL_METRICS_HPP_
