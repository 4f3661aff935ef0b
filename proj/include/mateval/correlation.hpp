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

// Correlation of automated scores against human ratings.

#ifndef MATEVAL_CORRELATION_HPP_
#define MATEVAL_CORRELATION_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mateval/metrics.hpp"
#include "mateval/model.hpp"

namespace mateval {

// Zero variance in one of the inputs.
class UndefinedCorrelationError : public Error {
 public:
  using Error::Error;
};

// Product-moment correlation. Throws ContractError unless the inputs have
// equal length >= 2, UndefinedCorrelationError on zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

// 1-based ranks; tied values share the mean of the ranks they span.
std::vector<double> average_ranks(std::span<const double> v);

// Pearson correlation of average ranks.
double spearman(std::span<const double> x, std::span<const double> y);

enum class CorrelationKind { kPearson, kSpearman };

struct CorrelationResult {
  double coefficient = 0.0;
  double p_value = 1.0;
  std::size_t permutations = 0;
};

// Two-sided permutation test: y is shuffled `permutations` times with a
// generator seeded by `seed`, and p = (1 + #{|r_perm| >= |r|}) / (1 + n).
CorrelationResult correlate(std::span<const double> x,
                            std::span<const double> y, CorrelationKind kind,
                            std::size_t permutations, std::uint64_t seed);

// The header and curve terms of css, as compared against human ratings.
double header_auto_score(const Curve& pred, const Curve& truth,
                         const MetricOptions& opts = {});
double curve_auto_score(const Curve& pred, const Curve& truth,
                        const MetricOptions& opts = {});

}  // namespace mateval

#endif  // MATEVAL_CORRELATION_HPP_
