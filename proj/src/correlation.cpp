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

#include "mateval/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace mateval {

namespace {

void check_inputs(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw ContractError("correlation inputs differ in length");
  }
  if (x.size() < 2) {
    throw ContractError("correlation needs at least two observations");
  }
}

double statistic(std::span<const double> x, std::span<const double> y,
                 CorrelationKind kind) {
  return kind == CorrelationKind::kPearson ? pearson(x, y) : spearman(x, y);
}

}  // namespace

double pearson(std::span<const double> x, std::span<const double> y) {
  check_inputs(x, y);
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw UndefinedCorrelationError("correlation undefined: zero variance");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  check_inputs(x, y);
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

CorrelationResult correlate(std::span<const double> x,
                            std::span<const double> y, CorrelationKind kind,
                            std::size_t permutations, std::uint64_t seed) {
  CorrelationResult out;
  out.coefficient = statistic(x, y, kind);
  out.permutations = permutations;
  if (permutations == 0) return out;
  std::mt19937_64 rng(seed);
  std::vector<double> shuffled(y.begin(), y.end());
  const double observed = std::abs(out.coefficient);
  std::size_t extreme = 0;
  for (std::size_t k = 0; k < permutations; ++k) {
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    if (std::abs(statistic(x, shuffled, kind)) >= observed - 1e-12) ++extreme;
  }
  out.p_value = static_cast<double>(extreme + 1) /
                static_cast<double>(permutations + 1);
  return out;
}

double header_auto_score(const Curve& pred, const Curve& truth,
                         const MetricOptions& opts) {
  return header_factor(pred, truth, opts);
}

double curve_auto_score(const Curve& pred, const Curve& truth,
                        const MetricOptions& opts) {
  return curve_factor(pred, truth, opts);
}

}  // namespace mateval
