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

// Optimal one-to-one matching of predicted against ground-truth items:
// samples by composition F1, curves by curve similarity score.

#ifndef MATEVAL_ASSIGNMENT_HPP_
#define MATEVAL_ASSIGNMENT_HPP_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "mateval/metrics.hpp"
#include "mateval/model.hpp"

namespace mateval {

// Dense row-major matrix; rows are predictions, columns ground truth.
class ScoreMatrix {
 public:
  ScoreMatrix() = default;
  ScoreMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  ScoreMatrix(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct AssignmentMatrix {
  std::size_t n_pred = 0;
  std::size_t n_truth = 0;
  // (pred index, truth index), sorted by pred index.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;

  bool contains(std::size_t i, std::size_t j) const;
  // Sum of the assigned entries in pair order.
  double total(const ScoreMatrix& scores) const;
};

// Maximum-total assignment matching min(rows, cols) pairs. Among optimal
// assignments the lexicographically smallest one is returned: the lowest
// row takes the lowest feasible column first. Throws ContractError on a
// non-finite entry.
AssignmentMatrix munkres(const ScoreMatrix& scores);

struct CompositionPairScore {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  // 2tp / (2tp + fp + fn), 0 when the denominator is 0.
  double f1() const;
};

// Exact comparison of normalized field values. A field present on both sides
// with different values counts once as fp and once as fn. Throws
// SchemaError when the two compositions come from different domains.
CompositionPairScore composition_pair_score(const Composition& pred,
                                            const Composition& truth);

struct SampleAlignment {
  AssignmentMatrix assignment;
  // Paper totals: matched pairs plus every present field of unmatched
  // samples (truth side as fn, predicted side as fp).
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
};

SampleAlignment align_samples(std::span<const SampleRecord> pred,
                              std::span<const SampleRecord> truth);

struct CurveAlignment {
  AssignmentMatrix assignment;
  // One entry per assigned pair, same order as assignment.pairs.
  std::vector<ScoreBreakdown> breakdowns;
};

CurveAlignment align_curves(std::span<const Curve> pred,
                            std::span<const Curve> truth,
                            const MetricOptions& opts = {});

// Sum of matched css over max(N, M); 1.0 when both lists are empty.
double cas(std::span<const Curve> pred, std::span<const Curve> truth,
           const MetricOptions& opts = {});

}  // namespace mateval

#endif  // MATEVAL_ASSIGNMENT_HPP_
