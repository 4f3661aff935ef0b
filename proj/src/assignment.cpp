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

#include "mateval/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mateval {

namespace {

// Hungarian method with row/column potentials (shortest augmenting paths),
// minimizing cost over a rows x cols matrix with rows <= cols. Returns the
// column assigned to each row.
std::vector<std::size_t> hungarian_min(const std::vector<double>& cost,
                                       std::size_t rows, std::size_t cols) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  auto a = [&](std::size_t i, std::size_t j) {
    return cost[(i - 1) * cols + (j - 1)];
  };
  std::vector<double> u(rows + 1, 0.0), v(cols + 1, 0.0);
  std::vector<std::size_t> p(cols + 1, 0), way(cols + 1, 0);
  for (std::size_t i = 1; i <= rows; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(cols + 1, kInf);
    std::vector<char> used(cols + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= cols; ++j) {
        if (used[j]) continue;
        const double cur = a(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= cols; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(rows, 0);
  for (std::size_t j = 1; j <= cols; ++j)
    if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

// Best achievable total over the given row and column subsets.
double best_total(const ScoreMatrix& s, std::span<const std::size_t> rows,
                  std::span<const std::size_t> cols) {
  if (rows.empty() || cols.empty()) return 0.0;
  const bool transpose = rows.size() > cols.size();
  const auto& r = transpose ? cols : rows;
  const auto& c = transpose ? rows : cols;
  std::vector<double> cost(r.size() * c.size());
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j)
      cost[i * c.size() + j] =
          -(transpose ? s(c[j], r[i]) : s(r[i], c[j]));
  const auto assign = hungarian_min(cost, r.size(), c.size());
  double total = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i)
    total += transpose ? s(c[assign[i]], r[i]) : s(r[i], c[assign[i]]);
  return total;
}

}  // namespace

ScoreMatrix::ScoreMatrix(
    std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  for (const auto& row : rows) {
    if (row.size() != cols_) throw ContractError("ragged score matrix");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

bool AssignmentMatrix::contains(std::size_t i, std::size_t j) const {
  return std::find(pairs.begin(), pairs.end(), std::make_pair(i, j)) !=
         pairs.end();
}

double AssignmentMatrix::total(const ScoreMatrix& scores) const {
  double sum = 0.0;
  for (const auto& [i, j] : pairs) sum += scores(i, j);
  return sum;
}

AssignmentMatrix munkres(const ScoreMatrix& scores) {
  const std::size_t n = scores.rows();
  const std::size_t m = scores.cols();
  double magnitude = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (!std::isfinite(scores(i, j))) {
        throw ContractError("munkres: non-finite score matrix entry");
      }
      magnitude += std::abs(scores(i, j));
    }
  }
  AssignmentMatrix out{n, m, {}};
  if (n == 0 || m == 0) return out;

  // Solve once for the optimum, then fix rows in order, giving each the
  // lowest column that still admits an optimal completion. Ties within
  // `tol` count as optimal.
  const double tol = 1e-12 * (1.0 + magnitude);
  std::vector<std::size_t> free_rows(n), free_cols(m);
  for (std::size_t i = 0; i < n; ++i) free_rows[i] = i;
  for (std::size_t j = 0; j < m; ++j) free_cols[j] = j;
  double remaining = best_total(scores, free_rows, free_cols);

  for (std::size_t i = 0; i < n && !free_cols.empty(); ++i) {
    const std::span<const std::size_t> later(free_rows.begin() + i + 1,
                                             free_rows.end());
    bool placed = false;
    for (std::size_t k = 0; k < free_cols.size(); ++k) {
      std::vector<std::size_t> cols_left = free_cols;
      cols_left.erase(cols_left.begin() + static_cast<std::ptrdiff_t>(k));
      const double value = scores(i, free_cols[k]) +
                           best_total(scores, later, cols_left);
      if (value >= remaining - tol) {
        out.pairs.emplace_back(i, free_cols[k]);
        remaining -= scores(i, free_cols[k]);
        free_cols = std::move(cols_left);
        placed = true;
        break;
      }
    }
    // Leaving this row unmatched is only allowed while enough rows remain
    // to cover every free column.
    if (!placed && later.size() < free_cols.size()) {
      throw ContractError("munkres: no optimal completion found");
    }
  }
  return out;
}

double CompositionPairScore::f1() const {
  const std::size_t denom = 2 * tp + fp + fn;
  return denom == 0 ? 0.0
                    : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

CompositionPairScore composition_pair_score(const Composition& pred,
                                            const Composition& truth) {
  if (pred.index() != truth.index()) {
    throw SchemaError("composition schemas differ", "composition");
  }
  const auto p = composition_fields(pred);
  const auto t = composition_fields(truth);
  CompositionPairScore s;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const Field pv = normalize_field(*p[k].value);
    const Field tv = normalize_field(*t[k].value);
    if (pv && tv && *pv == *tv) {
      ++s.tp;
      continue;
    }
    if (pv) ++s.fp;
    if (tv) ++s.fn;
  }
  return s;
}

SampleAlignment align_samples(std::span<const SampleRecord> pred,
                              std::span<const SampleRecord> truth) {
  std::vector<std::vector<CompositionPairScore>> pair(pred.size());
  ScoreMatrix f1(pred.size(), truth.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    pair[i].reserve(truth.size());
    for (std::size_t j = 0; j < truth.size(); ++j) {
      pair[i].push_back(
          composition_pair_score(pred[i].composition, truth[j].composition));
      f1(i, j) = pair[i][j].f1();
    }
  }
  SampleAlignment out;
  out.assignment = munkres(f1);
  std::vector<char> pred_used(pred.size(), 0), truth_used(truth.size(), 0);
  for (const auto& [i, j] : out.assignment.pairs) {
    out.tp += pair[i][j].tp;
    out.fp += pair[i][j].fp;
    out.fn += pair[i][j].fn;
    pred_used[i] = truth_used[j] = 1;
  }
  for (std::size_t i = 0; i < pred.size(); ++i)
    if (!pred_used[i]) out.fp += present_field_count(pred[i].composition);
  for (std::size_t j = 0; j < truth.size(); ++j)
    if (!truth_used[j]) out.fn += present_field_count(truth[j].composition);
  return out;
}

CurveAlignment align_curves(std::span<const Curve> pred,
                            std::span<const Curve> truth,
                            const MetricOptions& opts) {
  std::vector<ScoreBreakdown> all(pred.size() * truth.size());
  ScoreMatrix scores(pred.size(), truth.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    for (std::size_t j = 0; j < truth.size(); ++j) {
      all[i * truth.size() + j] = css(pred[i], truth[j], opts);
      scores(i, j) = all[i * truth.size() + j].css;
    }
  }
  CurveAlignment out;
  out.assignment = munkres(scores);
  for (const auto& [i, j] : out.assignment.pairs)
    out.breakdowns.push_back(all[i * truth.size() + j]);
  return out;
}

double cas(std::span<const Curve> pred, std::span<const Curve> truth,
           const MetricOptions& opts) {
  const std::size_t denom = std::max(pred.size(), truth.size());
  if (denom == 0) return 1.0;
  const CurveAlignment a = align_curves(pred, truth, opts);
  double sum = 0.0;
  for (const auto& b : a.breakdowns) sum += b.css;
  return sum / static_cast<double>(denom);
}

}  // namespace mateval
