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

#include "mateval/scoring.hpp"

#include <algorithm>

#include "mateval/assignment.hpp"

namespace mateval {

namespace {

double ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

double harmonic(double p, double r) {
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

// Fills every column from the raw counts. Nothing to extract and nothing
// extracted scores 1.
void finish_columns(PaperScore& s) {
  const auto tp = static_cast<double>(s.tp);
  if (s.tp + s.fp + s.fn == 0) {
    s.columns.precision = s.columns.recall = s.columns.f1 = 1.0;
  } else {
    s.columns.precision = ratio(tp, tp + static_cast<double>(s.fp));
    s.columns.recall = ratio(tp, tp + static_cast<double>(s.fn));
    s.columns.f1 = harmonic(s.columns.precision, s.columns.recall);
  }
  if (s.curve_slots == 0) {
    s.columns.headers = s.columns.curves = s.columns.cas = 1.0;
  } else {
    const auto slots = static_cast<double>(s.curve_slots);
    s.columns.headers = s.header_sum / slots;
    s.columns.curves = s.curve_sum / slots;
    s.columns.cas = s.css_sum / slots;
  }
}

}  // namespace

PaperScore score_paper(const PaperRecord& pred, const PaperRecord& truth,
                       const MetricOptions& opts) {
  if (pred.paper_id != truth.paper_id) {
    throw ContractError("score_paper: paper id mismatch ('" + pred.paper_id +
                        "' vs '" + truth.paper_id + "')");
  }
  PaperScore s;
  s.paper_id = truth.paper_id;

  const SampleAlignment samples = align_samples(pred.samples, truth.samples);
  s.tp = samples.tp;
  s.fp = samples.fp;
  s.fn = samples.fn;
  s.matched_sample_count = samples.assignment.pairs.size();

  std::vector<char> pred_used(pred.samples.size(), 0);
  std::vector<char> truth_used(truth.samples.size(), 0);
  for (const auto& [i, j] : samples.assignment.pairs) {
    pred_used[i] = truth_used[j] = 1;
    const auto& pc = pred.samples[i].properties;
    const auto& tc = truth.samples[j].properties;
    s.curve_slots += std::max(pc.size(), tc.size());
    const CurveAlignment curves = align_curves(pc, tc, opts);
    s.matched_curve_count += curves.assignment.pairs.size();
    for (const auto& b : curves.breakdowns) {
      s.header_sum += b.header_factor;
      s.curve_sum += b.curve_factor;
      s.css_sum += b.css;
    }
  }
  for (std::size_t i = 0; i < pred.samples.size(); ++i)
    if (!pred_used[i]) s.curve_slots += pred.samples[i].properties.size();
  for (std::size_t j = 0; j < truth.samples.size(); ++j)
    if (!truth_used[j]) s.curve_slots += truth.samples[j].properties.size();

  finish_columns(s);
  return s;
}

CorpusReport aggregate(std::vector<PaperScore> scores, Aggregation mode) {
  if (scores.empty()) throw ContractError("aggregate: no paper scores");
  std::sort(scores.begin(), scores.end(),
            [](const PaperScore& a, const PaperScore& b) {
              return a.paper_id < b.paper_id;
            });
  CorpusReport report;
  if (mode == Aggregation::kMacro) {
    ScoreColumns sum;
    for (const auto& s : scores) {
      sum.precision += s.columns.precision;
      sum.recall += s.columns.recall;
      sum.f1 += s.columns.f1;
      sum.headers += s.columns.headers;
      sum.curves += s.columns.curves;
      sum.cas += s.columns.cas;
    }
    const auto n = static_cast<double>(scores.size());
    report.aggregates = {sum.precision / n, sum.recall / n, sum.f1 / n,
                         sum.headers / n,   sum.curves / n, sum.cas / n};
  } else {
    PaperScore pooled;
    for (const auto& s : scores) {
      pooled.tp += s.tp;
      pooled.fp += s.fp;
      pooled.fn += s.fn;
      pooled.header_sum += s.header_sum;
      pooled.curve_sum += s.curve_sum;
      pooled.css_sum += s.css_sum;
      pooled.curve_slots += s.curve_slots;
    }
    finish_columns(pooled);
    report.aggregates = pooled.columns;
  }
  report.per_paper = std::move(scores);
  return report;
}

}  // namespace mateval
