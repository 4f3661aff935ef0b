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

// Per-paper scores and corpus aggregation.
//
// A paper is scored in two steps. Samples are first matched on composition
// F1, which yields precision, recall and F1. Curves of every matched sample
// pair are then matched on css. Headers, Curves and CAS are sums of the
// header factor, curve factor and css over matched curve pairs, divided by
// the number of curve slots: max(N, M) per matched sample pair plus every
// curve of an unmatched sample.

#ifndef MATEVAL_SCORING_HPP_
#define MATEVAL_SCORING_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mateval/metrics.hpp"
#include "mateval/model.hpp"
#include "mateval/options.hpp"

namespace mateval {

struct ScoreColumns {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double headers = 0.0;
  double curves = 0.0;
  double cas = 0.0;
};

struct PaperScore {
  std::string paper_id;
  ScoreColumns columns;
  std::size_t matched_sample_count = 0;
  std::size_t matched_curve_count = 0;

  // Raw counts, kept so that micro aggregation can pool them.
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double header_sum = 0.0;
  double curve_sum = 0.0;
  double css_sum = 0.0;
  std::size_t curve_slots = 0;
};

// Throws ContractError when the paper ids differ.
PaperScore score_paper(const PaperRecord& pred, const PaperRecord& truth,
                       const MetricOptions& opts = {});

struct PaperFailure {
  std::string paper_id;
  std::string message;
};

struct CorpusReport {
  std::vector<PaperScore> per_paper;  // sorted by paper_id
  ScoreColumns aggregates;
  std::string fingerprint;
  std::vector<PaperFailure> failures;
  std::vector<std::string> warnings;
};

// Throws ContractError on empty input.
CorpusReport aggregate(std::vector<PaperScore> scores,
                       Aggregation mode = Aggregation::kMacro);

}  // namespace mateval

#endif  // MATEVAL_SCORING_HPP_
