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

#include <cmath>
#include <set>

#include "doctest.h"
#include "mateval/report.hpp"
#include "mateval/scoring.hpp"

using namespace mateval;
using doctest::Approx;

namespace {

CompositionPNC comp(Field matrix, Field filler, Field mass = std::nullopt) {
  CompositionPNC c;
  c.matrix_component = std::move(matrix);
  c.filler_chemical_name = std::move(filler);
  c.filler_mass = std::move(mass);
  return c;
}

Curve curve(PropertyCategory cat, std::string x, std::string y, PointSeq p) {
  return {cat, std::move(x), std::move(y), std::move(p)};
}

// Two samples, three curves.
PaperRecord toy_truth() {
  PaperRecord p{"toy", Domain::kPNC, {}};
  p.samples.push_back(
      {comp("epoxy", "batio3", "5%"),
       {curve(PropertyCategory::kElectrical, "frequency", "permittivity",
              {{1, 4}, {10, 3.5}, {100, 3.2}}),
        curve(PropertyCategory::kThermal, "temperature", "conductivity",
              {{25, 0.2}, {50, 0.25}})}});
  p.samples.push_back(
      {comp("epoxy", "batio3", "10%"),
       {curve(PropertyCategory::kElectrical, "frequency", "permittivity",
              {{1, 5}, {10, 4.4}, {100, 4.1}})}});
  return p;
}

void check_columns(const ScoreColumns& c, double v) {
  for (double x : {c.precision, c.recall, c.f1, c.headers, c.curves, c.cas})
    CHECK(x == v);
}

}  // namespace

TEST_CASE("self evaluation scores 1 everywhere") {
  const PaperRecord t = toy_truth();
  const PaperScore s = score_paper(t, t);
  check_columns(s.columns, 1.0);
  CHECK(s.curve_slots == 3);
  CHECK(s.matched_curve_count == 3);
}

TEST_CASE("empty paper on both sides is vacuously perfect") {
  const PaperRecord e{"e", Domain::kPNC, {}};
  check_columns(score_paper(e, e).columns, 1.0);
}

TEST_CASE("correct compositions without curves") {
  const PaperRecord t = toy_truth();
  PaperRecord p = t;
  for (auto& s : p.samples) s.properties.clear();
  const PaperScore s = score_paper(p, t);
  CHECK(s.columns.f1 == 1.0);
  CHECK(s.columns.cas == 0.0);
  CHECK(s.columns.headers == 0.0);
  CHECK(s.curve_slots == 3);
}

TEST_CASE("empty prediction") {
  const PaperRecord t = toy_truth();
  const PaperScore s = score_paper(PaperRecord{"toy", Domain::kPNC, {}}, t);
  CHECK(s.columns.recall == 0.0);
  CHECK(s.columns.precision == 0.0);
  CHECK(s.fn == 6);
  CHECK(s.columns.cas == 0.0);
}

TEST_CASE("hand-computed toy paper") {
  const PaperRecord t = toy_truth();
  PaperRecord p{"toy", Domain::kPNC, {}};
  // Matches truth sample 0 except the mass; one curve with header typo.
  p.samples.push_back(
      {comp("epoxy", "batio3", "4%"),
       {curve(PropertyCategory::kElectrical, "frequency", "permitivity",
              {{1, 4}, {10, 3.5}, {100, 3.2}})}});
  const PaperScore s = score_paper(p, t);
  // Either truth sample gives tp 2, fp 1, fn 1; ties go to the lower index.
  CHECK(s.tp == 2);
  CHECK(s.fp == 1);
  CHECK(s.fn == 1 + 3);
  CHECK(s.columns.precision == Approx(2.0 / 3.0));
  CHECK(s.columns.recall == Approx(2.0 / 6.0));
  CHECK(s.columns.f1 == Approx(2 * (2.0 / 3) * (1.0 / 3) / (2.0 / 3 + 1.0 / 3)));
  // Slots: max(1, 2) for the pair plus 1 for the unmatched truth sample.
  CHECK(s.curve_slots == 3);
  const double h = 1.0 - 1.0 / 22.0;  // one deletion over "frequency|permittivity"
  CHECK(s.columns.headers == Approx(h / 3.0));
  CHECK(s.columns.curves == Approx(1.0 / 3.0));
  CHECK(s.columns.cas == Approx(h / 3.0));
}

TEST_CASE("score_paper rejects mismatched ids") {
  CHECK_THROWS_AS(score_paper(PaperRecord{"a"}, PaperRecord{"b"}), ContractError);
}

TEST_CASE("aggregate") {
  PaperScore a, b;
  a.paper_id = "b";
  a.columns.f1 = 0.4;
  b.paper_id = "a";
  b.columns.f1 = 0.6;
  CorpusReport r = aggregate({a, b});
  CHECK(r.aggregates.f1 == Approx(0.5));
  CHECK(r.per_paper[0].paper_id == "a");

  const PaperScore one = score_paper(toy_truth(), toy_truth());
  r = aggregate({one});
  CHECK(r.aggregates.cas == one.columns.cas);
  CHECK(r.aggregates.f1 == one.columns.f1);
  CHECK_THROWS_AS(aggregate({}), ContractError);
}

TEST_CASE("micro aggregation pools counts") {
  PaperScore a, b;
  a.paper_id = "a";
  a.tp = 1;
  a.fn = 3;
  a.curve_slots = 1;
  a.css_sum = 1.0;
  b.paper_id = "b";
  b.tp = 3;
  b.fp = 1;
  b.curve_slots = 3;
  const CorpusReport r = aggregate({a, b}, Aggregation::kMicro);
  CHECK(r.aggregates.precision == Approx(4.0 / 5.0));
  CHECK(r.aggregates.recall == Approx(4.0 / 7.0));
  CHECK(r.aggregates.cas == Approx(0.25));
}

TEST_CASE("fingerprint changes with every switch") {
  std::set<std::string> seen;
  for (auto hj : {HeaderJoin::kConcat, HeaderJoin::kMean})
    for (auto cn : {CurveNorm::kFrobenius, CurveNorm::kBoundingBox})
      for (auto ag : {Aggregation::kMacro, Aggregation::kMicro})
        for (auto rm : {RoundingMode::kHalfUp, RoundingMode::kHalfEven})
          seen.insert(fingerprint({hj, cn, ag, rm}));
  CHECK(seen.size() == 16);
  CHECK(fingerprint({}) == fingerprint({}));
  CHECK(parse_header_join("mean") == HeaderJoin::kMean);
  CHECK(parse_curve_norm("bbox") == CurveNorm::kBoundingBox);
  CHECK(parse_aggregation("micro") == Aggregation::kMicro);
  CHECK(parse_rounding("half-even") == RoundingMode::kHalfEven);
  CHECK_FALSE(parse_aggregation("median").has_value());
}

TEST_CASE("report rendering") {
  CorpusReport r = aggregate({score_paper(toy_truth(), toy_truth())});
  r.fingerprint = fingerprint({});
  r.failures.push_back({"broken", "bad json"});
  const auto j = report_to_json(r);
  CHECK(j["fingerprint"] == r.fingerprint);
  CHECK(j["aggregates"]["cas"] == 1.0);
  CHECK(j["per_paper"][0]["paper_id"] == "toy");
  CHECK(j["failures"][0]["paper_id"] == "broken");
  const std::string table = report_to_table(r);
  CHECK(table.starts_with("paper_id,precision,recall,f1,headers,curves,cas\n"));
  CHECK(table.find("toy,1,1,1,1,1,1\n") != std::string::npos);
  CHECK(table.find("__aggregate__,1,1,1,1,1,1\n") != std::string::npos);
}
