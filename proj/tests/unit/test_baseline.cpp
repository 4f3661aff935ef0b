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

#include <algorithm>
#include <random>

#include "../support/oracles.hpp"
#include "doctest.h"
#include "mateval/baseline.hpp"

using namespace mateval;
using doctest::Approx;

namespace {

SampleRecord sample_with(Domain d, std::vector<Curve> curves) {
  return {empty_composition(d), std::move(curves)};
}

Curve thermal(std::string x, PointSeq p) {
  return {PropertyCategory::kThermal, std::move(x), "k", std::move(p)};
}

}  // namespace

TEST_CASE("medoid_index") {
  CHECK(medoid_index(std::vector<PointSeq>{{{1, 2}}}) == 0);
  // Cumulative distances 4, 3 and 5.
  const std::vector<PointSeq> abc{{{0, 0}}, {{1, 0}}, {{3, 0}}};
  CHECK(medoid_index(abc) == 1);
  CHECK(medoid_index(std::vector<PointSeq>{{{0, 0}}, {{2, 0}}}) == 0);
  CHECK_THROWS_AS(medoid_index(std::vector<PointSeq>{}), ContractError);
}

TEST_CASE("medoid_index agrees with the pairwise matrix") {
  std::mt19937_64 rng(43);
  std::uniform_int_distribution<std::size_t> len(1, 5), count(1, 8);
  for (int iter = 0; iter < 50; ++iter) {
    std::vector<PointSeq> curves(count(rng));
    for (auto& c : curves) c = oracle::random_curve(rng, len(rng));
    std::vector<double> sums(curves.size(), 0.0);
    for (std::size_t i = 0; i < curves.size(); ++i)
      for (std::size_t j = 0; j < curves.size(); ++j)
        sums[i] += oracle::frechet_by_enumeration(curves[i], curves[j]);
    const auto expected = static_cast<std::size_t>(
        std::min_element(sums.begin(), sums.end()) - sums.begin());
    CHECK(medoid_index(curves) == expected);
  }
}

TEST_CASE("round_count") {
  CHECK(round_count(0.4, RoundingMode::kHalfUp) == 0);
  CHECK(round_count(1.6, RoundingMode::kHalfUp) == 2);
  CHECK(round_count(0.5, RoundingMode::kHalfUp) == 1);
  CHECK(round_count(0.5, RoundingMode::kHalfEven) == 0);
  CHECK(round_count(1.5, RoundingMode::kHalfEven) == 2);
  CHECK(round_count(0.0, RoundingMode::kHalfUp) == 0);
}

TEST_CASE("build_profile") {
  PaperRecord p{"v", Domain::kPNC, {}};
  p.samples.push_back(sample_with(Domain::kPNC, {thermal("time", {{0, 0}}),
                                                 thermal("time", {{1, 0}})}));
  p.samples.push_back(sample_with(Domain::kPNC, {thermal("time", {{3, 0}}),
                                                 thermal("temperature", {})}));
  const BaselineProfile prof = build_profile(std::vector{p}, Domain::kPNC);
  CHECK(prof.sample_count == 2);
  CHECK(prof.mean_count_per_sample.size() == 6);
  CHECK(prof.mean_count_per_sample.at(PropertyCategory::kThermal) == 2.0);
  CHECK(prof.mean_count_per_sample.at(PropertyCategory::kMechanical) == 0.0);
  REQUIRE(prof.entries.size() == 1);
  const BaselineEntry& e = prof.entries.at(PropertyCategory::kThermal);
  CHECK(e.modal_x_header == "time");
  CHECK(e.modal_y_header == "k");
  CHECK(e.medoid_curve == PointSeq{{1, 0}});
  CHECK(e.candidate_count == 3);
  CHECK(e.medoid_cumulative_distance == Approx(3.0));

  CHECK(profile_from_json(nlohmann::json::parse(profile_to_json(prof).dump())) ==
        prof);
  CHECK_THROWS_AS(build_profile(std::vector<PaperRecord>{}, Domain::kPNC),
                  ContractError);
}

TEST_CASE("medoid does not depend on corpus order") {
  std::vector<Curve> curves;
  for (int i = 0; i < 6; ++i)
    curves.push_back(thermal("t", {{static_cast<double>(i % 3), 0}}));
  PaperRecord a{"a", Domain::kPNC, {sample_with(Domain::kPNC, curves)}};
  std::reverse(curves.begin(), curves.end());
  PaperRecord b{"a", Domain::kPNC, {sample_with(Domain::kPNC, curves)}};
  CHECK(build_profile(std::vector{a}, Domain::kPNC) ==
        build_profile(std::vector{b}, Domain::kPNC));
}

TEST_CASE("expand_with_baseline") {
  BaselineProfile prof;
  prof.domain = Domain::kPNC;
  prof.sample_count = 5;
  for (PropertyCategory c : kPncCategories) prof.mean_count_per_sample[c] = 0.0;
  prof.mean_count_per_sample[PropertyCategory::kThermal] = 1.6;
  prof.mean_count_per_sample[PropertyCategory::kMechanical] = 0.4;
  prof.mean_count_per_sample[PropertyCategory::kElectrical] = 1.0;
  prof.entries[PropertyCategory::kThermal] = {{{0, 1}}, "time", "k", 0.0, 1};
  prof.entries[PropertyCategory::kMechanical] = {{{0, 2}}, "strain", "s", 0.0, 1};

  PaperRecord pred{"p", Domain::kPNC,
                   {sample_with(Domain::kPNC, {thermal("x", {{9, 9}})})}};
  const BaselineExpansion ex = expand_with_baseline(pred, prof);
  const auto& props = ex.paper.samples[0].properties;
  REQUIRE(props.size() == 2);
  for (const auto& c : props) {
    CHECK(c.category == PropertyCategory::kThermal);
    CHECK(c.points == PointSeq{{0, 1}});
    CHECK(c.x_header == "time");
  }
  REQUIRE(ex.warnings.size() == 1);
  CHECK(ex.warnings[0].find("electrical") != std::string::npos);
}

TEST_CASE("PBD samples get exactly one baseline curve") {
  PaperRecord v{"v", Domain::kPBD, {}};
  for (int i = 0; i < 3; ++i) {
    v.samples.push_back(sample_with(
        Domain::kPBD, {{PropertyCategory::kBiodegradation, "time", "degradation",
                        {{0, 0}, {10, 10.0 * i}}}}));
  }
  const BaselineProfile prof = build_profile(std::vector{v}, Domain::kPBD);
  PaperRecord pred{"p", Domain::kPBD,
                   {sample_with(Domain::kPBD, {}), sample_with(Domain::kPBD, {})}};
  const auto ex = expand_with_baseline(pred, prof);
  for (const auto& s : ex.paper.samples) {
    REQUIRE(s.properties.size() == 1);
    CHECK(s.properties[0].points == PointSeq{{0, 0}, {10, 10}});
  }
  CHECK(ex.warnings.empty());
}
