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

#include "../support/oracles.hpp"
#include "doctest.h"
#include "mateval/correlation.hpp"

using namespace mateval;
using doctest::Approx;

TEST_CASE("pearson") {
  const std::vector<double> x{1, 2, 3, 4, 7};
  std::vector<double> y, neg;
  for (double v : x) {
    y.push_back(2 * v + 1);
    neg.push_back(-v);
  }
  CHECK(pearson(x, y) == Approx(1.0).epsilon(1e-12));
  CHECK(pearson(x, neg) == Approx(-1.0).epsilon(1e-12));
  const std::vector<double> a{1, 2, 3, 4}, b{1, 3, 2, 5};
  // mx = 2.5, my = 2.75; sxy = 5.5, sxx = 5, syy = 8.75
  CHECK(pearson(a, b) == Approx(5.5 / std::sqrt(5.0 * 8.75)).epsilon(1e-12));
  CHECK(std::abs(pearson(a, b) - oracle::pearson_formula(a, b)) <= 1e-12);
  CHECK_THROWS_AS(pearson(std::vector<double>{1}, std::vector<double>{1}),
                  ContractError);
  CHECK_THROWS_AS(pearson(a, std::vector<double>{1, 2}), ContractError);
  CHECK_THROWS_AS(pearson(a, std::vector<double>{2, 2, 2, 2}),
                  UndefinedCorrelationError);
}

TEST_CASE("average ranks") {
  CHECK(average_ranks(std::vector<double>{1, 2, 2, 3}) ==
        std::vector<double>{1, 2.5, 2.5, 4});
  CHECK(average_ranks(std::vector<double>{3, 1, 2}) ==
        std::vector<double>{3, 1, 2});
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> u(0, 4);
  for (int i = 0; i < 100; ++i) {
    std::vector<double> v(12);
    for (double& x : v) x = u(rng);
    CHECK(average_ranks(v) == oracle::ranks_by_counting(v));
  }
}

TEST_CASE("spearman") {
  const std::vector<double> x{1, 2, 3, 4}, y{10, 20, 30, 45};
  CHECK(spearman(x, y) == Approx(1.0));
  const std::vector<double> rev{4, 3, 2, 1};
  CHECK(spearman(x, rev) == Approx(-1.0));
  const std::vector<double> tied{1, 2, 2, 3};
  CHECK(std::abs(spearman(tied, x) - oracle::spearman_formula(tied, x)) <= 1e-12);
}

TEST_CASE("permutation test") {
  const std::vector<double> x{1, 2, 3, 4, 5, 6, 7, 8};
  const std::vector<double> y{2, 1, 4, 3, 6, 5, 8, 7};
  const auto a = correlate(x, y, CorrelationKind::kPearson, 2000, 9);
  const auto b = correlate(x, y, CorrelationKind::kPearson, 2000, 9);
  CHECK(a.coefficient == b.coefficient);
  CHECK(a.p_value == b.p_value);
  CHECK(a.p_value > 0.0);
  CHECK(a.p_value < 0.05);
  CHECK(a.permutations == 2000);
  const auto none = correlate(x, y, CorrelationKind::kSpearman, 0, 1);
  CHECK(none.p_value == 1.0);
  const std::vector<double> noise{3, 7, 1, 8, 2, 6, 4, 5};
  CHECK(correlate(x, noise, CorrelationKind::kSpearman, 2000, 9).p_value > 0.1);
}

TEST_CASE("automated score components") {
  const Curve t{PropertyCategory::kThermal, "temp", "", {{0, 0}, {1, 1}}};
  const Curve p{PropertyCategory::kThermal, "temperature", "", {{0, 0}, {1, 0}}};
  CHECK(header_auto_score(t, t) == 1.0);
  CHECK(curve_auto_score(t, t) == 1.0);
  CHECK(header_auto_score(p, t) == Approx(4.0 / 11.0));
  CHECK(curve_auto_score(p, t) == Approx(1.0 - 1.0 / std::sqrt(2.0)));
  const Curve far{PropertyCategory::kThermal, "zz", "", {{0, 0}}};
  CHECK(header_auto_score(far, t) == 0.0);
}
