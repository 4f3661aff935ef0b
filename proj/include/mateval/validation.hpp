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

#ifndef MATEVAL_VALIDATION_HPP_
#define MATEVAL_VALIDATION_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mateval/model.hpp"

namespace mateval {

struct Violation {
  enum class Kind {
    kDomainMismatch,
    kNonFinitePoint,
    kUnnormalizedField,
    kPercentageFormat,
    kTooManyCurves,
  };

  Kind kind;
  std::size_t sample_index;
  std::optional<std::size_t> curve_index;
  std::string message;
};

// Lists every invariant violation in `record`; an empty list means valid.
std::vector<Violation> validate_paper(const PaperRecord& record);

}  // namespace mateval

#endif  // MATEVAL_VALIDATION_HPP_
