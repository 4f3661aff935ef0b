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

#include "mateval/validation.hpp"

#include <cmath>

namespace mateval {

std::vector<Violation> validate_paper(const PaperRecord& record) {
  std::vector<Violation> out;
  for (std::size_t s = 0; s < record.samples.size(); ++s) {
    const SampleRecord& sample = record.samples[s];
    const std::string where = "sample " + std::to_string(s);
    if (composition_domain(sample.composition) != record.domain) {
      out.push_back({Violation::Kind::kDomainMismatch, s, std::nullopt,
                     where + ": composition schema does not match paper domain " +
                         std::string(domain_name(record.domain))});
    }
    for (const auto& f : composition_fields(sample.composition)) {
      if (!f.value->has_value()) continue;
      const std::string& v = **f.value;
      if (normalize_field(v) != v) {
        out.push_back({Violation::Kind::kUnnormalizedField, s, std::nullopt,
                       where + ": field '" + std::string(f.key) +
                           "' is empty or not normalized"});
      } else if ((f.key == "Filler Mass" || f.key == "Filler Volume") &&
                 !v.ends_with('%')) {
        out.push_back({Violation::Kind::kPercentageFormat, s, std::nullopt,
                       where + ": field '" + std::string(f.key) +
                           "' does not end with '%'"});
      }
    }
    if (record.domain == Domain::kPBD && sample.properties.size() > 1) {
      out.push_back({Violation::Kind::kTooManyCurves, s, std::nullopt,
                     where + ": PBD sample carries " +
                         std::to_string(sample.properties.size()) +
                         " curves, at most 1 allowed"});
    }
    for (std::size_t c = 0; c < sample.properties.size(); ++c) {
      const Curve& curve = sample.properties[c];
      const std::string cwhere = where + " curve " + std::to_string(c) + " (" +
                                 std::string(category_name(curve.category)) +
                                 ")";
      if (!category_allowed(record.domain, curve.category)) {
        out.push_back({Violation::Kind::kDomainMismatch, s, c,
                       cwhere + ": category not allowed in " +
                           std::string(domain_name(record.domain)) + " papers"});
      }
      for (const Point& p : curve.points) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
          out.push_back({Violation::Kind::kNonFinitePoint, s, c,
                         cwhere + ": non-finite point"});
          break;
        }
      }
    }
  }
  return out;
}

}  // namespace mateval
