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

#include "mateval/baseline.hpp"

#include <algorithm>
#include <cmath>

#include "mateval/metrics.hpp"

namespace mateval {

namespace {

std::vector<PropertyCategory> domain_categories(Domain d) {
  if (d == Domain::kPBD) return {PropertyCategory::kBiodegradation};
  return {kPncCategories.begin(), kPncCategories.end()};
}

// Total order on curves independent of corpus order.
std::string curve_key(const Curve& c) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : c.points) pts.push_back({p.x, p.y});
  return nlohmann::json::array({c.x_header, c.y_header, pts}).dump();
}

std::string modal_label(const std::map<std::string, std::size_t>& counts) {
  std::string best;
  std::size_t best_count = 0;
  // std::map iterates in lexicographic order, so the first maximum wins ties.
  for (const auto& [label, n] : counts) {
    if (n > best_count) {
      best = label;
      best_count = n;
    }
  }
  return best;
}

}  // namespace

std::size_t medoid_index(std::span<const PointSeq> curves) {
  if (curves.empty()) throw ContractError("medoid_index: no curves");
  const std::size_t n = curves.size();
  std::vector<double> dist(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      dist[i * n + j] = dist[j * n + i] = discrete_frechet(curves[i], curves[j]);
    }
  }
  std::size_t best = 0;
  double best_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) sum += dist[i * n + j];
    if (i == 0 || sum < best_sum) {
      best = i;
      best_sum = sum;
    }
  }
  return best;
}

BaselineProfile build_profile(std::span<const PaperRecord> validation,
                              Domain domain) {
  if (validation.empty()) {
    throw ContractError("build_profile: empty validation corpus");
  }
  BaselineProfile profile;
  profile.domain = domain;
  std::map<PropertyCategory, std::vector<const Curve*>> by_category;
  for (const auto& paper : validation) {
    profile.sample_count += paper.samples.size();
    for (const auto& s : paper.samples)
      for (const auto& c : s.properties) by_category[c.category].push_back(&c);
  }

  for (PropertyCategory cat : domain_categories(domain)) {
    const auto& all = by_category[cat];
    profile.mean_count_per_sample[cat] =
        profile.sample_count == 0
            ? 0.0
            : static_cast<double>(all.size()) /
                  static_cast<double>(profile.sample_count);

    std::vector<std::pair<std::string, const Curve*>> candidates;
    std::map<std::string, std::size_t> x_counts, y_counts;
    for (const Curve* c : all) {
      const HeaderPair h = make_header_pair(*c);
      if (!h.x_label.empty()) ++x_counts[h.x_label];
      if (!h.y_label.empty()) ++y_counts[h.y_label];
      if (!c->points.empty()) candidates.emplace_back(curve_key(*c), c);
    }
    if (candidates.empty()) continue;
    std::sort(candidates.begin(), candidates.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<PointSeq> curves;
    curves.reserve(candidates.size());
    for (const auto& [key, c] : candidates) curves.push_back(c->points);
    const std::size_t m = medoid_index(curves);

    BaselineEntry entry;
    entry.medoid_curve = curves[m];
    entry.modal_x_header = modal_label(x_counts);
    entry.modal_y_header = modal_label(y_counts);
    entry.candidate_count = curves.size();
    for (const auto& other : curves)
      entry.medoid_cumulative_distance += discrete_frechet(curves[m], other);
    profile.entries[cat] = std::move(entry);
  }
  return profile;
}

std::size_t round_count(double mean, RoundingMode mode) {
  if (!(mean > 0.0)) return 0;
  const double floor = std::floor(mean);
  const double frac = mean - floor;
  double r = floor;
  if (frac > 0.5) {
    r = floor + 1.0;
  } else if (frac == 0.5) {
    const bool even = std::fmod(floor, 2.0) == 0.0;
    r = (mode == RoundingMode::kHalfUp || !even) ? floor + 1.0 : floor;
  }
  return static_cast<std::size_t>(r);
}

BaselineExpansion expand_with_baseline(const PaperRecord& pred,
                                       const BaselineProfile& profile,
                                       RoundingMode rounding) {
  BaselineExpansion out;
  out.paper = pred;
  std::vector<std::pair<PropertyCategory, std::size_t>> plan;
  for (PropertyCategory cat : domain_categories(profile.domain)) {
    std::size_t copies = 1;
    if (profile.domain == Domain::kPNC) {
      const auto it = profile.mean_count_per_sample.find(cat);
      copies = it == profile.mean_count_per_sample.end()
                   ? 0
                   : round_count(it->second, rounding);
    }
    if (copies == 0) continue;
    if (!profile.entries.contains(cat)) {
      out.warnings.push_back("no baseline curve for category '" +
                             std::string(category_name(cat)) + "'; skipped");
      continue;
    }
    plan.emplace_back(cat, copies);
  }
  for (auto& sample : out.paper.samples) {
    sample.properties.clear();
    for (const auto& [cat, copies] : plan) {
      const BaselineEntry& e = profile.entries.at(cat);
      Curve c{cat, e.modal_x_header, e.modal_y_header, e.medoid_curve};
      sample.properties.insert(sample.properties.end(), copies, c);
    }
  }
  return out;
}

nlohmann::ordered_json profile_to_json(const BaselineProfile& profile) {
  using ojson = nlohmann::ordered_json;
  ojson j = ojson::object();
  j["domain"] = std::string(domain_name(profile.domain));
  j["sample_count"] = profile.sample_count;
  ojson cats = ojson::array();
  for (const auto& [cat, mean] : profile.mean_count_per_sample) {
    ojson c = ojson::object();
    c["category"] = std::string(category_name(cat));
    c["mean_count_per_sample"] = mean;
    const auto it = profile.entries.find(cat);
    if (it == profile.entries.end()) {
      c["baseline"] = nullptr;
    } else {
      const BaselineEntry& e = it->second;
      ojson b = ojson::object();
      b["x_header"] = e.modal_x_header;
      b["y_header"] = e.modal_y_header;
      ojson pts = ojson::array();
      for (const auto& p : e.medoid_curve) pts.push_back({p.x, p.y});
      b["medoid_curve"] = std::move(pts);
      b["medoid_cumulative_distance"] = e.medoid_cumulative_distance;
      b["candidate_count"] = e.candidate_count;
      c["baseline"] = std::move(b);
    }
    cats.push_back(std::move(c));
  }
  j["categories"] = std::move(cats);
  return j;
}

BaselineProfile profile_from_json(const nlohmann::json& j) {
  try {
    BaselineProfile p;
    const auto domain = parse_domain(j.at("domain").get<std::string>());
    if (!domain) throw SchemaError("unknown domain in profile", "domain");
    p.domain = *domain;
    p.sample_count = j.at("sample_count").get<std::size_t>();
    for (const auto& c : j.at("categories")) {
      const auto cat = parse_category(c.at("category").get<std::string>());
      if (!cat) throw SchemaError("unknown category in profile", "category");
      p.mean_count_per_sample[*cat] = c.at("mean_count_per_sample").get<double>();
      const auto& b = c.at("baseline");
      if (b.is_null()) continue;
      BaselineEntry e;
      e.modal_x_header = b.at("x_header").get<std::string>();
      e.modal_y_header = b.at("y_header").get<std::string>();
      for (const auto& pt : b.at("medoid_curve"))
        e.medoid_curve.push_back({pt.at(0).get<double>(), pt.at(1).get<double>()});
      e.medoid_cumulative_distance =
          b.at("medoid_cumulative_distance").get<double>();
      e.candidate_count = b.at("candidate_count").get<std::size_t>();
      p.entries[*cat] = std::move(e);
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed baseline profile: ") + e.what(),
                      "profile");
  }
}

}  // namespace mateval
