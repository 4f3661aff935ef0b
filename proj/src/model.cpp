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

#include "mateval/model.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

namespace mateval {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

struct PncKey {
  std::string_view key;
  Field CompositionPNC::*member;
};

struct PbdKey {
  std::string_view key;
  Field CompositionPBD::*member;
};

constexpr std::array<PncKey, 7> kPncKeys = {{
    {"Matrix Component", &CompositionPNC::matrix_component},
    {"Matrix Abbreviation", &CompositionPNC::matrix_abbreviation},
    {"Filler Chemical Name", &CompositionPNC::filler_chemical_name},
    {"Filler Abbreviation", &CompositionPNC::filler_abbreviation},
    {"Filler PST", &CompositionPNC::filler_pst},
    {"Filler Mass", &CompositionPNC::filler_mass},
    {"Filler Volume", &CompositionPNC::filler_volume},
}};

constexpr std::array<PbdKey, 8> kPbdKeys = {{
    {"Polymer Type", &CompositionPBD::polymer_type},
    {"Substitution Type", &CompositionPBD::substitution_type},
    {"Degree of Substitution", &CompositionPBD::degree_of_substitution},
    {"Comonomer Type", &CompositionPBD::comonomer_type},
    {"Degree of Hydrolysis", &CompositionPBD::degree_of_hydrolysis},
    {"Molecular Weight", &CompositionPBD::molecular_weight},
    {"Molecular Weight Unit", &CompositionPBD::molecular_weight_unit},
    {"Biodegradation Test Type", &CompositionPBD::biodegradation_test_type},
}};

}  // namespace

std::string_view domain_name(Domain d) {
  return d == Domain::kPNC ? "pnc" : "pbd";
}

std::optional<Domain> parse_domain(std::string_view name) {
  const std::string n = lower_ascii(name);
  if (n == "pnc") return Domain::kPNC;
  if (n == "pbd") return Domain::kPBD;
  return std::nullopt;
}

std::string_view category_name(PropertyCategory c) {
  switch (c) {
    case PropertyCategory::kThermal: return "thermal";
    case PropertyCategory::kElectrical: return "electrical";
    case PropertyCategory::kMechanical: return "mechanical";
    case PropertyCategory::kViscoelastic: return "viscoelastic";
    case PropertyCategory::kVolumetric: return "volumetric";
    case PropertyCategory::kRheological: return "rheological";
    case PropertyCategory::kBiodegradation: return "biodegradation";
  }
  return "unknown";
}

std::optional<PropertyCategory> parse_category(std::string_view name) {
  const auto norm = normalize_field(std::string(name));
  if (!norm) return std::nullopt;
  const std::string& n = *norm;
  if (n == "thermal") return PropertyCategory::kThermal;
  if (n == "electrical") return PropertyCategory::kElectrical;
  if (n == "mechanical") return PropertyCategory::kMechanical;
  // The extraction prompt historically shipped with this typo, so models
  // echo it back.
  if (n == "viscoelastic" || n == "viscoealstic")
    return PropertyCategory::kViscoelastic;
  if (n == "volumetric") return PropertyCategory::kVolumetric;
  if (n == "rheological") return PropertyCategory::kRheological;
  if (n == "biodegradation") return PropertyCategory::kBiodegradation;
  return std::nullopt;
}

bool category_allowed(Domain d, PropertyCategory c) {
  return d == Domain::kPBD ? c == PropertyCategory::kBiodegradation
                           : c != PropertyCategory::kBiodegradation;
}

std::optional<std::string> normalize_field(
    const std::optional<std::string>& value) {
  if (!value) return std::nullopt;
  std::string out;
  out.reserve(value->size());
  bool pending_space = false;
  for (char c : *value) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c);
  }
  if (out.empty() || out == "null") return std::nullopt;
  return out;
}

std::optional<std::string> normalize_percentage(
    const std::optional<std::string>& value) {
  auto norm = normalize_field(value);
  if (!norm) return norm;
  static const std::regex kBareNumber(
      R"(^([-+]?(?:\d+\.?\d*|\.\d+)(?:e[-+]?\d+)?) ?%?$)");
  std::smatch m;
  if (std::regex_match(*norm, m, kBareNumber)) return m[1].str() + "%";
  return norm;
}

Domain composition_domain(const Composition& c) {
  return std::holds_alternative<CompositionPNC>(c) ? Domain::kPNC
                                                   : Domain::kPBD;
}

std::vector<FieldView> composition_fields(const Composition& c) {
  std::vector<FieldView> out;
  if (const auto* pnc = std::get_if<CompositionPNC>(&c)) {
    for (const auto& k : kPncKeys) out.push_back({k.key, &(pnc->*k.member)});
  } else {
    const auto& pbd = std::get<CompositionPBD>(c);
    for (const auto& k : kPbdKeys) out.push_back({k.key, &(pbd.*k.member)});
  }
  return out;
}

Field* composition_field(Composition& c, std::string_view key) {
  if (auto* pnc = std::get_if<CompositionPNC>(&c)) {
    for (const auto& k : kPncKeys)
      if (k.key == key) return &(pnc->*k.member);
  } else {
    auto& pbd = std::get<CompositionPBD>(c);
    for (const auto& k : kPbdKeys)
      if (k.key == key) return &(pbd.*k.member);
  }
  return nullptr;
}

std::size_t present_field_count(const Composition& c) {
  std::size_t n = 0;
  for (const auto& f : composition_fields(c))
    if (f.value->has_value()) ++n;
  return n;
}

Composition empty_composition(Domain d) {
  if (d == Domain::kPNC) return CompositionPNC{};
  return CompositionPBD{};
}

const ImageAsset* DocumentBundle::find_image(std::string_view image_id) const {
  auto basename = [](std::string_view p) {
    const auto slash = p.find_last_of("/\\");
    return slash == std::string_view::npos ? p : p.substr(slash + 1);
  };
  auto stem = [&](std::string_view p) {
    p = basename(p);
    const auto dot = p.rfind('.');
    return dot == std::string_view::npos ? p : p.substr(0, dot);
  };
  for (const auto& img : images)
    if (img.image_id == image_id) return &img;
  for (const auto& img : images)
    if (basename(img.image_id) == basename(image_id)) return &img;
  for (const auto& img : images)
    if (stem(img.image_id) == stem(image_id)) return &img;
  return nullptr;
}

}  // namespace mateval
