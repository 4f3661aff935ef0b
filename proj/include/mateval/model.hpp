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

// Domain types for material-sample records: compositions, property curves,
// samples, papers and document bundles.

#ifndef MATEVAL_MODEL_HPP_
#define MATEVAL_MODEL_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mateval {

// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed JSON syntax. `offset` is the byte position where parsing failed.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Well-formed input that does not match the expected schema.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& what, std::string field)
      : Error(what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// A caller broke an operation's precondition.
class ContractError : public Error {
 public:
  using Error::Error;
};

enum class Domain { kPNC, kPBD };

std::string_view domain_name(Domain d);
std::optional<Domain> parse_domain(std::string_view name);

// Property categories. The first six belong to PNC samples, the last to PBD.
enum class PropertyCategory {
  kThermal,
  kElectrical,
  kMechanical,
  kViscoelastic,
  kVolumetric,
  kRheological,
  kBiodegradation,
};

inline constexpr std::array<PropertyCategory, 6> kPncCategories = {
    PropertyCategory::kThermal,      PropertyCategory::kElectrical,
    PropertyCategory::kMechanical,   PropertyCategory::kViscoelastic,
    PropertyCategory::kVolumetric,   PropertyCategory::kRheological,
};

std::string_view category_name(PropertyCategory c);

// Canonicalizes a property name: case-insensitive, known misspellings
// ("viscoealstic") accepted. Returns nullopt for unknown names.
std::optional<PropertyCategory> parse_category(std::string_view name);

bool category_allowed(Domain d, PropertyCategory c);

// Trims, lowercases ASCII, collapses internal whitespace runs to one space.
// "", "null" (any case) and nullopt all map to nullopt.
std::optional<std::string> normalize_field(
    const std::optional<std::string>& value);

// normalize_field plus "%" appended to bare numerics ("5" -> "5%",
// "5 %" -> "5%"). Used for filler mass and volume.
std::optional<std::string> normalize_percentage(
    const std::optional<std::string>& value);

using Field = std::optional<std::string>;

struct CompositionPNC {
  Field matrix_component;
  Field matrix_abbreviation;
  Field filler_chemical_name;
  Field filler_abbreviation;
  Field filler_pst;
  Field filler_mass;
  Field filler_volume;

  bool operator==(const CompositionPNC&) const = default;
};

struct CompositionPBD {
  Field polymer_type;
  Field substitution_type;
  Field degree_of_substitution;
  Field comonomer_type;
  Field degree_of_hydrolysis;
  Field molecular_weight;
  Field molecular_weight_unit;
  Field biodegradation_test_type;

  bool operator==(const CompositionPBD&) const = default;
};

using Composition = std::variant<CompositionPNC, CompositionPBD>;

Domain composition_domain(const Composition& c);

// Read-only view of one composition field with its file key.
struct FieldView {
  std::string_view key;
  const Field* value;
};

// Fields in file-schema order.
std::vector<FieldView> composition_fields(const Composition& c);

// Mutable access by file key; nullptr when the key is not in the schema.
Field* composition_field(Composition& c, std::string_view key);

std::size_t present_field_count(const Composition& c);

struct Point {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point&) const = default;
};

using PointSeq = std::vector<Point>;

struct Curve {
  PropertyCategory category = PropertyCategory::kThermal;
  std::string x_header;
  std::string y_header;
  PointSeq points;

  bool operator==(const Curve&) const = default;
};

struct SampleRecord {
  Composition composition;
  std::vector<Curve> properties;

  bool operator==(const SampleRecord&) const = default;
};

struct PaperRecord {
  std::string paper_id;
  Domain domain = Domain::kPNC;
  std::vector<SampleRecord> samples;

  bool operator==(const PaperRecord&) const = default;
};

Composition empty_composition(Domain d);

struct ImageAsset {
  std::string image_id;
  std::string media_type;
  std::string bytes;

  bool operator==(const ImageAsset&) const = default;
};

struct DocumentBundle {
  std::string paper_id;
  std::string latex_source;
  std::vector<ImageAsset> images;

  const ImageAsset* find_image(std::string_view image_id) const;
};

}  // namespace mateval

#endif  // MATEVAL_MODEL_HPP_
