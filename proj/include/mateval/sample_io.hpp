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

// Reading and writing sample files and corpus directories.
//
// A corpus is laid out as <root>/<paper_id>/sample_*.json, one sample per
// file. Two schemas exist, one per domain:
//
//   PNC: "Matrix Component", ..., "Filler Volume", "Properties": [
//          {"property name": ..., "headers": [x, y], "data": [[x, y], ...]}]
//   PBD: "Polymer Type", ..., "Biodegradation Test Type",
//        "Biodegradation": {"header": [x, y], "data": [[x, y], ...]}

#ifndef MATEVAL_SAMPLE_IO_HPP_
#define MATEVAL_SAMPLE_IO_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "mateval/model.hpp"

namespace mateval {

enum class ParseMode {
  // Sample files on disk: unknown keys and unknown property names are errors.
  kStrict,
  // Model output: unknown keys and unusable curves are dropped, and every
  // such repair is appended to the diagnostics list.
  kLenient,
};

// Parses one sample file. Throws ParseError on malformed JSON and
// SchemaError when the document does not fit the domain's schema.
SampleRecord parse_sample_file(std::string_view raw, Domain domain);

SampleRecord sample_from_json(const nlohmann::json& j, Domain domain,
                              ParseMode mode,
                              std::vector<std::string>* diagnostics = nullptr);

nlohmann::ordered_json sample_to_json(const SampleRecord& sample);

// Pretty-printed, key order as in the schema, trailing newline.
std::string serialize_sample(const SampleRecord& sample);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

// Loads <dir>/sample_*.json in lexicographic filename order.
PaperRecord load_paper(const std::filesystem::path& dir, Domain domain);

// Loads every paper directory under root, sorted by paper id.
std::vector<PaperRecord> load_corpus(const std::filesystem::path& root,
                                     Domain domain);

// Writes <root>/<paper_id>/sample_NNN.json, replacing stale sample files.
void write_paper(const std::filesystem::path& root, const PaperRecord& paper);

}  // namespace mateval

#endif  // MATEVAL_SAMPLE_IO_HPP_
