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

// Three-stage extraction over a document bundle:
//
//   1. text:   samples = LLM(document)
//   2. image:  expansion_k = VLM(samples, image_k) for every image k
//   3. merge:  union of curves from all expansions onto the text samples
//
// optionally preceded by replacing each figure directive with a linearized
// table produced by a chart-to-table model.

#ifndef MATEVAL_PIPELINE_HPP_
#define MATEVAL_PIPELINE_HPP_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "mateval/model.hpp"
#include "mateval/model_client.hpp"

namespace mateval {

enum class PipelineMode { kTextOnly, kTextPlusImages };

std::string_view to_string(PipelineMode m);

struct PipelineConfig {
  Domain domain = Domain::kPNC;
  PipelineMode mode = PipelineMode::kTextOnly;
  bool deplot_substitution = false;
  // Placeholders: {{schema}} and {{document}}.
  std::string stage1_template;
  // Placeholders: {{samples}}.
  std::string stage2_template;
  // Instruction sent with every figure to the chart-to-table model.
  std::string chart_prompt = "Generate underlying data table of the figure below:";
  // Curves closer than this (discrete Fréchet) with equal headers and
  // category are collapsed during merge.
  double dup_epsilon = 1e-9;
  std::size_t max_concurrent_requests = 4;

  // Defaults with the stock prompt templates for `domain`.
  static PipelineConfig defaults(Domain domain);
};

std::string default_stage1_template(Domain domain);
std::string default_stage2_template(Domain domain);
// Empty-valued JSON template of one sample, as shown to the model.
std::string schema_template(Domain domain);

// A stage that could not complete, e.g. after transport retries ran out.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what)
      : Error(what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct RequestRecord {
  std::string stage;
  std::string channel;
  std::string image_id;  // empty for text requests
  std::string request_hash;
  std::string prompt_sha256;
  std::string response;  // empty when the request failed
  bool ok = true;
};

struct Diagnostic {
  std::string stage;
  std::string message;
};

// Requests and diagnostics collected while running the stages of one
// paper. Not synchronized: concurrent stages log into separate instances
// that are appended in a fixed order.
struct RunLog {
  std::vector<RequestRecord> requests;
  std::vector<Diagnostic> diagnostics;

  void note(std::string stage, std::string message) {
    diagnostics.push_back({std::move(stage), std::move(message)});
  }
  void append(const RunLog& other);
};

// Finds JSON values embedded in free text: code fences are stripped, every
// balanced {...} or [...] outside string literals is tried, and tuple
// syntax "(x, y)" is rewritten to arrays when plain parsing fails. Every
// repair and every dropped fragment is noted in `log` under `stage`.
std::vector<nlohmann::json> recover_json_values(std::string_view text,
                                                RunLog* log = nullptr,
                                                std::string_view stage = "");

// Sample objects recovered from model output. Objects nested in arrays or
// under a wrapper key are included; unusable samples are dropped with a
// diagnostic.
std::vector<SampleRecord> recover_samples(std::string_view text, Domain domain,
                                          RunLog* log = nullptr,
                                          std::string_view stage = "");

// Throws ContractError for an empty document and StageError when the client
// fails.
std::vector<SampleRecord> extract_text_samples(const DocumentBundle& doc,
                                               ModelClient& client,
                                               const PipelineConfig& cfg,
                                               RunLog* log = nullptr);

// Returns a copy of `samples` where each sample the model matched in this
// image carries the curves the model attached to it. Returned compositions
// that do not align (pairwise F1 > 0) with a stage-1 sample are discarded.
std::vector<SampleRecord> expand_with_image(std::span<const SampleRecord> samples,
                                            const ImageAsset& image,
                                            ModelClient& client,
                                            const PipelineConfig& cfg,
                                            RunLog* log = nullptr);

// Unions the curves of every expansion onto the aligned text samples,
// ordered by (category, source) with source 0 = text and k + 1 = image k.
// Duplicates (same category, identical normalized headers, Fréchet distance
// below epsilon) collapse to the one with more points.
std::vector<SampleRecord> merge(
    std::span<const SampleRecord> text_samples,
    std::span<const std::vector<SampleRecord>> image_expansions,
    double dup_epsilon = 1e-9);

// Replaces every \includegraphics directive whose image resolves and whose
// chart request succeeds with
//
//   ```table <image_id>
//   <linearized table>
//   ```
//
// Everything else is left byte-identical.
DocumentBundle substitute_figures(const DocumentBundle& doc,
                                  ModelClient& chart_client,
                                  const PipelineConfig& cfg = {},
                                  RunLog* log = nullptr);

struct PipelineClients {
  ModelClient* text = nullptr;
  ModelClient* vision = nullptr;
  ModelClient* chart = nullptr;
};

struct RunManifest {
  std::string paper_id;
  Domain domain = Domain::kPNC;
  PipelineMode mode = PipelineMode::kTextOnly;
  bool deplot_substitution = false;
  std::map<std::string, std::string> model_identities;
  std::map<std::string, std::string> prompt_hashes;
  std::string document_sha256;
  std::string substituted_document_sha256;
  std::size_t text_requests = 0;
  std::size_t multimodal_requests = 0;
  std::size_t chart_requests = 0;
  std::size_t sample_count = 0;
  std::string status = "ok";
  std::string failed_stage;
  std::string error;
  RunLog log;
  // Timing is the only nondeterministic part of a manifest.
  std::string started_at;
  std::map<std::string, double> stage_millis;
};

// With include_timing = false the output is byte-stable for a given input.
nlohmann::ordered_json manifest_to_json(const RunManifest& m,
                                        bool include_timing = true);

struct PipelineResult {
  std::optional<PaperRecord> record;  // empty when a stage failed
  RunManifest manifest;
};

// Stage failures are recorded in the manifest rather than thrown. Throws
// ContractError when a client required by the configuration is missing.
PipelineResult run_pipeline(const DocumentBundle& doc,
                            const PipelineConfig& cfg,
                            const PipelineClients& clients);

// <dir>/*.tex (main.tex preferred, otherwise the first by name) plus every
// image file in <dir>, sorted by name. paper_id is the directory name.
DocumentBundle load_document_bundle(const std::filesystem::path& dir);

}  // namespace mateval

#endif  // MATEVAL_PIPELINE_HPP_
