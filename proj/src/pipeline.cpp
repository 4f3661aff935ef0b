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

#include "mateval/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <future>
#include <regex>

#include "mateval/assignment.hpp"
#include "mateval/hash.hpp"
#include "mateval/metrics.hpp"
#include "mateval/sample_io.hpp"

namespace mateval {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::string_view kPncPropertyInstructions =
    "Properties is a list of dictionaries where each dictionary represents a "
    "property of the nanocomposite. The property name should be filled out "
    "with the name of the property where the choices are: electrical, "
    "mechanical, viscoelastic, thermal, volumetric, rheological.\n"
    "The headers should be filled out with the x and y labels which are the "
    "names of the conditions or the labels of the data (e.g. time, "
    "temperature, frequency, strain, conductivity, dielectric strength, "
    "etc.). The data should be a list of (x, y) tuples. For example, if the "
    "property is 24 MPa at temperature 25°C and 30 MPa at temperature 50°C, "
    "the data should be [(25, 24), (50, 30)]. If no data is mentioned, "
    "please fill it with null.";

constexpr std::string_view kPbdPropertyInstructions =
    "Biodegradation is a dictionary describing the biodegradation curve of "
    "the sample. The header should be filled out with the x and y labels "
    "which are the names of the condition and of the measured quantity "
    "(e.g. time, biodegradation %). The data should be a list of (x, y) "
    "tuples. For example, if 20% biodegradation is reached after 10 days and "
    "45% after 30 days, the data should be [(10, 20), (30, 45)]. If no data "
    "is mentioned, please fill it with null.";

std::string_view sample_noun(Domain d) {
  return d == Domain::kPNC ? "nanocomposite" : "polymer biodegradation";
}

std::string fill(std::string text, std::string_view placeholder,
                 std::string_view value) {
  std::size_t pos = 0;
  while ((pos = text.find(placeholder, pos)) != std::string::npos) {
    text.replace(pos, placeholder.size(), value);
    pos += value.size();
  }
  return text;
}

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n';
}

std::string strip_fences(std::string_view text, bool* stripped) {
  std::string out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = text.substr(pos, eol - pos);
    std::size_t first = 0;
    while (first < line.size() && is_space(line[first])) ++first;
    if (line.substr(first).starts_with("```")) {
      *stripped = true;
    } else {
      out.append(line);
      if (eol < text.size()) out.push_back('\n');
    }
    pos = eol + 1;
  }
  return out;
}

// Index of the bracket closing the one at `open`, or npos.
std::size_t find_match(std::string_view t, std::size_t open) {
  std::vector<char> stack;
  bool in_string = false;
  for (std::size_t i = open; i < t.size(); ++i) {
    const char c = t[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{' || c == '[') {
      stack.push_back(c == '{' ? '}' : ']');
    } else if (c == '}' || c == ']') {
      if (stack.empty() || stack.back() != c) return std::string_view::npos;
      stack.pop_back();
      if (stack.empty()) return i;
    }
  }
  return std::string_view::npos;
}

// Tuples to arrays, Python None to null, trailing commas removed; string
// literals untouched.
std::string repair_fragment(std::string_view t) {
  std::string out;
  bool in_string = false;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const char c = t[i];
    if (in_string) {
      out.push_back(c);
      if (c == '\\' && i + 1 < t.size()) {
        out.push_back(t[++i]);
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
      out.push_back(c);
    } else if (c == '(') {
      out.push_back('[');
    } else if (c == ')') {
      out.push_back(']');
    } else if (t.substr(i).starts_with("None")) {
      out += "null";
      i += 3;
    } else if (c == ',') {
      std::size_t k = i + 1;
      while (k < t.size() && is_space(t[k])) ++k;
      if (k < t.size() && (t[k] == '}' || t[k] == ']')) continue;
      out.push_back(c);
    } else {
      out.push_back(c);
    }
  }
  return out;
}

bool looks_like_sample(const json& j, Domain domain) {
  if (!j.is_object()) return false;
  Composition probe = empty_composition(domain);
  for (const auto& [key, value] : j.items()) {
    if (composition_field(probe, key)) return true;
    if (domain == Domain::kPNC && key == "Properties") return true;
    if (domain == Domain::kPBD && key == "Biodegradation") return true;
  }
  return false;
}

void collect_sample_objects(const json& j, Domain domain,
                            std::vector<const json*>& out) {
  if (looks_like_sample(j, domain)) {
    out.push_back(&j);
    return;
  }
  if (j.is_array() || j.is_object()) {
    for (const auto& v : j) collect_sample_objects(v, domain, out);
  }
}

std::string now_iso8601() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class StageTimer {
 public:
  StageTimer(RunManifest& m, std::string stage)
      : m_(m), stage_(std::move(stage)),
        start_(std::chrono::steady_clock::now()) {}
  ~StageTimer() {
    const auto elapsed = std::chrono::steady_clock::now() - start_;
    m_.stage_millis[stage_] =
        std::chrono::duration<double, std::milli>(elapsed).count();
  }

 private:
  RunManifest& m_;
  std::string stage_;
  std::chrono::steady_clock::time_point start_;
};

bool same_curve(const Curve& a, const Curve& b, double eps) {
  if (a.category != b.category) return false;
  if (make_header_pair(a).joined != make_header_pair(b).joined) return false;
  if (a.points.empty() || b.points.empty()) {
    return a.points.empty() && b.points.empty();
  }
  return discrete_frechet(a.points, b.points) < eps;
}

std::string media_type_for(const fs::path& p) {
  std::string ext = p.extension().string();
  for (char& c : ext) c = static_cast<char>(std::tolower(c));
  if (ext == ".png") return "image/png";
  if (ext == ".jpg" || ext == ".jpeg") return "image/jpeg";
  if (ext == ".gif") return "image/gif";
  if (ext == ".webp") return "image/webp";
  if (ext == ".bmp") return "image/bmp";
  return "";
}

}  // namespace

std::string_view to_string(PipelineMode m) {
  return m == PipelineMode::kTextOnly ? "t-only" : "t+img";
}

std::string schema_template(Domain domain) {
  SampleRecord blank{empty_composition(domain), {}};
  nlohmann::ordered_json j = sample_to_json(blank);
  for (auto& [key, value] : j.items()) {
    if (value.is_null()) value = "";
  }
  if (domain == Domain::kPNC) {
    j["Properties"] = nlohmann::ordered_json::array(
        {{{"data", {{"", ""}, {"", ""}}},
          {"headers", {"x-label", "y-label"}},
          {"property name", ""}}});
  } else {
    j["Biodegradation"] = {{"header", {"x-label", "y-label"}},
                           {"data", {{"x1", "y1"}, {"x2", "y2"}}}};
  }
  return j.dump(4);
}

std::string default_stage1_template(Domain domain) {
  const std::string noun(sample_noun(domain));
  std::string t =
      "You extract structured data from scientific articles.\n\n"
      "Please read the following paragraphs, find all the " + noun +
      " samples, and fill out the given JSON template for each one of those " +
      noun +
      " samples. Do not merge samples of different compositions. If an "
      "attribute is not mentioned, fill that section with \"null\".";
  if (domain == Domain::kPNC) {
    t += " Mass and Volume Composition should be followed by a %.";
  }
  t += "\n\nJSON Template:\n{{schema}}\n\n";
  t += domain == Domain::kPNC ? kPncPropertyInstructions
                              : kPbdPropertyInstructions;
  t += "\n\nArticle:\n{{document}}\n";
  return t;
}

std::string default_stage2_template(Domain domain) {
  const std::string noun =
      domain == Domain::kPNC ? "polymer nanocomposite" : "polymer biodegradation";
  std::string t =
      "Given the image and the following " + noun +
      " sample compositions, first identify which sample composition is "
      "present in the image, then extract its properties.\n\n"
      "Sample Compositions:\n{{samples}}\n\n"
      "For those sample compositions that are present in the image, extract "
      "the information about the property.\n\n";
  t += domain == Domain::kPNC ? kPncPropertyInstructions
                              : kPbdPropertyInstructions;
  t += "\n\nExpand the sample composition JSONs to include the property "
       "information and return all the expanded JSONs.\n";
  return t;
}

PipelineConfig PipelineConfig::defaults(Domain domain) {
  PipelineConfig cfg;
  cfg.domain = domain;
  cfg.stage1_template = default_stage1_template(domain);
  cfg.stage2_template = default_stage2_template(domain);
  return cfg;
}

void RunLog::append(const RunLog& other) {
  requests.insert(requests.end(), other.requests.begin(),
                  other.requests.end());
  diagnostics.insert(diagnostics.end(), other.diagnostics.begin(),
                     other.diagnostics.end());
}

std::vector<json> recover_json_values(std::string_view text, RunLog* log,
                                      std::string_view stage) {
  auto note = [&](std::string msg) {
    if (log) log->note(std::string(stage), std::move(msg));
  };
  bool stripped = false;
  const std::string t = strip_fences(text, &stripped);
  if (stripped) note("stripped code fences");

  std::vector<json> out;
  std::size_t i = 0;
  while (i < t.size()) {
    const char c = t[i];
    if (c != '{' && c != '[') {
      ++i;
      continue;
    }
    const std::size_t end = find_match(t, i);
    if (end == std::string::npos) {
      ++i;
      continue;
    }
    const std::string_view chunk(t.data() + i, end - i + 1);
    json value = json::parse(chunk, nullptr, /*allow_exceptions=*/false);
    if (value.is_discarded()) {
      value = json::parse(repair_fragment(chunk), nullptr, false);
      if (!value.is_discarded()) {
        note("repaired non-JSON syntax in fragment at offset " +
             std::to_string(i));
      }
    }
    if (value.is_discarded()) {
      if (c == '{') {
        note("dropped unparseable fragment at offset " + std::to_string(i));
      }
      ++i;
      continue;
    }
    out.push_back(std::move(value));
    i = end + 1;
  }
  return out;
}

std::vector<SampleRecord> recover_samples(std::string_view text, Domain domain,
                                          RunLog* log, std::string_view stage) {
  const std::vector<json> values = recover_json_values(text, log, stage);
  std::vector<const json*> objects;
  for (const auto& v : values) collect_sample_objects(v, domain, objects);
  std::vector<SampleRecord> out;
  for (const json* obj : objects) {
    std::vector<std::string> repairs;
    try {
      out.push_back(sample_from_json(*obj, domain, ParseMode::kLenient,
                                     &repairs));
    } catch (const Error& e) {
      if (log) log->note(std::string(stage), std::string("dropped sample: ") + e.what());
      continue;
    }
    if (log) {
      for (auto& r : repairs) log->note(std::string(stage), std::move(r));
    }
  }
  return out;
}

std::vector<SampleRecord> extract_text_samples(const DocumentBundle& doc,
                                               ModelClient& client,
                                               const PipelineConfig& cfg,
                                               RunLog* log) {
  if (doc.latex_source.empty()) {
    throw ContractError("extract_text_samples: empty document");
  }
  const std::string prompt =
      fill(fill(cfg.stage1_template, "{{schema}}", schema_template(cfg.domain)),
           "{{document}}", doc.latex_source);
  RequestRecord req{"text", "text", "", request_hash(prompt), sha256_hex(prompt),
                    "", true};
  std::string response;
  try {
    response = client.complete_text(prompt);
  } catch (const UpstreamError& e) {
    req.ok = false;
    if (log) log->requests.push_back(req);
    throw StageError("text", e.what());
  }
  req.response = response;
  if (log) log->requests.push_back(std::move(req));
  auto samples = recover_samples(response, cfg.domain, log, "text");
  if (samples.empty() && log) log->note("text", "no samples recovered");
  return samples;
}

std::vector<SampleRecord> expand_with_image(std::span<const SampleRecord> samples,
                                            const ImageAsset& image,
                                            ModelClient& client,
                                            const PipelineConfig& cfg,
                                            RunLog* log) {
  const std::string stage = "image:" + image.image_id;
  json listed = json::array();
  for (const auto& s : samples) {
    SampleRecord composition_only{s.composition, {}};
    listed.push_back(json::parse(serialize_sample(composition_only)));
  }
  const std::string prompt =
      fill(cfg.stage2_template, "{{samples}}", listed.dump(4));
  RequestRecord req{stage,        "vision", image.image_id,
                    request_hash(prompt, &image), sha256_hex(prompt), "", true};
  std::string response;
  try {
    response = client.complete_multimodal(prompt, image);
  } catch (const UpstreamError& e) {
    req.ok = false;
    if (log) log->requests.push_back(req);
    throw StageError(stage, e.what());
  }
  req.response = response;
  if (log) log->requests.push_back(std::move(req));

  std::vector<SampleRecord> out(samples.begin(), samples.end());
  const auto returned = recover_samples(response, cfg.domain, log, stage);
  if (returned.empty()) return out;
  if (samples.empty()) {
    if (log) {
      log->note(stage, "discarded " + std::to_string(returned.size()) +
                           " sample(s): no stage-1 samples to expand");
    }
    return out;
  }

  ScoreMatrix f1(returned.size(), samples.size());
  for (std::size_t r = 0; r < returned.size(); ++r)
    for (std::size_t s = 0; s < samples.size(); ++s)
      f1(r, s) = composition_pair_score(returned[r].composition,
                                        samples[s].composition)
                     .f1();
  const AssignmentMatrix a = munkres(f1);
  std::vector<char> used(returned.size(), 0);
  for (const auto& [r, s] : a.pairs) {
    if (f1(r, s) <= 0.0) continue;
    used[r] = 1;
    auto& dst = out[s].properties;
    dst.insert(dst.end(), returned[r].properties.begin(),
               returned[r].properties.end());
  }
  for (std::size_t r = 0; r < returned.size(); ++r) {
    if (used[r]) continue;
    bool alignable = false;
    for (std::size_t s = 0; s < samples.size(); ++s)
      alignable = alignable || f1(r, s) > 0.0;
    if (log) {
      log->note(stage, "discarded returned sample " + std::to_string(r) +
                           (alignable ? ": overlaps a sample already matched"
                                      : ": composition not in stage-1 output"));
    }
  }
  return out;
}

std::vector<SampleRecord> merge(
    std::span<const SampleRecord> text_samples,
    std::span<const std::vector<SampleRecord>> image_expansions,
    double dup_epsilon) {
  struct Sourced {
    Curve curve;
    std::size_t source;
  };
  std::vector<std::vector<Sourced>> pool(text_samples.size());
  for (std::size_t s = 0; s < text_samples.size(); ++s)
    for (const auto& c : text_samples[s].properties) pool[s].push_back({c, 0});

  for (std::size_t k = 0; k < image_expansions.size(); ++k) {
    const auto& expansion = image_expansions[k];
    if (expansion.empty() || text_samples.empty()) continue;
    const SampleAlignment aligned = align_samples(expansion, text_samples);
    for (const auto& [e, t] : aligned.assignment.pairs) {
      const auto& ec = expansion[e].composition;
      const auto& tc = text_samples[t].composition;
      if (composition_pair_score(ec, tc).f1() <= 0.0 && !(ec == tc)) continue;
      for (const auto& c : expansion[e].properties)
        pool[t].push_back({c, k + 1});
    }
  }

  std::vector<SampleRecord> out;
  out.reserve(text_samples.size());
  for (std::size_t s = 0; s < text_samples.size(); ++s) {
    auto& curves = pool[s];
    std::stable_sort(curves.begin(), curves.end(),
                     [](const Sourced& a, const Sourced& b) {
                       if (a.curve.category != b.curve.category)
                         return a.curve.category < b.curve.category;
                       return a.source < b.source;
                     });
    SampleRecord merged{text_samples[s].composition, {}};
    for (auto& sc : curves) {
      auto dup = std::find_if(
          merged.properties.begin(), merged.properties.end(),
          [&](const Curve& kept) { return same_curve(kept, sc.curve, dup_epsilon); });
      if (dup == merged.properties.end()) {
        merged.properties.push_back(std::move(sc.curve));
      } else if (sc.curve.points.size() > dup->points.size()) {
        *dup = std::move(sc.curve);
      }
    }
    out.push_back(std::move(merged));
  }
  return out;
}

DocumentBundle substitute_figures(const DocumentBundle& doc,
                                  ModelClient& chart_client,
                                  const PipelineConfig& cfg, RunLog* log) {
  static const std::regex kDirective(
      R"(\\includegraphics\s*(\[[^\]]*\])?\s*\{([^}]*)\})");
  DocumentBundle out = doc;
  out.latex_source.clear();
  const std::string& src = doc.latex_source;
  std::size_t copied = 0;
  for (auto it = std::sregex_iterator(src.begin(), src.end(), kDirective);
       it != std::sregex_iterator(); ++it) {
    const std::smatch& m = *it;
    const auto pos = static_cast<std::size_t>(m.position(0));
    out.latex_source.append(src, copied, pos - copied);
    copied = pos + static_cast<std::size_t>(m.length(0));

    std::string target = m[2].str();
    target.erase(0, target.find_first_not_of(" \t"));
    target.erase(target.find_last_not_of(" \t") + 1);
    const ImageAsset* image = doc.find_image(target);
    if (!image) {
      if (log) log->note("deplot", "unresolved figure '" + target + "'; left as is");
      out.latex_source.append(m[0].str());
      continue;
    }
    RequestRecord req{"deplot", "chart", image->image_id,
                      request_hash(cfg.chart_prompt, image),
                      sha256_hex(cfg.chart_prompt), "", true};
    std::string table;
    try {
      table = chart_client.complete_multimodal(cfg.chart_prompt, *image);
    } catch (const UpstreamError& e) {
      req.ok = false;
      if (log) {
        log->requests.push_back(std::move(req));
        log->note("deplot", "chart request for '" + image->image_id +
                                "' failed: " + e.what() + "; left as is");
      }
      out.latex_source.append(m[0].str());
      continue;
    }
    req.response = table;
    if (log) log->requests.push_back(std::move(req));
    while (!table.empty() && (table.back() == '\n' || table.back() == '\r'))
      table.pop_back();
    out.latex_source += "```table " + image->image_id + "\n" + table + "\n```";
  }
  out.latex_source.append(src, copied, std::string::npos);
  return out;
}

nlohmann::ordered_json manifest_to_json(const RunManifest& m,
                                        bool include_timing) {
  using ojson = nlohmann::ordered_json;
  ojson j = ojson::object();
  j["paper_id"] = m.paper_id;
  j["domain"] = std::string(domain_name(m.domain));
  j["mode"] = std::string(to_string(m.mode));
  j["deplot_substitution"] = m.deplot_substitution;
  j["model_identities"] = m.model_identities;
  j["prompt_hashes"] = m.prompt_hashes;
  j["document_sha256"] = m.document_sha256;
  if (m.deplot_substitution)
    j["substituted_document_sha256"] = m.substituted_document_sha256;
  j["requests"] = {{"text", m.text_requests},
                   {"multimodal", m.multimodal_requests},
                   {"chart", m.chart_requests}};
  j["sample_count"] = m.sample_count;
  j["status"] = m.status;
  if (m.status != "ok") {
    j["failed_stage"] = m.failed_stage;
    j["error"] = m.error;
  }
  ojson log = ojson::array();
  for (const auto& r : m.log.requests) {
    log.push_back({{"stage", r.stage},
                   {"channel", r.channel},
                   {"image_id", r.image_id},
                   {"request_hash", r.request_hash},
                   {"prompt_sha256", r.prompt_sha256},
                   {"ok", r.ok},
                   {"response", r.response}});
  }
  j["request_log"] = std::move(log);
  ojson diags = ojson::array();
  for (const auto& d : m.log.diagnostics)
    diags.push_back({{"stage", d.stage}, {"message", d.message}});
  j["diagnostics"] = std::move(diags);
  if (include_timing) {
    j["timing"] = {{"started_at", m.started_at}, {"stage_ms", m.stage_millis}};
  }
  return j;
}

PipelineResult run_pipeline(const DocumentBundle& doc,
                            const PipelineConfig& cfg,
                            const PipelineClients& clients) {
  if (!clients.text) throw ContractError("run_pipeline: no text client");
  if (cfg.mode == PipelineMode::kTextPlusImages && !clients.vision) {
    throw ContractError("run_pipeline: t+img mode needs a vision client");
  }
  if (cfg.deplot_substitution && !clients.chart) {
    throw ContractError("run_pipeline: figure substitution needs a chart client");
  }

  PipelineResult result;
  RunManifest& m = result.manifest;
  m.paper_id = doc.paper_id;
  m.domain = cfg.domain;
  m.mode = cfg.mode;
  m.deplot_substitution = cfg.deplot_substitution;
  m.started_at = now_iso8601();
  m.model_identities["text"] = clients.text->identity();
  m.prompt_hashes["stage1"] = sha256_hex(cfg.stage1_template);
  if (cfg.mode == PipelineMode::kTextPlusImages) {
    m.model_identities["vision"] = clients.vision->identity();
    m.prompt_hashes["stage2"] = sha256_hex(cfg.stage2_template);
  }
  if (cfg.deplot_substitution) {
    m.model_identities["chart"] = clients.chart->identity();
    m.prompt_hashes["chart"] = sha256_hex(cfg.chart_prompt);
  }
  m.document_sha256 = sha256_hex(doc.latex_source);

  auto fail = [&](const std::string& stage, const std::string& what) {
    m.status = "failed";
    m.failed_stage = stage;
    m.error = what;
  };
  auto count_requests = [&] {
    m.text_requests = m.multimodal_requests = m.chart_requests = 0;
    for (const auto& r : m.log.requests) {
      if (r.channel == "text") ++m.text_requests;
      if (r.channel == "vision") ++m.multimodal_requests;
      if (r.channel == "chart") ++m.chart_requests;
    }
  };

  DocumentBundle working = doc;
  if (cfg.deplot_substitution) {
    StageTimer timer(m, "deplot");
    working = substitute_figures(doc, *clients.chart, cfg, &m.log);
    m.substituted_document_sha256 = sha256_hex(working.latex_source);
  }

  std::vector<SampleRecord> text_samples;
  try {
    StageTimer timer(m, "text");
    text_samples = extract_text_samples(working, *clients.text, cfg, &m.log);
  } catch (const StageError& e) {
    fail(e.stage(), e.what());
  } catch (const ContractError& e) {
    fail("text", e.what());
  }
  if (m.status != "ok") {
    count_requests();
    return result;
  }

  std::vector<std::vector<SampleRecord>> expansions;
  if (cfg.mode == PipelineMode::kTextPlusImages) {
    StageTimer timer(m, "image");
    const std::size_t k = doc.images.size();
    const std::size_t width = std::max<std::size_t>(1, cfg.max_concurrent_requests);
    std::vector<RunLog> logs(k);
    expansions.resize(k);
    std::vector<std::optional<StageError>> errors(k);
    for (std::size_t begin = 0; begin < k; begin += width) {
      const std::size_t end = std::min(k, begin + width);
      std::vector<std::future<void>> batch;
      for (std::size_t i = begin; i < end; ++i) {
        batch.push_back(std::async(std::launch::async, [&, i] {
          try {
            expansions[i] = expand_with_image(text_samples, doc.images[i],
                                              *clients.vision, cfg, &logs[i]);
          } catch (const StageError& e) {
            errors[i].emplace(e);
          }
        }));
      }
      for (auto& f : batch) f.get();
    }
    for (const auto& l : logs) m.log.append(l);
    for (const auto& e : errors) {
      if (e) {
        fail(e->stage(), e->what());
        break;
      }
    }
  }
  if (m.status != "ok") {
    count_requests();
    return result;
  }

  {
    StageTimer timer(m, "merge");
    PaperRecord record{doc.paper_id, cfg.domain,
                       merge(text_samples, expansions, cfg.dup_epsilon)};
    m.sample_count = record.samples.size();
    result.record = std::move(record);
  }
  count_requests();
  return result;
}

DocumentBundle load_document_bundle(const fs::path& dir) {
  DocumentBundle doc;
  doc.paper_id = dir.filename().string();
  std::vector<fs::path> tex, images;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const fs::path& p = entry.path();
    if (p.extension() == ".tex") {
      tex.push_back(p);
    } else if (!media_type_for(p).empty()) {
      images.push_back(p);
    }
  }
  if (tex.empty()) throw Error("no .tex file in " + dir.string());
  std::sort(tex.begin(), tex.end());
  std::sort(images.begin(), images.end());
  auto main = std::find_if(tex.begin(), tex.end(), [](const fs::path& p) {
    return p.filename() == "main.tex";
  });
  doc.latex_source = read_file(main != tex.end() ? *main : tex.front());
  for (const auto& p : images) {
    doc.images.push_back(
        {p.filename().string(), media_type_for(p), read_file(p)});
  }
  return doc;
}

}  // namespace mateval
