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

#include <atomic>
#include <cstdlib>
#include <mutex>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "mateval/hash.hpp"
#include "mateval/http_client.hpp"
#include "mateval/pipeline.hpp"
#include "mateval/sample_io.hpp"

using namespace mateval;

namespace {

const char* kTwoSamples = R"j(Sure! I found two samples in the article.

Sample 1:
{"Matrix Component": "Epoxy", "Filler Chemical Name": "Barium titanate",
 "Filler Mass": "5", "Properties": []}

And the second one, in a code block:
```json
{"Matrix Component": "Epoxy", "Filler Chemical Name": "Barium titanate",
 "Filler Mass": "10%", "Properties": []}
```
Let me know if you need anything else.)j";

const char* kThermalForSample0 = R"j([
{"Matrix Component": "epoxy", "Filler Chemical Name": "barium titanate",
 "Filler Mass": "5%",
 "Properties": [{"property name": "thermal",
                 "headers": ["temperature", "conductivity"],
                 "data": [(25, 0.2), (50, 0.3)]}]}])j";

CompositionPNC comp(Field matrix, Field filler, Field mass) {
  CompositionPNC c;
  c.matrix_component = std::move(matrix);
  c.filler_chemical_name = std::move(filler);
  c.filler_mass = std::move(mass);
  return c;
}

std::vector<SampleRecord> two_samples() {
  return {{comp("epoxy", "barium titanate", "5%"), {}},
          {comp("epoxy", "barium titanate", "10%"), {}}};
}

Curve thermal(PointSeq p) {
  return {PropertyCategory::kThermal, "temperature", "conductivity", std::move(p)};
}

DocumentBundle doc_with_images(std::size_t k) {
  DocumentBundle d{"paper", "\\section{Results} Epoxy with BaTiO3.", {}};
  for (std::size_t i = 0; i < k; ++i)
    d.images.push_back({"fig" + std::to_string(i) + ".png", "image/png",
                        "bytes" + std::to_string(i)});
  return d;
}

using Expansions = std::vector<std::vector<SampleRecord>>;

// Counts calls; never fails.
struct Counter {
  std::atomic<int> text{0};
  std::atomic<int> image{0};
};

}  // namespace

TEST_CASE("recover_json_values") {
  RunLog log;
  auto values = recover_json_values("no json here", &log, "t");
  CHECK(values.empty());
  values = recover_json_values(R"j(a {"k": "}{"} b [1, 2] c {bad} d)j", &log, "t");
  REQUIRE(values.size() == 2);
  CHECK(values[0]["k"] == "}{");
  CHECK(values[1] == nlohmann::json::array({1, 2}));
  CHECK(log.diagnostics.size() == 1);
  values = recover_json_values(R"j({"data": [(1, 2), (3, None)],})j", &log, "t");
  REQUIRE(values.size() == 1);
  CHECK(values[0]["data"][0] == nlohmann::json::array({1, 2}));
  CHECK(values[0]["data"][1][1].is_null());
}

TEST_CASE("samples wrapped in prose are recovered") {
  RunLog log;
  const auto samples = recover_samples(kTwoSamples, Domain::kPNC, &log, "text");
  REQUIRE(samples.size() == 2);
  CHECK(samples[0] == two_samples()[0]);
  CHECK(samples[1] == two_samples()[1]);
  const auto wrapped = recover_samples(
      R"j({"samples": [{"Matrix Component": "pla"}, {"Matrix Component": "pbs"}]})j",
      Domain::kPNC);
  CHECK(wrapped.size() == 2);
}

TEST_CASE("extract_text_samples") {
  const PipelineConfig cfg = PipelineConfig::defaults(Domain::kPNC);
  std::string seen;
  CallbackClient client("mock", [&](const std::string& p) {
    seen = p;
    return std::string(kTwoSamples);
  });
  RunLog log;
  const auto samples = extract_text_samples(doc_with_images(0), client, cfg, &log);
  CHECK(samples.size() == 2);
  CHECK(seen.find("Epoxy with BaTiO3") != std::string::npos);
  CHECK(seen.find("\"Filler Mass\"") != std::string::npos);
  CHECK(seen.find("{{") == std::string::npos);
  REQUIRE(log.requests.size() == 1);
  CHECK(log.requests[0].request_hash == request_hash(seen));

  CallbackClient nothing("mock", [](const std::string&) {
    return std::string("The article does not describe any material samples.");
  });
  CHECK(extract_text_samples(doc_with_images(0), nothing, cfg).empty());

  CallbackClient down("mock", [](const std::string&) -> std::string {
    throw UpstreamError("HTTP 503");
  });
  try {
    extract_text_samples(doc_with_images(0), down, cfg);
    FAIL("expected StageError");
  } catch (const StageError& e) {
    CHECK(e.stage() == "text");
  }
  CHECK_THROWS_AS(extract_text_samples(DocumentBundle{}, nothing, cfg),
                  ContractError);
}

TEST_CASE("single epoxy sample in model response shape") {
  const char* response = R"j(```json
{
  "Matrix Component": "Epoxy resin",
  "Matrix Abbreviation": "EP",
  "Filler Chemical Name": "null",
  "Filler Abbreviation": "null",
  "Filler PST": "null",
  "Filler Mass": "null",
  "Filler Volume": "null",
  "Properties": "null"
}
```)j";
  CallbackClient client("mock", [&](const std::string&) { return std::string(response); });
  const auto samples = extract_text_samples(
      doc_with_images(0), client, PipelineConfig::defaults(Domain::kPNC));
  REQUIRE(samples.size() == 1);
  const auto& c = std::get<CompositionPNC>(samples[0].composition);
  CHECK(c.matrix_component == "epoxy resin");
  CHECK(c.matrix_abbreviation == "ep");
  CHECK(present_field_count(samples[0].composition) == 2);
  CHECK(samples[0].properties.empty());
}

TEST_CASE("expand_with_image") {
  const PipelineConfig cfg = PipelineConfig::defaults(Domain::kPNC);
  const ImageAsset img{"fig1.png", "image/png", "png"};
  int calls = 0;
  std::string prompt;
  CallbackClient vlm("vlm", nullptr,
                     [&](const std::string& p, const ImageAsset&) {
                       ++calls;
                       prompt = p;
                       return std::string(kThermalForSample0);
                     });
  RunLog log;
  const auto none = expand_with_image({}, img, vlm, cfg, &log);
  CHECK(calls == 1);
  CHECK(none.empty());
  CHECK_FALSE(log.diagnostics.empty());

  const auto in = two_samples();
  const auto out = expand_with_image(in, img, vlm, cfg);
  REQUIRE(out.size() == 2);
  REQUIRE(out[0].properties.size() == 1);
  CHECK(out[0].properties[0] == thermal({{25, 0.2}, {50, 0.3}}));
  CHECK(out[1] == in[1]);
  CHECK(prompt.find("\"Filler Mass\": \"10%\"") != std::string::npos);

  CallbackClient stranger("vlm", nullptr, [](const std::string&, const ImageAsset&) {
    return std::string(R"j({"Matrix Component": "polystyrene",
        "Properties": [{"property name": "thermal", "headers": ["t", "k"],
                        "data": [[1, 2]]}]})j");
  });
  RunLog log2;
  CHECK(expand_with_image(in, img, stranger, cfg, &log2) == in);
  CHECK(log2.diagnostics.size() == 1);
}

TEST_CASE("image expansion carries permittivity against temperature") {
  const PipelineConfig cfg = PipelineConfig::defaults(Domain::kPNC);
  const std::vector<SampleRecord> in{{comp("epoxy", "batio3", "30%"), {}}};
  CallbackClient vlm("vlm", nullptr, [](const std::string&, const ImageAsset&) {
    return std::string(R"j({"Matrix Component": "Epoxy",
        "Filler Chemical Name": "BaTiO3", "Filler Mass": "30 %",
        "Properties": [
          {"property name": "electrical",
           "headers": ["Temperature (°C)", "Dielectric permittivity"],
           "data": [(20, 12.1), (60, 12.9), (100, 14.2)]},
          {"property name": "electrical",
           "headers": ["Temperature (°C)", "Loss tangent"],
           "data": [(20, 0.011), (60, 0.014), (100, 0.022)]}]})j");
  });
  const auto out = expand_with_image(in, {"f.png", "image/png", "x"}, vlm, cfg);
  REQUIRE(out[0].properties.size() == 2);
  CHECK(out[0].properties[0].category == PropertyCategory::kElectrical);
  CHECK(out[0].properties[0].x_header == "temperature (°c)");
  CHECK(out[0].properties[0].y_header == "dielectric permittivity");
}

TEST_CASE("merge") {
  const auto text = two_samples();
  CHECK(merge(text, {}) == text);

  auto e1 = text, e2 = text;
  e1[0].properties = {thermal({{0, 1}, {1, 2}})};
  e2[0].properties = {thermal({{0, 1}, {1, 2}})};
  auto merged = merge(text, Expansions{e1, e2});
  CHECK(merged[0].properties.size() == 1);

  Curve mech{PropertyCategory::kMechanical, "strain", "stress", {{0, 0}, {1, 5}}};
  e1[0].properties = {mech};
  e2[0].properties = {thermal({{0, 1}})};
  auto e3 = text;
  e3[0].properties = {thermal({{0, 7}})};
  merged = merge(text, Expansions{e1, e2, e3});
  REQUIRE(merged[0].properties.size() == 3);
  CHECK(merged[0].properties[0] == thermal({{0, 1}}));
  CHECK(merged[0].properties[1] == thermal({{0, 7}}));
  CHECK(merged[0].properties[2] == mech);
  CHECK(merged[1].properties.empty());

  // Text curves come before image curves of the same category.
  auto with_text = text;
  with_text[0].properties = {thermal({{5, 5}})};
  merged = merge(with_text, Expansions{e2});
  REQUIRE(merged[0].properties.size() == 2);
  CHECK(merged[0].properties[0] == thermal({{5, 5}}));

  // Of two duplicates the one with more points is kept.
  e1[0].properties = {thermal({{0, 1}})};
  e2[0].properties = {thermal({{0, 1}, {0, 1}})};
  merged = merge(text, Expansions{e1, e2});
  REQUIRE(merged[0].properties.size() == 1);
  CHECK(merged[0].properties[0].points.size() == 2);
}

TEST_CASE("substitute_figures") {
  const PipelineConfig cfg = PipelineConfig::defaults(Domain::kPNC);
  DocumentBundle doc{"p", "No figures at all.", {}};
  CallbackClient chart("deplot", nullptr, [](const std::string&, const ImageAsset&) {
    return std::string("x | y\n0 | 1\n");
  });
  CHECK(substitute_figures(doc, chart, cfg).latex_source == doc.latex_source);

  doc.latex_source =
      "Before\n\\includegraphics[width=0.5\\textwidth]{figs/fig1.png}\nAfter";
  doc.images = {{"fig1.png", "image/png", "a"}, {"fig2.png", "image/png", "b"}};
  RunLog log;
  auto out = substitute_figures(doc, chart, cfg, &log);
  CHECK(out.latex_source == "Before\n```table fig1.png\nx | y\n0 | 1\n```\nAfter");
  CHECK(log.requests.size() == 1);

  doc.latex_source = "A \\includegraphics{fig1} B \\includegraphics{fig2.png} C";
  CallbackClient flaky("deplot", nullptr,
                       [](const std::string&, const ImageAsset& img) -> std::string {
                         if (img.image_id == "fig2.png") throw UpstreamError("timeout");
                         return "x | y\n0 | 1";
                       });
  RunLog log2;
  out = substitute_figures(doc, flaky, cfg, &log2);
  CHECK(out.latex_source ==
        "A ```table fig1.png\nx | y\n0 | 1\n``` B \\includegraphics{fig2.png} C");
  CHECK(log2.diagnostics.size() == 1);

  doc.latex_source = "\\includegraphics{missing.png}";
  CHECK(substitute_figures(doc, chart, cfg).latex_source == doc.latex_source);
}

TEST_CASE("run_pipeline request accounting") {
  Counter n;
  CallbackClient llm("llm-1", [&](const std::string&) {
    ++n.text;
    return std::string(kTwoSamples);
  });
  CallbackClient vlm("vlm-1", nullptr, [&](const std::string&, const ImageAsset&) {
    ++n.image;
    return std::string(kThermalForSample0);
  });
  PipelineConfig cfg = PipelineConfig::defaults(Domain::kPNC);
  const DocumentBundle doc = doc_with_images(3);

  auto r = run_pipeline(doc, cfg, {&llm, &vlm, nullptr});
  REQUIRE(r.record);
  CHECK(n.image == 0);
  CHECK(r.manifest.multimodal_requests == 0);
  CHECK(r.record->samples == two_samples());

  cfg.mode = PipelineMode::kTextPlusImages;
  r = run_pipeline(doc, cfg, {&llm, &vlm, nullptr});
  REQUIRE(r.record);
  CHECK(n.image == 3);
  CHECK(r.manifest.multimodal_requests == 3);
  CHECK(r.manifest.text_requests == 1);
  CHECK(r.record->samples[0].properties.size() == 1);
  CHECK(r.manifest.model_identities.at("vision") == "vlm-1");

  CHECK_THROWS_AS(run_pipeline(doc, cfg, {&llm, nullptr, nullptr}), ContractError);
  cfg.deplot_substitution = true;
  CHECK_THROWS_AS(run_pipeline(doc, cfg, {&llm, &vlm, nullptr}), ContractError);
}

TEST_CASE("run_pipeline is deterministic and records failures") {
  PipelineConfig cfg = PipelineConfig::defaults(Domain::kPNC);
  cfg.mode = PipelineMode::kTextPlusImages;
  cfg.deplot_substitution = true;
  DocumentBundle doc = doc_with_images(4);
  doc.latex_source += "\n\\includegraphics{fig1.png}\n";
  CallbackClient llm("llm", [](const std::string&) { return std::string(kTwoSamples); });
  CallbackClient vlm("vlm", nullptr, [](const std::string&, const ImageAsset& img) {
    if (img.image_id == "fig2.png") return std::string("nothing relevant");
    return std::string(kThermalForSample0);
  });
  CallbackClient chart("chart", nullptr, [](const std::string&, const ImageAsset&) {
    return std::string("T | k\n25 | 0.2");
  });
  std::string first;
  for (int i = 0; i < 3; ++i) {
    const auto r = run_pipeline(doc, cfg, {&llm, &vlm, &chart});
    const std::string m = manifest_to_json(r.manifest, false).dump();
    if (i == 0) first = m;
    CHECK(m == first);
    CHECK(r.manifest.chart_requests == 1);
    CHECK(r.manifest.substituted_document_sha256 != r.manifest.document_sha256);
  }
  CHECK(manifest_to_json(run_pipeline(doc, cfg, {&llm, &vlm, &chart}).manifest)
            .contains("timing"));

  CallbackClient vlm_down("vlm", nullptr,
                          [](const std::string&, const ImageAsset&) -> std::string {
                            throw UpstreamError("quota exceeded");
                          });
  const auto failed = run_pipeline(doc, cfg, {&llm, &vlm_down, &chart});
  CHECK_FALSE(failed.record);
  CHECK(failed.manifest.status == "failed");
  CHECK(failed.manifest.failed_stage == "image:fig0.png");
}

TEST_CASE("transcript replay") {
  const auto t = std::make_shared<const Transcript>(Transcript::parse(R"j({
    "clients": {"text": {"identity": "llm-2024"}},
    "entries": [
      {"channel": "text", "paper_id": "p2", "response": "[]"},
      {"channel": "text", "response": "default"},
      {"channel": "vision", "image_id": "fig1.png", "response": "one"},
      {"channel": "vision", "prompt_contains": "needle", "response": "two"},
      {"channel": "chart", "error": "unavailable"}]})j"));
  TranscriptClient text1(t, "text", "p1"), text2(t, "text", "p2");
  CHECK(text1.complete_text("x") == "default");
  CHECK(text2.complete_text("x") == "[]");
  CHECK(text1.identity() == "llm-2024");
  TranscriptClient vision(t, "vision");
  CHECK(vision.identity() == "scripted-vision");
  const ImageAsset f1{"fig1.png", "image/png", "a"}, f2{"fig2.png", "image/png", "b"};
  CHECK(vision.complete_multimodal("p", f1) == "one");
  CHECK(vision.complete_multimodal("a needle", f2) == "two");
  CHECK_THROWS_AS(vision.complete_multimodal("p", f2), UpstreamError);
  TranscriptClient chart(t, "chart");
  CHECK_THROWS_AS(chart.complete_multimodal("p", f1), UpstreamError);
  CHECK_THROWS_AS(Transcript::parse("{"), ParseError);
  CHECK_THROWS_AS(Transcript::parse(R"j({"entries": [{"channel": "text"}]})j"),
                  SchemaError);
}

TEST_CASE("request_hash") {
  const ImageAsset a{"a", "image/png", "1"}, b{"a", "image/png", "2"};
  CHECK(request_hash("p") == request_hash("p"));
  CHECK(request_hash("p") != request_hash("q"));
  CHECK(request_hash("p", &a) != request_hash("p", &b));
  CHECK(request_hash("p", &a) != request_hash("p"));
  CHECK(sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(base64_encode("hello") == "aGVsbG8=");
}

TEST_CASE("load_document_bundle") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "mateval_bundle" / "paper7";
  fs::remove_all(dir.parent_path());
  write_file(dir / "appendix.tex", "appendix");
  write_file(dir / "main.tex", "main body");
  write_file(dir / "b.png", "B");
  write_file(dir / "a.JPG", "A");
  write_file(dir / "notes.txt", "skip");
  const DocumentBundle d = load_document_bundle(dir);
  CHECK(d.paper_id == "paper7");
  CHECK(d.latex_source == "main body");
  REQUIRE(d.images.size() == 2);
  CHECK(d.images[0].image_id == "a.JPG");
  CHECK(d.images[0].media_type == "image/jpeg");
  CHECK(d.images[1].bytes == "B");
  fs::remove_all(dir.parent_path());
}

TEST_CASE("HTTP chat client") {
  httplib::Server server;
  std::mutex mu;
  std::vector<nlohmann::json> bodies;
  std::vector<std::string> auth;
  std::atomic<int> failures_left{1};
  server.Post("/v1/chat/completions", [&](const httplib::Request& req,
                                          httplib::Response& res) {
    {
      std::lock_guard<std::mutex> lock(mu);
      bodies.push_back(nlohmann::json::parse(req.body));
      auth.push_back(req.get_header_value("Authorization"));
    }
    if (failures_left-- > 0) {
      res.status = 503;
      return;
    }
    res.set_content(R"j({"choices": [{"message": {"content": "hello"}}]})j",
                    "application/json");
  });
  server.Post("/bad", [](const httplib::Request&, httplib::Response& res) {
    res.status = 400;
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread th([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  ::setenv("MATEVAL_TEST_KEY", "secret", 1);
  HttpClientConfig cfg;
  cfg.base_url = "http://127.0.0.1:" + std::to_string(port);
  cfg.model = "test-model";
  cfg.api_key_env = "MATEVAL_TEST_KEY";
  cfg.retry_backoff_ms = 1;
  HttpChatClient client(cfg);
  CHECK(client.complete_text("hi") == "hello");
  CHECK(client.identity() == "test-model");
  CHECK(client.complete_multimodal("look", {"f.png", "image/png", "hello"}) == "hello");
  {
    std::lock_guard<std::mutex> lock(mu);
    REQUIRE(bodies.size() == 3);
    CHECK(bodies[0]["model"] == "test-model");
    CHECK(bodies[0]["temperature"] == 0);
    CHECK(bodies[1]["messages"][0]["content"] == "hi");
    CHECK(bodies[2]["messages"][0]["content"][1]["image_url"]["url"] ==
          "data:image/png;base64,aGVsbG8=");
    CHECK(auth[0] == "Bearer secret");
  }

  HttpClientConfig bad = cfg;
  bad.path = "/bad";
  CHECK_THROWS_AS(HttpChatClient(bad).complete_text("x"), UpstreamError);
  HttpClientConfig closed = cfg;
  closed.base_url = "http://127.0.0.1:1";
  closed.max_retries = 0;
  CHECK_THROWS_AS(HttpChatClient(closed).complete_text("x"), UpstreamError);
  HttpClientConfig nokey = cfg;
  nokey.api_key_env = "MATEVAL_TEST_KEY_UNSET";
  CHECK_THROWS_AS(HttpChatClient{nokey}, ContractError);

  server.stop();
  th.join();

  CHECK_THROWS_AS(parse_chat_response("{}"), UpstreamError);
  CHECK(parse_chat_response(
            R"j({"choices": [{"message": {"content": [{"type": "text", "text": "a"},
                {"type": "text", "text": "b"}]}}]})j") == "ab");
  const auto configs = parse_client_configs(nlohmann::json::parse(
      R"j({"text": {"base_url": "http://x", "model": "m", "max_retries": 5}})j"));
  CHECK(configs.at("text").max_retries == 5);
  CHECK(configs.at("text").path == "/v1/chat/completions");
  CHECK_THROWS_AS(parse_client_configs(nlohmann::json::parse(R"j({"text": {}})j")),
                  SchemaError);
}
