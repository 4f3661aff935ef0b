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

#include "mateval/model_client.hpp"

#include "json.hpp"
#include "mateval/hash.hpp"
#include "mateval/sample_io.hpp"

namespace mateval {

namespace {

std::optional<std::string> opt_string(const nlohmann::json& j,
                                      const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    throw SchemaError(std::string("transcript field '") + key +
                          "' must be a string",
                      key);
  }
  return it->get<std::string>();
}

}  // namespace

std::string request_hash(const std::string& prompt, const ImageAsset* image) {
  std::string material = image ? "multimodal" : "text";
  material.push_back('\0');
  material += prompt;
  if (image) {
    material.push_back('\0');
    material += sha256_hex(image->bytes);
  }
  return sha256_hex(material);
}

CallbackClient::CallbackClient(std::string identity, TextFn text,
                               ImageFn image)
    : identity_(std::move(identity)),
      text_(std::move(text)),
      image_(std::move(image)) {}

std::string CallbackClient::complete_text(const std::string& prompt) {
  if (!text_) throw UpstreamError(identity_ + ": text completion unsupported");
  return text_(prompt);
}

std::string CallbackClient::complete_multimodal(const std::string& prompt,
                                                const ImageAsset& image) {
  if (!image_) {
    throw UpstreamError(identity_ + ": multimodal completion unsupported");
  }
  return image_(prompt, image);
}

Transcript Transcript::parse(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("transcript: ") + e.what(), e.byte);
  }
  if (!j.is_object() || !j.contains("entries") || !j["entries"].is_array()) {
    throw SchemaError("transcript must be an object with an 'entries' list",
                      "entries");
  }
  Transcript t;
  if (const auto it = j.find("clients"); it != j.end() && it->is_object()) {
    for (const auto& [channel, cfg] : it->items()) {
      if (cfg.is_object() && cfg.contains("identity"))
        t.identities.emplace_back(channel, cfg["identity"].get<std::string>());
    }
  }
  for (const auto& e : j["entries"]) {
    if (!e.is_object()) {
      throw SchemaError("transcript entries must be objects", "entries");
    }
    TranscriptEntry entry;
    const auto channel = opt_string(e, "channel");
    if (!channel) throw SchemaError("transcript entry needs a channel", "channel");
    entry.channel = *channel;
    entry.request_hash = opt_string(e, "request_hash");
    entry.image_id = opt_string(e, "image_id");
    entry.paper_id = opt_string(e, "paper_id");
    entry.prompt_contains = opt_string(e, "prompt_contains");
    entry.response = opt_string(e, "response");
    entry.error = opt_string(e, "error");
    if (!entry.response && !entry.error) {
      throw SchemaError("transcript entry needs 'response' or 'error'",
                        "response");
    }
    t.entries.push_back(std::move(entry));
  }
  return t;
}

Transcript Transcript::load(const std::filesystem::path& path) {
  return parse(read_file(path));
}

std::string Transcript::identity_for(const std::string& channel) const {
  for (const auto& [c, id] : identities)
    if (c == channel) return id;
  return "scripted-" + channel;
}

TranscriptClient::TranscriptClient(std::shared_ptr<const Transcript> transcript,
                                   std::string channel, std::string paper_id)
    : transcript_(std::move(transcript)),
      channel_(std::move(channel)),
      paper_id_(std::move(paper_id)) {}

std::string TranscriptClient::complete_text(const std::string& prompt) {
  return respond(prompt, nullptr);
}

std::string TranscriptClient::complete_multimodal(const std::string& prompt,
                                                  const ImageAsset& image) {
  return respond(prompt, &image);
}

std::string TranscriptClient::identity() const {
  return transcript_->identity_for(channel_);
}

std::string TranscriptClient::respond(const std::string& prompt,
                                      const ImageAsset* image) {
  const std::string hash = request_hash(prompt, image);
  for (const auto& e : transcript_->entries) {
    if (e.channel != channel_) continue;
    if (e.request_hash && *e.request_hash != hash) continue;
    if (e.image_id && (!image || *e.image_id != image->image_id)) continue;
    if (e.paper_id && *e.paper_id != paper_id_) continue;
    if (e.prompt_contains &&
        prompt.find(*e.prompt_contains) == std::string::npos)
      continue;
    if (e.error) throw UpstreamError(channel_ + ": " + *e.error);
    return *e.response;
  }
  throw UpstreamError(channel_ + ": no scripted response for request " +
                      hash.substr(0, 12) +
                      (image ? " (image " + image->image_id + ")" : ""));
}

}  // namespace mateval
