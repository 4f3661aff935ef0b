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

// Client abstraction over external text and vision model services, plus
// in-process implementations for tests and transcript replay.

#ifndef MATEVAL_MODEL_CLIENT_HPP_
#define MATEVAL_MODEL_CLIENT_HPP_

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mateval/model.hpp"

namespace mateval {

// Transport failure or an error reported by the remote service.
class UpstreamError : public Error {
 public:
  using Error::Error;
};

// Implementations must be safe to call from several threads at once.
class ModelClient {
 public:
  virtual ~ModelClient() = default;

  virtual std::string complete_text(const std::string& prompt) = 0;
  virtual std::string complete_multimodal(const std::string& prompt,
                                          const ImageAsset& image) = 0;
  // Model name and version, recorded in run manifests.
  virtual std::string identity() const = 0;
};

// Stable id of a request: SHA-256 over the kind, the prompt and, for
// multimodal requests, the image bytes.
std::string request_hash(const std::string& prompt,
                         const ImageAsset* image = nullptr);

// Forwards to caller-supplied functions. Unset functions throw
// UpstreamError.
class CallbackClient : public ModelClient {
 public:
  using TextFn = std::function<std::string(const std::string&)>;
  using ImageFn =
      std::function<std::string(const std::string&, const ImageAsset&)>;

  CallbackClient(std::string identity, TextFn text, ImageFn image = nullptr);

  std::string complete_text(const std::string& prompt) override;
  std::string complete_multimodal(const std::string& prompt,
                                  const ImageAsset& image) override;
  std::string identity() const override { return identity_; }

 private:
  std::string identity_;
  TextFn text_;
  ImageFn image_;
};

// Scripted responses loaded from a transcript file:
//
//   {"clients": {"text": {"identity": "..."}, ...},
//    "entries": [{"channel": "text", "response": "..."},
//                {"channel": "vision", "image_id": "fig1.png",
//                 "prompt_contains": "...", "response": "..."},
//                {"channel": "chart", "image_id": "fig2.png",
//                 "error": "service unavailable"}]}
//
// A request matches an entry when the channel agrees and every optional
// selector present on the entry (request_hash, image_id, paper_id,
// prompt_contains) agrees. "paper_id" matches the paper the client was
// scoped to. Text requests never match an entry that names an image_id. The first
// matching entry wins; "error" entries throw UpstreamError, and so does a
// request with no match.
struct TranscriptEntry {
  std::string channel;
  std::optional<std::string> request_hash;
  std::optional<std::string> image_id;
  std::optional<std::string> paper_id;
  std::optional<std::string> prompt_contains;
  std::optional<std::string> response;
  std::optional<std::string> error;
};

struct Transcript {
  std::vector<TranscriptEntry> entries;
  // channel -> identity
  std::vector<std::pair<std::string, std::string>> identities;

  static Transcript load(const std::filesystem::path& path);
  static Transcript parse(const std::string& text);
  std::string identity_for(const std::string& channel) const;
};

class TranscriptClient : public ModelClient {
 public:
  TranscriptClient(std::shared_ptr<const Transcript> transcript,
                   std::string channel, std::string paper_id = "");

  std::string complete_text(const std::string& prompt) override;
  std::string complete_multimodal(const std::string& prompt,
                                  const ImageAsset& image) override;
  std::string identity() const override;

 private:
  std::string respond(const std::string& prompt, const ImageAsset* image);

  std::shared_ptr<const Transcript> transcript_;
  std::string channel_;
  std::string paper_id_;
};

}  // namespace mateval

#endif  // MATEVAL_MODEL_CLIENT_HPP_
