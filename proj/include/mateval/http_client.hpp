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

// HTTP client for chat-completion style model services.
//
// Requests are POSTed as
//
//   {"model": M, "temperature": 0,
//    "messages": [{"role": "user", "content": PROMPT}]}
//
// and multimodal requests send the content as a list of a text part and an
// image_url part holding a base64 data URL. The reply text is read from
// choices[0].message.content.

#ifndef MATEVAL_HTTP_CLIENT_HPP_
#define MATEVAL_HTTP_CLIENT_HPP_

#include <filesystem>
#include <map>
#include <string>

#include "json.hpp"
#include "mateval/model_client.hpp"

namespace mateval {

struct HttpClientConfig {
  std::string base_url;  // scheme://host[:port]
  std::string path = "/v1/chat/completions";
  std::string model;
  std::string api_key_env;  // empty: no Authorization header
  int timeout_seconds = 120;
  int max_retries = 3;
  int retry_backoff_ms = 1000;
};

// clients config file: {"text": {...}, "vision": {...}, "chart": {...}},
// each object holding the HttpClientConfig fields by name.
std::map<std::string, HttpClientConfig> load_client_configs(
    const std::filesystem::path& path);
std::map<std::string, HttpClientConfig> parse_client_configs(
    const nlohmann::json& j);

nlohmann::json build_chat_request(const HttpClientConfig& cfg,
                                  const std::string& prompt,
                                  const ImageAsset* image);

// Throws UpstreamError when the body has no message content.
std::string parse_chat_response(const std::string& body);

class HttpChatClient : public ModelClient {
 public:
  // Reads the credential from the environment. Throws ContractError when
  // api_key_env is set but the variable is not.
  explicit HttpChatClient(HttpClientConfig cfg);

  std::string complete_text(const std::string& prompt) override;
  std::string complete_multimodal(const std::string& prompt,
                                  const ImageAsset& image) override;
  std::string identity() const override { return cfg_.model; }

 private:
  std::string post(const nlohmann::json& body);

  HttpClientConfig cfg_;
  std::string api_key_;
};

}  // namespace mateval

#endif  // MATEVAL_HTTP_CLIENT_HPP_
