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

#include "mateval/http_client.hpp"

#include <chrono>
#include <cstdlib>
#include <thread>

#include "httplib.h"
#include "mateval/hash.hpp"
#include "mateval/sample_io.hpp"

namespace mateval {

namespace {

template <typename T>
void read_opt(const nlohmann::json& j, const char* key, T& out) {
  if (const auto it = j.find(key); it != j.end() && !it->is_null())
    out = it->get<T>();
}

bool retryable(int status) { return status == 429 || status >= 500; }

}  // namespace

std::map<std::string, HttpClientConfig> parse_client_configs(
    const nlohmann::json& j) {
  if (!j.is_object()) {
    throw SchemaError("clients config must be a JSON object", "");
  }
  std::map<std::string, HttpClientConfig> out;
  try {
    for (const auto& [channel, c] : j.items()) {
      HttpClientConfig cfg;
      cfg.base_url = c.at("base_url").get<std::string>();
      cfg.model = c.at("model").get<std::string>();
      read_opt(c, "path", cfg.path);
      read_opt(c, "api_key_env", cfg.api_key_env);
      read_opt(c, "timeout_seconds", cfg.timeout_seconds);
      read_opt(c, "max_retries", cfg.max_retries);
      read_opt(c, "retry_backoff_ms", cfg.retry_backoff_ms);
      out[channel] = std::move(cfg);
    }
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed clients config: ") + e.what(),
                      "clients");
  }
  return out;
}

std::map<std::string, HttpClientConfig> load_client_configs(
    const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return parse_client_configs(nlohmann::json::parse(text));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what(), e.byte);
  }
}

nlohmann::json build_chat_request(const HttpClientConfig& cfg,
                                  const std::string& prompt,
                                  const ImageAsset* image) {
  nlohmann::json message = {{"role", "user"}};
  if (image) {
    const std::string url = "data:" + image->media_type + ";base64," +
                            base64_encode(image->bytes);
    message["content"] = nlohmann::json::array(
        {{{"type", "text"}, {"text", prompt}},
         {{"type", "image_url"}, {"image_url", {{"url", url}}}}});
  } else {
    message["content"] = prompt;
  }
  return {{"model", cfg.model},
          {"temperature", 0},
          {"messages", nlohmann::json::array({message})}};
}

std::string parse_chat_response(const std::string& body) {
  try {
    const auto j = nlohmann::json::parse(body);
    const auto& content = j.at("choices").at(0).at("message").at("content");
    if (content.is_string()) return content.get<std::string>();
    // Some services return content as a list of text parts.
    std::string out;
    for (const auto& part : content)
      if (part.value("type", "") == "text") out += part.value("text", "");
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw UpstreamError(std::string("unexpected completion response: ") +
                        e.what());
  }
}

HttpChatClient::HttpChatClient(HttpClientConfig cfg) : cfg_(std::move(cfg)) {
  if (!cfg_.api_key_env.empty()) {
    const char* key = std::getenv(cfg_.api_key_env.c_str());
    if (!key || !*key) {
      throw ContractError("credential variable " + cfg_.api_key_env +
                          " is not set");
    }
    api_key_ = key;
  }
}

std::string HttpChatClient::complete_text(const std::string& prompt) {
  return post(build_chat_request(cfg_, prompt, nullptr));
}

std::string HttpChatClient::complete_multimodal(const std::string& prompt,
                                                const ImageAsset& image) {
  return post(build_chat_request(cfg_, prompt, &image));
}

std::string HttpChatClient::post(const nlohmann::json& body) {
  // One connection per request keeps the client safe for concurrent use.
  const std::string payload = body.dump();
  std::string last_error;
  for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(
          std::chrono::milliseconds(cfg_.retry_backoff_ms << (attempt - 1)));
    }
    httplib::Client http(cfg_.base_url);
    http.set_connection_timeout(cfg_.timeout_seconds, 0);
    http.set_read_timeout(cfg_.timeout_seconds, 0);
    http.set_write_timeout(cfg_.timeout_seconds, 0);
    httplib::Headers headers;
    if (!api_key_.empty()) {
      headers.emplace("Authorization", "Bearer " + api_key_);
    }
    const auto res = http.Post(cfg_.path, headers, payload, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 200) return parse_chat_response(res->body);
    last_error = "HTTP " + std::to_string(res->status);
    if (!retryable(res->status)) break;
  }
  throw UpstreamError(cfg_.model + " at " + cfg_.base_url + ": " + last_error);
}

}  // namespace mateval
