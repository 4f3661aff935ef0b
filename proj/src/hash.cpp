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

#include "mateval/hash.hpp"

#include <openssl/evp.h>
#include <openssl/sha.h>

#include <vector>

namespace mateval {

std::string sha256_hex(std::string_view data) {
  unsigned char digest[SHA256_DIGEST_LENGTH];
  SHA256(reinterpret_cast<const unsigned char*>(data.data()), data.size(),
         digest);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * SHA256_DIGEST_LENGTH);
  for (unsigned char b : digest) {
    out.push_back(kHex[b >> 4]);
    out.push_back(kHex[b & 0xF]);
  }
  return out;
}

std::string base64_encode(std::string_view data) {
  if (data.empty()) return {};
  std::vector<unsigned char> buf(4 * ((data.size() + 2) / 3) + 1);
  const int n = EVP_EncodeBlock(
      buf.data(), reinterpret_cast<const unsigned char*>(data.data()),
      static_cast<int>(data.size()));
  return std::string(reinterpret_cast<const char*>(buf.data()),
                     static_cast<std::size_t>(n));
}

}  // namespace mateval
