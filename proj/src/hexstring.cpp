// Copyright 2026 The dynenclave Authors
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

#include "dynenclave/hexstring.hpp"

namespace dynenclave {

namespace {

int lower_hex(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

}  // namespace

std::string to_hexstring(ByteView bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 4);
  for (std::uint8_t b : bytes) {
    out += "\\x";
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0f]);
  }
  return out;
}

Bytes from_hexstring(std::string_view text) {
  if (text.size() % 4 != 0)
    fail(ErrorCode::kBadHexstring, "hexstring length is not a multiple of 4");
  Bytes out;
  out.reserve(text.size() / 4);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    int hi = lower_hex(text[i + 2]);
    int lo = lower_hex(text[i + 3]);
    if (text[i] != '\\' || text[i + 1] != 'x' || hi < 0 || lo < 0)
      fail(ErrorCode::kBadHexstring,
           "bad token '" + std::string(text.substr(i, 4)) + "' at offset " + std::to_string(i));
    out.push_back(static_cast<std::uint8_t>(hi << 4 | lo));
  }
  return out;
}

}  // namespace dynenclave
