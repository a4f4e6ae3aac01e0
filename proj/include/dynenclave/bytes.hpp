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

#ifndef DYNENCLAVE_BYTES_HPP_
#define DYNENCLAVE_BYTES_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dynenclave/error.hpp"

namespace dynenclave {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

inline Bytes to_bytes(std::string_view s) { return Bytes(s.begin(), s.end()); }
inline std::string to_string(ByteView b) { return std::string(b.begin(), b.end()); }

// Plain lowercase hex, no separators ("55489e..."). Used for keys and
// digests; the loader's "\xNN" format lives in hexstring.hpp.
std::string to_hex(ByteView bytes);
Bytes from_hex(std::string_view hex);

// Big-endian writer for the length-prefixed wire encodings.
class ByteWriter {
 public:
  ByteWriter& u8(std::uint8_t v);
  ByteWriter& u32(std::uint32_t v);
  ByteWriter& u64(std::uint64_t v);
  ByteWriter& raw(ByteView v);
  // u32 length followed by the bytes.
  ByteWriter& field(ByteView v);
  ByteWriter& field(std::string_view v);

  const Bytes& bytes() const& { return out_; }
  Bytes take() { return std::move(out_); }

 private:
  Bytes out_;
};

// Bounds-checked reader; every short read throws with the supplied code.
class ByteReader {
 public:
  explicit ByteReader(ByteView in, ErrorCode on_short = ErrorCode::kBadRequest)
      : in_(in), on_short_(on_short) {}

  std::uint8_t u8();
  std::uint32_t u32();
  std::uint64_t u64();
  ByteView raw(std::size_t n);
  ByteView field();
  std::string field_string();

  std::size_t remaining() const { return in_.size() - pos_; }
  bool done() const { return pos_ == in_.size(); }
  // Throws unless every byte was consumed.
  void expect_done() const;

 private:
  void need(std::size_t n) const;

  ByteView in_;
  std::size_t pos_ = 0;
  ErrorCode on_short_;
};

}  // namespace dynenclave

#endif  // DYNENCLAVE_BYTES_HPP_
