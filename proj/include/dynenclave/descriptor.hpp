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

#ifndef DYNENCLAVE_DESCRIPTOR_HPP_
#define DYNENCLAVE_DESCRIPTOR_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace dynenclave {

enum class ReturnKind : char { kWord = 'i', kVoid = 'v' };

// i: one 64-bit word. s: NUL-terminated string, passed as its address.
// b: byte buffer, passed as (address, length).
enum class ArgKind : char { kWord = 'i', kString = 's', kBuffer = 'b' };

inline constexpr std::size_t kMaxArgWords = 4;

// Parsed form of "ret(args)", e.g. "i(ii)" or "v(bi)".
class SignatureDescriptor {
 public:
  // Throws BadDescriptor on grammar errors or more than kMaxArgWords words.
  static SignatureDescriptor parse(std::string_view text);

  ReturnKind ret() const { return ret_; }
  const std::vector<ArgKind>& args() const { return args_; }
  std::size_t word_count() const;
  std::string str() const;

  // C return type published in address maps.
  std::string c_return_type() const { return ret_ == ReturnKind::kWord ? "int" : "void"; }

  friend bool operator==(const SignatureDescriptor&, const SignatureDescriptor&) = default;

 private:
  ReturnKind ret_ = ReturnKind::kVoid;
  std::vector<ArgKind> args_;
};

inline std::size_t arg_words(ArgKind k) { return k == ArgKind::kBuffer ? 2 : 1; }

}  // namespace dynenclave

#endif  // DYNENCLAVE_DESCRIPTOR_HPP_
