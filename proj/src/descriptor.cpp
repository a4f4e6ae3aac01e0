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

#include "dynenclave/descriptor.hpp"

#include "dynenclave/error.hpp"

namespace dynenclave {

SignatureDescriptor SignatureDescriptor::parse(std::string_view text) {
  auto bad = [&](const char* why) -> void {
    fail(ErrorCode::kBadDescriptor,
         "bad descriptor '" + std::string(text) + "': " + why);
  };
  if (text.size() < 3 || text[1] != '(' || text.back() != ')')
    bad("expected ret(args)");

  SignatureDescriptor d;
  switch (text[0]) {
    case 'i': d.ret_ = ReturnKind::kWord; break;
    case 'v': d.ret_ = ReturnKind::kVoid; break;
    default: bad("return kind must be i or v");
  }
  for (char c : text.substr(2, text.size() - 3)) {
    switch (c) {
      case 'i': d.args_.push_back(ArgKind::kWord); break;
      case 's': d.args_.push_back(ArgKind::kString); break;
      case 'b': d.args_.push_back(ArgKind::kBuffer); break;
      default: bad("argument kinds must be i, s or b");
    }
  }
  if (d.word_count() > kMaxArgWords) bad("more than 4 argument words");
  return d;
}

std::size_t SignatureDescriptor::word_count() const {
  std::size_t n = 0;
  for (ArgKind k : args_) n += arg_words(k);
  return n;
}

std::string SignatureDescriptor::str() const {
  std::string s(1, static_cast<char>(ret_));
  s.push_back('(');
  for (ArgKind k : args_) s.push_back(static_cast<char>(k));
  s.push_back(')');
  return s;
}

}  // namespace dynenclave
