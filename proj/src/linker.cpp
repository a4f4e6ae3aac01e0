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

#include "dynenclave/linker.hpp"

#include <array>
#include <cstdio>

namespace dynenclave {

namespace {

bool ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

bool is_type_keyword(std::string_view word) {
  static constexpr std::array<std::string_view, 19> kWords = {
      "void",   "char",     "short",  "int",    "long",     "float",  "double",
      "signed", "unsigned", "_Bool",  "struct", "union",    "enum",   "const",
      "volatile", "static", "extern", "inline", "register"};
  for (auto w : kWords)
    if (w == word) return true;
  return false;
}

class Scanner {
 public:
  explicit Scanner(std::string_view src) : src_(src) {}

  std::string run(const AddressMap& map) {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '\n') {
        line_start_ = true;
        copy(1);
      } else if (is_space(c)) {
        copy(1);
      } else if (c == '#' && line_start_) {
        skip_directive();
      } else if (starts_comment()) {
        copy(comment_length(pos_));
      } else if (c == '"' || c == '\'') {
        copy(literal_length(pos_));
        prev_ = "lit";
      } else if (ident_start(c)) {
        identifier(map);
      } else if (is_digit(c) || (c == '.' && pos_ + 1 < src_.size() && is_digit(src_[pos_ + 1]))) {
        copy(number_length(pos_));
        prev_ = "num";
      } else {
        punct();
      }
      if (c != '\n' && !is_space(c)) line_start_ = false;
    }
    return std::move(out_);
  }

 private:
  void copy(std::size_t n) {
    out_.append(src_.substr(pos_, n));
    pos_ += n;
  }

  bool starts_comment() const {
    return src_[pos_] == '/' && pos_ + 1 < src_.size() &&
           (src_[pos_ + 1] == '/' || src_[pos_ + 1] == '*');
  }

  std::size_t comment_length(std::size_t at) const {
    if (src_[at + 1] == '/') {
      std::size_t end = src_.find('\n', at);
      return (end == std::string_view::npos ? src_.size() : end) - at;
    }
    std::size_t end = src_.find("*/", at + 2);
    if (end == std::string_view::npos)
      fail(ErrorCode::kUnbalancedSource, "unterminated block comment");
    return end + 2 - at;
  }

  std::size_t literal_length(std::size_t at) const {
    char quote = src_[at];
    std::size_t i = at + 1;
    while (i < src_.size()) {
      char c = src_[i];
      if (c == '\\') {
        i += 2;
        continue;
      }
      if (c == quote) return i + 1 - at;
      if (c == '\n') break;
      ++i;
    }
    fail(ErrorCode::kUnbalancedSource,
         quote == '"' ? "unterminated string literal" : "unterminated character literal");
  }

  // pp-number: digits followed by identifier characters, dots and exponent signs.
  std::size_t number_length(std::size_t at) const {
    std::size_t i = at + 1;
    while (i < src_.size()) {
      char c = src_[i];
      if (ident_char(c) || c == '.') {
        ++i;
      } else if ((c == '+' || c == '-') &&
                 (src_[i - 1] == 'e' || src_[i - 1] == 'E' || src_[i - 1] == 'p' ||
                  src_[i - 1] == 'P')) {
        ++i;
      } else {
        break;
      }
    }
    return i - at;
  }

  void skip_directive() {
    std::size_t i = pos_;
    while (i < src_.size()) {
      if (src_[i] == '\\' && i + 1 < src_.size() && src_[i + 1] == '\n') {
        i += 2;
        continue;
      }
      if (src_[i] == '\n') break;
      if (src_[i] == '/' && i + 1 < src_.size() && src_[i + 1] == '*') {
        i += comment_length(i);
        continue;
      }
      ++i;
    }
    copy(i - pos_);
  }

  // Next significant character after `at`, skipping whitespace and comments.
  char peek_significant(std::size_t at) const {
    std::size_t i = at;
    while (i < src_.size()) {
      if (is_space(src_[i])) {
        ++i;
      } else if (src_[i] == '/' && i + 1 < src_.size() &&
                 (src_[i + 1] == '/' || src_[i + 1] == '*')) {
        i += comment_length(i);
      } else {
        return src_[i];
      }
    }
    return '\0';
  }

  void identifier(const AddressMap& map) {
    std::size_t end = pos_;
    while (end < src_.size() && ident_char(src_[end])) ++end;
    std::string_view word = src_.substr(pos_, end - pos_);
    const AddressMapEntry* entry = map.find(word);
    bool call = entry != nullptr && depth_ > 0 && peek_significant(end) == '(' &&
                prev_ != "." && prev_ != "->" && !is_type_keyword(prev_);
    if (call) {
      out_ += call_expression(*entry);
      pos_ = end;
    } else {
      copy(end - pos_);
    }
    prev_ = std::string(word);
  }

  void punct() {
    char c = src_[pos_];
    if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
      copy(2);
      prev_ = "->";
      return;
    }
    if (c == '{') ++depth_;
    if (c == '}' && depth_ > 0) --depth_;
    copy(1);
    prev_ = std::string(1, c);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::string out_;
  std::string prev_;
  int depth_ = 0;
  bool line_start_ = true;
};

std::string join(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) {
    if (!out.empty()) out += ", ";
    out += n;
  }
  return out;
}

}  // namespace

std::string call_expression(const AddressMapEntry& entry) {
  char hex[24];
  std::snprintf(hex, sizeof hex, "%llx", static_cast<unsigned long long>(entry.address));
  return "((" + entry.return_type + " (*)())0x" + hex + "ULL)";
}

std::string rewrite_source(std::string_view c_source, const AddressMap& map) {
  return Scanner(c_source).run(map);
}

UnresolvedSymbols::UnresolvedSymbols(std::vector<std::string> names)
    : Error(ErrorCode::kExternalSymbolUnresolved, "unresolved external symbols: " + join(names)),
      names_(std::move(names)) {}

void self_containment_check(const ExtractedFunction& extracted) {
  if (!extracted.unresolved.empty()) throw UnresolvedSymbols(extracted.unresolved);
}

}  // namespace dynenclave
