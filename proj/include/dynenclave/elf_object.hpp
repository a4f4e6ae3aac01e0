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

#ifndef DYNENCLAVE_ELF_OBJECT_HPP_
#define DYNENCLAVE_ELF_OBJECT_HPP_

// Minimal ELF64 little-endian reader: just enough structure to pull one
// function's bytes out of a relocatable or shared object and list the
// relocations that land inside them.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dynenclave/bytes.hpp"

namespace dynenclave {

struct ElfSection {
  std::string name;
  std::uint32_t type = 0;
  std::uint64_t flags = 0;
  std::uint64_t addr = 0;
  std::uint64_t offset = 0;
  std::uint64_t size = 0;
  std::uint32_t link = 0;
  std::uint32_t info = 0;
  std::uint64_t entsize = 0;
};

struct ElfSymbol {
  std::string name;
  std::uint8_t type = 0;     // STT_*
  std::uint8_t binding = 0;  // STB_*
  std::uint16_t shndx = 0;
  std::uint64_t value = 0;
  std::uint64_t size = 0;
  bool dynamic = false;  // from .dynsym
};

struct ElfRelocation {
  std::uint32_t section = 0;  // sh_info of the owning relocation section
  std::uint64_t offset = 0;   // section offset (ET_REL) or virtual address
  std::uint32_t type = 0;
  std::int64_t addend = 0;
  std::string symbol;  // target name; section name for STT_SECTION targets
};

class ObjectImage {
 public:
  // Throws NotAnObject, TruncatedObject or UnsupportedClass.
  static ObjectImage parse(ByteView bytes);

  std::uint16_t file_type() const { return file_type_; }  // ET_REL, ET_DYN, ...
  bool is_relocatable() const;
  const std::vector<ElfSection>& sections() const { return sections_; }
  const std::vector<ElfSymbol>& symbols() const { return symbols_; }
  const std::vector<ElfRelocation>& relocations() const { return relocations_; }
  ByteView raw() const { return raw_; }

 private:
  Bytes raw_;
  std::uint16_t file_type_ = 0;
  std::vector<ElfSection> sections_;
  std::vector<ElfSymbol> symbols_;
  std::vector<ElfRelocation> relocations_;
};

inline ObjectImage parse_object(ByteView bytes) { return ObjectImage::parse(bytes); }

struct ExtractedFunction {
  std::string name;
  Bytes bytes;
  std::string section;
  std::uint64_t offset = 0;  // within `section`
  // Relocation targets inside the function's byte range, deduplicated in
  // first-seen order. Empty iff the bytes are self-contained.
  std::vector<std::string> unresolved;
};

// Throws SymbolNotFound, NotAFunction, ZeroSize or TruncatedObject.
ExtractedFunction extract_function(const ObjectImage& image, std::string_view symbol_name);

}  // namespace dynenclave

#endif  // DYNENCLAVE_ELF_OBJECT_HPP_
