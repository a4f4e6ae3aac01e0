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

#include "dynenclave/elf_object.hpp"

#include <elf.h>

#include <algorithm>
#include <cstring>
#include <type_traits>

namespace dynenclave {

namespace {

// Range check that cannot overflow.
bool in_bounds(std::size_t total, std::uint64_t offset, std::uint64_t size) {
  return offset <= total && size <= total - offset;
}

template <typename T>
T read_struct(ByteView raw, std::uint64_t offset) {
  static_assert(std::is_trivially_copyable_v<T>);
  if (!in_bounds(raw.size(), offset, sizeof(T)))
    fail(ErrorCode::kTruncatedObject, "structure at offset " + std::to_string(offset) +
                                          " runs past end of file");
  T out;
  std::memcpy(&out, raw.data() + offset, sizeof(T));
  return out;
}

std::string read_cstr(ByteView raw, const ElfSection& strtab, std::uint64_t index) {
  if (index >= strtab.size) fail(ErrorCode::kTruncatedObject, "string index out of table");
  std::uint64_t start = strtab.offset + index;
  std::uint64_t end = strtab.offset + strtab.size;
  const auto* begin = raw.data() + start;
  const auto* stop = std::find(begin, raw.data() + end, std::uint8_t{0});
  return std::string(begin, stop);
}

const ElfSection& section_at(const std::vector<ElfSection>& sections, std::uint64_t index) {
  if (index >= sections.size())
    fail(ErrorCode::kTruncatedObject, "section index " + std::to_string(index) + " out of range");
  return sections[index];
}

}  // namespace

bool ObjectImage::is_relocatable() const { return file_type_ == ET_REL; }

ObjectImage ObjectImage::parse(ByteView bytes) {
  if (bytes.size() < EI_NIDENT || std::memcmp(bytes.data(), ELFMAG, SELFMAG) != 0)
    fail(ErrorCode::kNotAnObject, "missing ELF magic");
  if (bytes[EI_CLASS] != ELFCLASS64)
    fail(ErrorCode::kUnsupportedClass, "only 64-bit objects are supported");
  if (bytes[EI_DATA] != ELFDATA2LSB)
    fail(ErrorCode::kUnsupportedClass, "only little-endian objects are supported");

  ObjectImage img;
  img.raw_.assign(bytes.begin(), bytes.end());
  ByteView raw = img.raw_;

  auto eh = read_struct<Elf64_Ehdr>(raw, 0);
  img.file_type_ = eh.e_type;
  if (eh.e_shnum == 0) return img;
  if (eh.e_shentsize != sizeof(Elf64_Shdr))
    fail(ErrorCode::kNotAnObject, "unexpected section header entry size");
  if (!in_bounds(raw.size(), eh.e_shoff, std::uint64_t{eh.e_shnum} * sizeof(Elf64_Shdr)))
    fail(ErrorCode::kTruncatedObject, "section header table runs past end of file");

  for (std::uint16_t i = 0; i < eh.e_shnum; ++i) {
    auto sh = read_struct<Elf64_Shdr>(raw, eh.e_shoff + std::uint64_t{i} * sizeof(Elf64_Shdr));
    if (sh.sh_type != SHT_NOBITS && sh.sh_type != SHT_NULL &&
        !in_bounds(raw.size(), sh.sh_offset, sh.sh_size))
      fail(ErrorCode::kTruncatedObject, "section " + std::to_string(i) + " runs past end of file");
    ElfSection s;
    s.type = sh.sh_type;
    s.flags = sh.sh_flags;
    s.addr = sh.sh_addr;
    s.offset = sh.sh_offset;
    s.size = sh.sh_size;
    s.link = sh.sh_link;
    s.info = sh.sh_info;
    s.entsize = sh.sh_entsize;
    img.sections_.push_back(s);
  }

  if (eh.e_shstrndx != SHN_UNDEF) {
    const ElfSection& names = section_at(img.sections_, eh.e_shstrndx);
    for (std::uint16_t i = 0; i < eh.e_shnum; ++i) {
      auto sh = read_struct<Elf64_Shdr>(raw, eh.e_shoff + std::uint64_t{i} * sizeof(Elf64_Shdr));
      img.sections_[i].name = read_cstr(raw, names, sh.sh_name);
    }
  }

  // Symbol tables; remember where each one's entries start so relocations
  // can resolve their symbol index against the right table.
  std::vector<std::size_t> table_base(img.sections_.size(), 0);
  for (std::size_t si = 0; si < img.sections_.size(); ++si) {
    const ElfSection& sec = img.sections_[si];
    if (sec.type != SHT_SYMTAB && sec.type != SHT_DYNSYM) continue;
    if (sec.entsize != sizeof(Elf64_Sym))
      fail(ErrorCode::kNotAnObject, "unexpected symbol entry size in " + sec.name);
    const ElfSection& strtab = section_at(img.sections_, sec.link);
    table_base[si] = img.symbols_.size();
    std::uint64_t count = sec.size / sizeof(Elf64_Sym);
    for (std::uint64_t k = 0; k < count; ++k) {
      auto st = read_struct<Elf64_Sym>(raw, sec.offset + k * sizeof(Elf64_Sym));
      ElfSymbol sym;
      sym.name = read_cstr(raw, strtab, st.st_name);
      sym.type = ELF64_ST_TYPE(st.st_info);
      sym.binding = ELF64_ST_BIND(st.st_info);
      sym.shndx = st.st_shndx;
      sym.value = st.st_value;
      sym.size = st.st_size;
      sym.dynamic = sec.type == SHT_DYNSYM;
      if (sym.type == STT_SECTION && sym.name.empty() && sym.shndx < img.sections_.size())
        sym.name = img.sections_[sym.shndx].name;
      img.symbols_.push_back(std::move(sym));
    }
  }

  for (const ElfSection& sec : img.sections_) {
    if (sec.type != SHT_RELA && sec.type != SHT_REL) continue;
    bool rela = sec.type == SHT_RELA;
    std::size_t entsize = rela ? sizeof(Elf64_Rela) : sizeof(Elf64_Rel);
    if (sec.entsize != entsize) fail(ErrorCode::kNotAnObject, "unexpected relocation entry size");
    std::size_t symtab_index = sec.link;
    bool has_symtab = symtab_index != 0 && symtab_index < img.sections_.size() &&
                      (img.sections_[symtab_index].type == SHT_SYMTAB ||
                       img.sections_[symtab_index].type == SHT_DYNSYM);
    std::size_t symtab_count =
        has_symtab ? img.sections_[symtab_index].size / sizeof(Elf64_Sym) : 0;

    std::uint64_t count = sec.size / entsize;
    for (std::uint64_t k = 0; k < count; ++k) {
      ElfRelocation r;
      std::uint64_t info = 0;
      if (rela) {
        auto e = read_struct<Elf64_Rela>(raw, sec.offset + k * entsize);
        r.offset = e.r_offset;
        r.addend = e.r_addend;
        info = e.r_info;
      } else {
        auto e = read_struct<Elf64_Rel>(raw, sec.offset + k * entsize);
        r.offset = e.r_offset;
        info = e.r_info;
      }
      r.type = static_cast<std::uint32_t>(ELF64_R_TYPE(info));
      r.section = sec.info;
      std::uint64_t sym_index = ELF64_R_SYM(info);
      if (sym_index != 0) {
        if (sym_index >= symtab_count)
          fail(ErrorCode::kTruncatedObject, "relocation symbol index out of range");
        r.symbol = img.symbols_[table_base[symtab_index] + sym_index].name;
      }
      img.relocations_.push_back(std::move(r));
    }
  }
  return img;
}

ExtractedFunction extract_function(const ObjectImage& image, std::string_view symbol_name) {
  // Static table first; the dynamic table covers stripped shared objects.
  const ElfSymbol* found = nullptr;
  for (bool want_dynamic : {false, true}) {
    for (const ElfSymbol& s : image.symbols()) {
      if (s.dynamic != want_dynamic || s.name != symbol_name || s.shndx == SHN_UNDEF) continue;
      if (found == nullptr || (found->type != STT_FUNC && s.type == STT_FUNC)) found = &s;
    }
    if (found != nullptr) break;
  }
  if (found == nullptr)
    fail(ErrorCode::kSymbolNotFound, "no defined symbol '" + std::string(symbol_name) + "'");
  if (found->type != STT_FUNC)
    fail(ErrorCode::kNotAFunction, "'" + std::string(symbol_name) + "' is not a function");
  if (found->size == 0)
    fail(ErrorCode::kZeroSize, "'" + std::string(symbol_name) + "' has size 0");
  if (found->shndx >= SHN_LORESERVE || found->shndx >= image.sections().size())
    fail(ErrorCode::kNotAFunction, "'" + std::string(symbol_name) + "' is not in a section");

  const ElfSection& sec = image.sections()[found->shndx];
  if (sec.type == SHT_NOBITS)
    fail(ErrorCode::kNotAFunction, "'" + std::string(symbol_name) + "' lives in a NOBITS section");

  std::uint64_t in_section = image.is_relocatable() ? found->value : found->value - sec.addr;
  if (!image.is_relocatable() && found->value < sec.addr)
    fail(ErrorCode::kTruncatedObject, "symbol address precedes its section");
  if (!in_bounds(sec.size, in_section, found->size))
    fail(ErrorCode::kTruncatedObject, "symbol range exceeds its section");

  ExtractedFunction out;
  out.name = std::string(symbol_name);
  out.section = sec.name;
  out.offset = in_section;
  const auto* begin = image.raw().data() + sec.offset + in_section;
  out.bytes.assign(begin, begin + found->size);

  auto note = [&](const std::string& name) {
    std::string label = name.empty() ? "<absolute>" : name;
    if (std::find(out.unresolved.begin(), out.unresolved.end(), label) == out.unresolved.end())
      out.unresolved.push_back(label);
  };
  for (const ElfRelocation& r : image.relocations()) {
    if (image.is_relocatable()) {
      if (r.section != found->shndx) continue;
      if (r.offset >= in_section && r.offset < in_section + found->size) note(r.symbol);
    } else {
      if (r.offset >= found->value && r.offset < found->value + found->size) note(r.symbol);
    }
  }
  return out;
}

}  // namespace dynenclave
