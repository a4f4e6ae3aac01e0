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

#include <gtest/gtest.h>

#include <fstream>

#include "dynenclave/client.hpp"
#include "dynenclave/elf_object.hpp"
#include "dynenclave/hexstring.hpp"
#include "elf_oracle.hpp"
#include "test_support.hpp"

namespace dynenclave {
namespace {

namespace fs = std::filesystem;
using testing::have_toolchain;

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kOk;
}

class ScratchDir {
 public:
  ScratchDir() {
    std::string tmpl = (fs::temp_directory_path() / "dynenclave-elf-XXXXXX").string();
    path_ = ::mkdtemp(tmpl.data());
  }
  ~ScratchDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& s) const { return path_ / s; }

 private:
  fs::path path_;
};

Bytes read_all(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return Bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

// Compiles with the corpus flags and keeps the object on disk for binutils.
fs::path compile_to(const ScratchDir& dir, const std::string& source, const std::string& stem,
                    const std::string& extra = "") {
  fs::path src = dir / (stem + ".c");
  fs::path obj = dir / (stem + ".o");
  std::ofstream(src) << source;
  int rc = 0;
  std::string flags;
  for (const auto& f : Toolchain{}.flags) flags += f + " ";
  testing::shell("cc " + flags + extra + " -o '" + obj.string() + "' '" + src.string() + "' 2>&1", &rc);
  EXPECT_EQ(rc, 0) << source;
  return obj;
}

TEST(ElfParse, RejectsNonObjects) {
  EXPECT_EQ(code_of([] { parse_object(to_bytes("hello world, not an ELF file at all......")); }),
            ErrorCode::kNotAnObject);
  EXPECT_EQ(code_of([] { parse_object(Bytes{0x7f, 'E', 'L'}); }), ErrorCode::kNotAnObject);
}

TEST(ElfParse, ClassAndTruncation) {
  if (!have_toolchain()) GTEST_SKIP() << "no C compiler";
  Bytes obj = Toolchain{}.compile("int sum(int a, int b) { return a + b; }\n", "sum");
  ObjectImage img = parse_object(obj);
  EXPECT_TRUE(img.is_relocatable());

  Bytes b = obj;
  b[4] = 1;  // ELFCLASS32
  EXPECT_EQ(code_of([&] { parse_object(b); }), ErrorCode::kUnsupportedClass);
  b = obj;
  b[5] = 2;  // big-endian
  EXPECT_EQ(code_of([&] { parse_object(b); }), ErrorCode::kUnsupportedClass);
  for (std::size_t cut : {std::size_t{20}, std::size_t{64}, obj.size() / 2, obj.size() - 1}) {
    Bytes t(obj.begin(), obj.begin() + static_cast<std::ptrdiff_t>(cut));
    ErrorCode c = code_of([&] { extract_function(parse_object(t), "sum"); });
    EXPECT_TRUE(c == ErrorCode::kTruncatedObject || c == ErrorCode::kNotAnObject) << cut;
  }
}

TEST(Extract, SymbolErrors) {
  if (!have_toolchain()) GTEST_SKIP() << "no C compiler";
  Bytes obj = Toolchain{}.compile(
      "int counter = 3;\n"
      "int sum(int a, int b) { return a + b; }\n"
      "__asm__(\".globl bare\\n.type bare,@function\\nbare: ret\\n\");\n",
      "errs");
  ObjectImage img = parse_object(obj);
  EXPECT_EQ(code_of([&] { extract_function(img, "missing"); }), ErrorCode::kSymbolNotFound);
  EXPECT_EQ(code_of([&] { extract_function(img, "counter"); }), ErrorCode::kNotAFunction);
  EXPECT_EQ(code_of([&] { extract_function(img, "bare"); }), ErrorCode::kZeroSize);
  ExtractedFunction f = extract_function(img, "sum");
  EXPECT_EQ(to_hexstring(f.bytes), testing::kSumHexstring);
  EXPECT_EQ(f.section, ".text");
  EXPECT_TRUE(f.unresolved.empty());
}

TEST(Extract, SecondFunctionInSection) {
  if (!have_toolchain()) GTEST_SKIP() << "no C compiler";
  Bytes obj = Toolchain{}.compile(
      "int first(int a) { return a * 3; }\nint sum(int a, int b) { return a + b; }\n", "two");
  ExtractedFunction f = extract_function(parse_object(obj), "sum");
  EXPECT_GT(f.offset, 0u);
  EXPECT_EQ(to_hexstring(f.bytes), testing::kSumHexstring);
}

TEST(Extract, SharedObjectUsesVirtualAddresses) {
  if (!have_toolchain() || !testing::have_binutils()) GTEST_SKIP() << "no toolchain";
  ScratchDir dir;
  fs::path so = dir / "libpair.so";
  fs::path src = dir / "pair.c";
  std::ofstream(src) << "int first(int a) { return a * 3; }\nint sum(int a, int b) { return a + b; }\n";
  int rc = 0;
  testing::shell("cc -shared -fPIC -O0 -fcf-protection=none -o '" + so.string() + "' '" +
                     src.string() + "' 2>&1",
                 &rc);
  ASSERT_EQ(rc, 0);
  ObjectImage img = parse_object(read_all(so));
  EXPECT_FALSE(img.is_relocatable());
  EXPECT_EQ(to_hexstring(extract_function(img, "sum").bytes), testing::kSumHexstring);
  auto oracle = testing::oracle_symbol(so, "first");
  ASSERT_TRUE(oracle);
  EXPECT_EQ(extract_function(img, "first").bytes.size(), oracle->size);
}

// Extractor against binutils for every corpus source, compiled unrewritten.
TEST(Extract, MatchesBinutilsOnCorpus) {
  if (!have_toolchain() || !testing::have_binutils()) GTEST_SKIP() << "no toolchain";
  ScratchDir dir;
  Corpus corpus = testing::corpus();
  for (const CorpusEntry& e : corpus.entries()) {
    fs::path obj = compile_to(dir, corpus.source_text(e), e.name);
    auto oracle = testing::oracle_symbol(obj, e.function);
    ASSERT_TRUE(oracle) << e.name;
    ExtractedFunction f = extract_function(parse_object(read_all(obj)), e.function);
    EXPECT_EQ(f.bytes.size(), oracle->size) << e.name;
    EXPECT_EQ(f.bytes, oracle->bytes) << e.name;
    EXPECT_EQ(f.section, oracle->section) << e.name;
    EXPECT_EQ(f.offset, oracle->value) << e.name;
    EXPECT_EQ(f.unresolved, oracle->relocation_targets) << e.name;
  }
}

TEST(Extract, CorpusRelocationProfile) {
  if (!have_toolchain()) GTEST_SKIP() << "no C compiler";
  Corpus corpus = testing::corpus();
  auto unresolved = [&](const std::string& name) {
    const CorpusEntry& e = corpus.get(name);
    return extract_function(parse_object(Toolchain{}.compile(corpus.source_text(e), name)), e.function)
        .unresolved;
  };
  EXPECT_TRUE(unresolved("sum").empty());
  EXPECT_TRUE(unresolved("recursive_fibonacci").empty());  // self-call is pc-relative
  EXPECT_TRUE(unresolved("array_gen").empty());
  EXPECT_EQ(unresolved("check_password"), std::vector<std::string>{"strcmp"});
  EXPECT_EQ(unresolved("sum_array"), (std::vector<std::string>{"malloc", "array_gen", "free"}));
}

}  // namespace
}  // namespace dynenclave
