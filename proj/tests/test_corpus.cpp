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

#include <algorithm>

#include "dynenclave/client.hpp"
#include "dynenclave/hexstring.hpp"
#include "test_support.hpp"

namespace dynenclave {
namespace {

using testing::corpus;

void check_table(Enclave& enclave, FunctionId id, const Corpus& c, const CorpusEntry& e) {
  for (const IoCase& row : c.io_table(e)) {
    ExecResult r = enclave.execute_function(id, row.args);
    ASSERT_TRUE(r.return_word.has_value()) << e.name;
    EXPECT_EQ(*r.return_word, row.expect) << e.name;
  }
}

TEST(Corpus, ManifestLoads) {
  Corpus c = corpus();
  ASSERT_GE(c.entries().size(), 5u);
  for (const CorpusEntry& e : c.entries()) {
    EXPECT_TRUE(std::filesystem::exists(e.source)) << e.source;
    EXPECT_TRUE(std::filesystem::exists(e.io)) << e.io;
    EXPECT_NO_THROW(SignatureDescriptor::parse(e.descriptor)) << e.name;
    EXPECT_FALSE(c.io_table(e).empty()) << e.name;
    if (e.hexstring) EXPECT_NO_THROW(c.fixture_bytes(e)) << e.name;
  }
  EXPECT_THROW(c.get("nope"), Error);
  EXPECT_THROW(Corpus::load("/nonexistent"), Error);
}

TEST(Corpus, SumFixtureIsTheReferenceHexstring) {
  Corpus c = corpus();
  EXPECT_EQ(c.fixture_bytes(c.get("sum")), from_hexstring(testing::kSumHexstring));
}

TEST(Corpus, CommittedFixturesSatisfyTheirTables) {
  Corpus c = corpus();
  Enclave enclave(testing::small_config());
  int checked = 0;
  for (const CorpusEntry& e : c.entries()) {
    if (!e.hexstring || e.fixture_map) continue;
    FunctionId id = enclave.register_function(c.fixture_bytes(e), e.name,
                                              SignatureDescriptor::parse(e.descriptor));
    check_table(enclave, id, c, e);
    ++checked;
  }
  EXPECT_GE(checked, 3);
}

TEST(Corpus, LinkedFixtureCallsThroughItsMap) {
  Corpus c = corpus();
  const CorpusEntry& e = c.get("check_password");
  ASSERT_TRUE(e.fixture_map);
  AddressMap map = parse_map_json(read_text_file(*e.fixture_map));
  Bytes code = c.fixture_bytes(e);
  ASSERT_NE(map.find("strcmp"), nullptr);
  // The fixture embeds the reference strcmp address as a 64-bit immediate.
  std::uint64_t addr = map.find("strcmp")->address;
  Bytes imm(8);
  for (int i = 0; i < 8; ++i) imm[i] = static_cast<std::uint8_t>(addr >> (8 * i));
  EXPECT_NE(std::search(code.begin(), code.end(), imm.begin(), imm.end()), code.end());
}

TEST(Corpus, FreshBuildsAreEquivalent) {
  if (!testing::have_toolchain()) GTEST_SKIP() << "no C compiler";
  Corpus c = corpus();
  Enclave enclave(testing::small_config());
  Toolchain tc;
  // array_gen before sum_array, which links against it.
  for (std::string_view name : {"sum", "recursive_fibonacci", "check_password", "array_gen",
                                "sum_array"}) {
    const CorpusEntry& e = c.get(name);
    BuiltPayload p = build_payload(c.source_text(e), e.function, enclave.get_fas(), tc);
    EXPECT_TRUE(p.function.unresolved.empty()) << name;
    if (e.hexstring && !e.fixture_map) EXPECT_EQ(p.function.bytes, c.fixture_bytes(e)) << name;
    FunctionId id = enclave.register_function(p.function.bytes, e.function,
                                              SignatureDescriptor::parse(e.descriptor));
    check_table(enclave, id, c, e);
  }
}

}  // namespace
}  // namespace dynenclave
