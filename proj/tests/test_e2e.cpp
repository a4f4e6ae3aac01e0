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
#include <fstream>
#include <mutex>
#include <thread>

#include "dynenclave/client.hpp"
#include "dynenclave/protocol.hpp"
#include "test_support.hpp"

namespace dynenclave {
namespace {

using testing::fixture;
using testing::LiveServer;

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kOk;
}

std::vector<ArgValue> ints(std::initializer_list<std::int64_t> v) {
  std::vector<ArgValue> out;
  for (auto x : v) out.push_back(ArgValue::integer(x));
  return out;
}

TEST(EndToEnd, LifecycleFromCommittedFixture) {
  LiveServer s;
  for (int round = 0; round < 3; ++round) {
    Client c = Client::attest(s.client_config());
    EXPECT_TRUE(c.address_map().contains("strcmp"));
    FunctionId id = c.load("sum", "i(ii)", fixture("sum"));
    EXPECT_TRUE(c.address_map().contains("sum"));
    EXPECT_EQ(c.exec(id, ints({2, 3})).return_word, 5);
    c.unload(id);
    EXPECT_FALSE(c.list().contains("sum"));
    EXPECT_EQ(s.enclave().arena().cursor, 0u);
  }
}

TEST(EndToEnd, AttestationFailuresHaveDistinctCodes) {
  LiveServer s;
  ClientConfig bad_key = s.client_config();
  bad_key.pinned_verify_key[0] ^= 1;
  EXPECT_EQ(code_of([&] { Client::attest(bad_key); }), ErrorCode::kBadSignature);
  ClientConfig bad_m = s.client_config();
  bad_m.expected_measurement[3] ^= 1;
  EXPECT_EQ(code_of([&] { Client::attest(bad_m); }), ErrorCode::kMeasurementMismatch);
  ClientConfig nowhere = s.client_config();
  nowhere.server.port = 1;
  EXPECT_EQ(code_of([&] { Client::attest(nowhere); }), ErrorCode::kTransportError);
}

TEST(EndToEnd, ErrorsDoNotEndTheSession) {
  LiveServer s;
  Client c = Client::attest(s.client_config());
  try {
    c.exec(7, ints({1}));
    FAIL();
  } catch (const RemoteError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownFunction);
  }
  FunctionId id = c.load("sum", "i(ii)", fixture("sum"));
  EXPECT_EQ(code_of([&] { c.exec(id, {ArgValue::string("abc")}); }), ErrorCode::kArityMismatch);
  EXPECT_EQ(code_of([&] { c.load("sum", "i(ii)", fixture("sum")); }), ErrorCode::kDuplicateName);
  EXPECT_EQ(c.exec(id, ints({40, 2})).return_word, 42);
  EXPECT_EQ(c.clear(), 1u);
  EXPECT_EQ(code_of([&] { c.exec(id, ints({1, 2})); }), ErrorCode::kUnknownFunction);
  EXPECT_EQ(c.clear(), 0u);
}

TEST(EndToEnd, SessionsShareTheRegistry) {
  LiveServer s;
  FunctionId id = 0;
  {
    Client a = Client::attest(s.client_config());
    id = a.load("fib", "i(i)", fixture("recursive_fibonacci"));
  }
  Client b = Client::attest(s.client_config());
  EXPECT_TRUE(b.address_map().contains("fib"));
  EXPECT_EQ(b.exec(id, ints({10})).return_word, 55);
}

TEST(EndToEnd, RequestBeforeAttestationIsRefused) {
  LiveServer s;
  Connection conn = Connection::connect(s.server().local());
  conn.send_frame(plaintext_frame(MsgType::kLoadFn, 1, protocol::encode(protocol::LoadFn{"x", "i()", {0xc3}})));
  std::optional<Frame> reply = conn.recv_frame();
  ASSERT_TRUE(reply);
  EXPECT_EQ(reply->type(), MsgType::kError);
  EXPECT_EQ(protocol::decode_error(reply->payload).code, ErrorCode::kProtocolViolation);
  EXPECT_FALSE(conn.recv_frame().has_value());  // server hung up
  EXPECT_TRUE(s.enclave().functions().empty());
}

TEST(EndToEnd, TranscriptNeverShowsCode) {
  LiveServer s;
  std::mutex mu;
  Bytes sent;
  std::vector<std::pair<Direction, Bytes>> frames;
  auto tap = [&](Direction d, ByteView wire) {
    std::lock_guard lock(mu);
    frames.emplace_back(d, Bytes(wire.begin(), wire.end()));
  };
  Client c = Client::attest(s.client_config(), tap);
  Bytes code = fixture("recursive_fibonacci");
  FunctionId id = c.load("fib", "i(i)", code);
  c.exec(id, {ArgValue::integer(12)});
  c.exec(id, {ArgValue::integer(13)});

  ASSERT_GE(frames.size(), 6u);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const Bytes& w = frames[i].second;
    std::uint8_t type = w[5];
    if (i >= 2) EXPECT_FALSE(type == 0x01 || type == 0x02) << "frame " << i << " is plaintext";
    auto hit = std::search(w.begin(), w.end(), code.begin(), code.begin() + 12);
    EXPECT_EQ(hit, w.end()) << "code bytes visible in frame " << i;
    std::string text(w.begin(), w.end());
    EXPECT_EQ(text.find("strcmp"), std::string::npos) << "address map visible in frame " << i;
    EXPECT_EQ(text.find("fib"), std::string::npos) << "function name visible in frame " << i;
  }
}

TEST(EndToEnd, ConcurrentClients) {
  LiveServer s;
  FunctionId sum = 0;
  {
    Client c = Client::attest(s.client_config());
    sum = c.load("sum", "i(ii)", fixture("sum"));
  }
  std::atomic<int> wrong{0};
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&, t] {
      try {
        Client c = Client::attest(s.client_config());
        std::string name = "own" + std::to_string(t);
        FunctionId own = c.load(name, "i(i)", fixture("recursive_fibonacci"));
        for (int i = 0; i < 50; ++i) {
          if (c.exec(sum, ints({i, t})).return_word != i + t) wrong.fetch_add(1);
          if (c.exec(own, ints({15})).return_word != 610) wrong.fetch_add(1);
        }
        c.unload(own);
      } catch (const std::exception&) {
        wrong.fetch_add(1000);
      }
    });
  }
  for (auto& th : threads) th.join();
  EXPECT_EQ(wrong.load(), 0);
  EXPECT_EQ(s.enclave().functions().size(), 1u);
}

TEST(EndToEnd, ProvisionFromSource) {
  if (!testing::have_toolchain()) GTEST_SKIP() << "no C compiler";
  LiveServer s;
  Client c = Client::attest(s.client_config());
  Corpus corpus = testing::corpus();
  Toolchain tc;
  ProvisionResult r = provision_function(c, corpus.get("check_password").source, "check_password", "i(s)", tc);
  EXPECT_TRUE(r.payload.function.unresolved.empty());
  EXPECT_EQ(c.exec(r.id, {ArgValue::string("topsecret123")}).return_word, 1);
  EXPECT_EQ(c.exec(r.id, {ArgValue::string("hunter2")}).return_word, 0);

  // Unmapped external: fails at self-check, nothing is loaded.
  std::filesystem::path bad = std::filesystem::temp_directory_path() / "dynenclave-bad.c";
  std::ofstream(bad) << "int puts(const char*);\nint bad(void) { return puts(\"x\"); }\n";
  std::size_t before = s.enclave().functions().size();
  try {
    provision_function(c, bad, "bad", "i()", tc);
    FAIL();
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "self-check");
    EXPECT_NE(std::string(e.what()).find("puts"), std::string::npos);
  }
  std::filesystem::remove(bad);
  EXPECT_EQ(s.enclave().functions().size(), before);

  try {
    provision_function(c, "/nonexistent.c", "f", "i()", tc);
    FAIL();
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "read");
  }
}

}  // namespace
}  // namespace dynenclave
