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

#include "dynenclave/protocol.hpp"
#include "dynenclave/session.hpp"
#include "test_support.hpp"

namespace dynenclave {
namespace {

using testing::fixture;
using testing::small_config;

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kOk;
}

TEST(Protocol, RoundTrips) {
  protocol::LoadFn l{"sum", "i(ii)", fixture("sum")};
  auto l2 = protocol::decode_load_fn(protocol::encode(l));
  EXPECT_EQ(l2.name, l.name);
  EXPECT_EQ(l2.descriptor, l.descriptor);
  EXPECT_EQ(l2.code, l.code);

  protocol::ExecFn x{7, {ArgValue::integer(-5), ArgValue::string("topsecret123"), ArgValue::buffer({1, 2, 3})}};
  auto x2 = protocol::decode_exec_fn(protocol::encode(x));
  EXPECT_EQ(x2.id, 7u);
  EXPECT_EQ(x2.args, x.args);

  protocol::ExecResultMsg r{std::int64_t{-1}, 1234};
  auto r2 = protocol::decode_exec_result(protocol::encode(r));
  EXPECT_EQ(r2.return_word, r.return_word);
  EXPECT_EQ(r2.wall_ns, 1234u);
  EXPECT_FALSE(protocol::decode_exec_result(protocol::encode(protocol::ExecResultMsg{})).return_word);

  EXPECT_EQ(protocol::decode_ack(protocol::encode_ack(42)), 42u);
  EXPECT_EQ(protocol::decode_id(protocol::encode_id(9)), 9u);
  auto e = protocol::decode_error(protocol::encode(protocol::ErrorMsg{ErrorCode::kUnknownFunction, "no"}));
  EXPECT_EQ(e.code, ErrorCode::kUnknownFunction);
  EXPECT_EQ(e.message, "no");
}

TEST(Protocol, ByteLayouts) {
  EXPECT_EQ(to_hex(protocol::encode_ack(1)), "0000000000000001");
  EXPECT_EQ(to_hex(protocol::encode(protocol::ExecFn{1, {ArgValue::integer(2), ArgValue::string("a")}})),
            "0000000000000001" "00000002" "69" "0000000000000002" "73" "00000001" "61");
  EXPECT_EQ(to_hex(protocol::encode(protocol::LoadFn{"f", "v()", {0xc3}})),
            "00000001" "66" "00000003" "762829" "00000001" "c3");
  EXPECT_EQ(to_hex(protocol::encode(protocol::ExecResultMsg{5, 9})),
            "01" "0000000000000005" "0000000000000009");
  EXPECT_EQ(to_hex(protocol::encode(protocol::ErrorMsg{ErrorCode::kArityMismatch, "x"})),
            "00000005" "00000001" "78");
}

TEST(Protocol, MalformedBodiesAreBadRequests) {
  EXPECT_EQ(code_of([] { protocol::decode_ack(Bytes(7)); }), ErrorCode::kBadRequest);
  EXPECT_EQ(code_of([] { protocol::decode_ack(Bytes(9)); }), ErrorCode::kBadRequest);
  EXPECT_EQ(code_of([] { protocol::decode_load_fn(Bytes{0, 0, 0, 9}); }), ErrorCode::kBadRequest);
  Bytes exec = protocol::encode(protocol::ExecFn{1, {ArgValue::integer(2)}});
  exec[12] = 'q';
  EXPECT_EQ(code_of([&] { protocol::decode_exec_fn(exec); }), ErrorCode::kBadRequest);
  Bytes huge = ByteWriter().u64(1).u32(0xffffffff).take();
  EXPECT_EQ(code_of([&] { protocol::decode_exec_fn(huge); }), ErrorCode::kBadRequest);
  EXPECT_EQ(code_of([] { protocol::decode_exec_result(Bytes(17, 2)); }), ErrorCode::kBadRequest);
}

// Drives a ServerSession with hand-built client frames.
struct Harness {
  Enclave enclave{small_config()};
  SigningKey key = SigningKey::generate();
  ServerSession session{enclave, key, "test"};
  KxKeyPair kx = KxKeyPair::generate();
  Nonce nonce = random_nonce();
  std::optional<ChannelEndpoint> channel;

  Frame hello() const {
    return plaintext_frame(MsgType::kHello, 0, protocol::encode(protocol::Hello{nonce, kx.public_key}));
  }

  void attest() {
    auto out = session.handle(hello());
    ASSERT_EQ(out.size(), 2u);
    ASSERT_EQ(out[0].type(), MsgType::kRaReport);
    AttestationReport r = AttestationReport::decode(out[0].payload);
    client_verify_report(r, key.verify_key(), enclave.measurement(), nonce);
    SharedSecret s = key_agreement(kx.secret_key, r.enclave_kx_public);
    channel.emplace(derive_session_keys(s, kx.public_key, r.enclave_kx_public, Role::kClient), Role::kClient);
    Opened map = channel->open(out[1]);
    ASSERT_EQ(map.type, MsgType::kAddrMap);
    ASSERT_EQ(session.phase(), Phase::kServing);
  }

  std::vector<Opened> request(MsgType type, ByteView body) {
    std::vector<Opened> got;
    for (const Frame& f : session.handle(channel->seal(type, body))) got.push_back(channel->open(f));
    return got;
  }
};

TEST(Session, HelloThenServing) {
  Harness h;
  EXPECT_EQ(h.session.phase(), Phase::kAwaitHello);
  h.attest();
  auto list = h.request(MsgType::kListFns, {});
  ASSERT_EQ(list.size(), 1u);
  EXPECT_EQ(list[0].type, MsgType::kAddrMap);
  EXPECT_TRUE(parse_map_json(to_string(list[0].plaintext)).contains("strcmp"));
}

TEST(Session, RequestFlow) {
  Harness h;
  h.attest();
  auto load = h.request(MsgType::kLoadFn, protocol::encode(protocol::LoadFn{"sum", "i(ii)", fixture("sum")}));
  ASSERT_EQ(load.size(), 2u);
  EXPECT_EQ(load[0].type, MsgType::kLoadAck);
  EXPECT_EQ(protocol::decode_ack(load[0].plaintext), 1u);
  EXPECT_EQ(load[1].type, MsgType::kAddrMap);
  EXPECT_TRUE(parse_map_json(to_string(load[1].plaintext)).contains("sum"));

  auto exec = h.request(MsgType::kExecFn,
                        protocol::encode(protocol::ExecFn{1, {ArgValue::integer(2), ArgValue::integer(3)}}));
  ASSERT_EQ(exec.size(), 1u);
  EXPECT_EQ(exec[0].type, MsgType::kExecResult);
  EXPECT_EQ(protocol::decode_exec_result(exec[0].plaintext).return_word, 5);

  auto missing = h.request(MsgType::kExecFn, protocol::encode(protocol::ExecFn{7, {}}));
  ASSERT_EQ(missing.size(), 1u);
  EXPECT_EQ(missing[0].type, MsgType::kError);
  EXPECT_EQ(protocol::decode_error(missing[0].plaintext).code, ErrorCode::kUnknownFunction);
  EXPECT_EQ(h.session.phase(), Phase::kServing);

  auto unload = h.request(MsgType::kUnloadFn, protocol::encode_id(1));
  ASSERT_EQ(unload.size(), 2u);
  EXPECT_EQ(protocol::decode_ack(unload[0].plaintext), 1u);
  EXPECT_FALSE(parse_map_json(to_string(unload[1].plaintext)).contains("sum"));

  auto clear = h.request(MsgType::kClearFns, {});
  ASSERT_EQ(clear.size(), 2u);
  EXPECT_EQ(protocol::decode_ack(clear[0].plaintext), 0u);
  EXPECT_EQ(h.enclave.arena().cursor, 0u);
}

TEST(Session, RecoverableErrorsKeepServing) {
  Harness h;
  h.attest();
  struct Case {
    MsgType type;
    Bytes body;
    ErrorCode want;
  };
  std::vector<Case> cases = {
      {MsgType::kLoadFn, Bytes{1, 2, 3}, ErrorCode::kBadRequest},
      {MsgType::kLoadFn, protocol::encode(protocol::LoadFn{"f", "i(", {0xc3}}), ErrorCode::kBadDescriptor},
      {MsgType::kLoadFn, protocol::encode(protocol::LoadFn{"strcmp", "i()", {0xc3}}), ErrorCode::kDuplicateName},
      {MsgType::kLoadFn, protocol::encode(protocol::LoadFn{"big", "i()", Bytes(2 << 20, 0xc3)}),
       ErrorCode::kOutOfEnclaveMemory},
      {MsgType::kExecFn, Bytes{0}, ErrorCode::kBadRequest},
      {MsgType::kUnloadFn, protocol::encode_id(99), ErrorCode::kUnknownFunction},
      {MsgType::kClearFns, Bytes{1}, ErrorCode::kBadRequest},
      {MsgType::kListFns, Bytes{1}, ErrorCode::kBadRequest},
  };
  for (const Case& c : cases) {
    auto out = h.request(c.type, c.body);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0].type, MsgType::kError);
    EXPECT_EQ(protocol::decode_error(out[0].plaintext).code, c.want) << msg_type_name(c.type);
    EXPECT_EQ(h.session.phase(), Phase::kServing);
  }
  EXPECT_EQ(h.request(MsgType::kListFns, {}).at(0).type, MsgType::kAddrMap);
}

TEST(Session, HelloProblemsClosePlaintext) {
  {
    Harness h;
    Frame f = h.hello();
    f.seq = 1;
    auto out = h.session.handle(f);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0].type(), MsgType::kError);
    EXPECT_EQ(protocol::decode_error(out[0].payload).code, ErrorCode::kReplayOrReorder);
    EXPECT_EQ(h.session.phase(), Phase::kClosed);
  }
  {
    Harness h;
    auto out = h.session.handle(plaintext_frame(MsgType::kHello, 0, Bytes{1, 2}));
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(protocol::decode_error(out[0].payload).code, ErrorCode::kBadRequest);
    EXPECT_EQ(h.session.phase(), Phase::kClosed);
  }
  {
    Harness h;
    KxPublicKey zero{};
    auto out = h.session.handle(
        plaintext_frame(MsgType::kHello, 0, protocol::encode(protocol::Hello{h.nonce, zero})));
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(protocol::decode_error(out[0].payload).code, ErrorCode::kInvalidPublicKey);
  }
}

const std::vector<std::uint8_t> kAllTypes = {0x01, 0x02, 0x10, 0x11, 0x12, 0x13,
                                             0x14, 0x15, 0x16, 0x17, 0x7f, 0x00, 0x55, 0xff};

// Every (phase, type) pair: only HELLO leaves AwaitHello; in Serving only the
// five requests are answered without closing; Closed ignores everything.
TEST(Session, ExhaustivePhaseTypeTable) {
  for (std::uint8_t raw : kAllTypes) {
    Harness h;
    Frame f = raw == 0x01 ? h.hello() : plaintext_frame(static_cast<MsgType>(raw), 0, Bytes(48));
    f.msg_type = raw;
    auto out = h.session.handle(f);
    if (raw == 0x01) {
      EXPECT_EQ(h.session.phase(), Phase::kServing);
      ASSERT_EQ(out.size(), 2u);
    } else {
      EXPECT_EQ(h.session.phase(), Phase::kClosed) << int(raw);
      ASSERT_EQ(out.size(), 1u);
      EXPECT_EQ(out[0].type(), MsgType::kError);
      EXPECT_EQ(protocol::decode_error(out[0].payload).code, ErrorCode::kProtocolViolation);
      EXPECT_TRUE(h.session.handle(h.hello()).empty());
    }
  }

  for (std::uint8_t raw : kAllTypes) {
    Harness h;
    h.attest();
    auto type = static_cast<MsgType>(raw);
    bool request = raw >= 0x11 && raw <= 0x17 && raw != 0x12 && raw != 0x14;
    Bytes body;
    if (type == MsgType::kLoadFn) body = protocol::encode(protocol::LoadFn{"sum", "i(ii)", fixture("sum")});
    if (type == MsgType::kExecFn) body = protocol::encode(protocol::ExecFn{99, {}});
    if (type == MsgType::kUnloadFn) body = protocol::encode_id(99);
    std::vector<Frame> out;
    if (is_known_msg_type(raw)) {
      out = h.session.handle(h.channel->seal(type, body));
    } else {
      Frame f = h.channel->seal(MsgType::kListFns, body);
      f.msg_type = raw;
      out = h.session.handle(f);
    }
    ASSERT_FALSE(out.empty()) << int(raw);
    Opened first = h.channel->open(out[0]);
    if (request) {
      EXPECT_EQ(h.session.phase(), Phase::kServing) << int(raw);
    } else {
      EXPECT_EQ(h.session.phase(), Phase::kClosed) << int(raw);
      ASSERT_EQ(out.size(), 1u);
      EXPECT_EQ(first.type, MsgType::kError);
      ErrorCode c = protocol::decode_error(first.plaintext).code;
      EXPECT_TRUE(c == ErrorCode::kProtocolViolation || c == ErrorCode::kUnknownType) << int(raw);
      EXPECT_TRUE(h.session.handle(h.channel->seal(MsgType::kListFns, {})).empty());
    }
  }
}

TEST(Session, ReplayAndTamperClose) {
  {
    Harness h;
    h.attest();
    Frame f = h.channel->seal(MsgType::kListFns, {});
    h.channel->open(h.session.handle(f).at(0));
    auto out = h.session.handle(f);  // replay
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(protocol::decode_error(h.channel->open(out[0]).plaintext).code, ErrorCode::kReplayOrReorder);
    EXPECT_EQ(h.session.phase(), Phase::kClosed);
  }
  {
    Harness h;
    h.attest();
    Frame f = h.channel->seal(MsgType::kListFns, {});
    f.payload[0] ^= 0x01;
    auto out = h.session.handle(f);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(protocol::decode_error(h.channel->open(out[0]).plaintext).code, ErrorCode::kAuthFailure);
    EXPECT_EQ(h.session.phase(), Phase::kClosed);
  }
}

}  // namespace
}  // namespace dynenclave
