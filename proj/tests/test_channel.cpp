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

#include "dynenclave/channel.hpp"
#include "test_support.hpp"

namespace dynenclave {
namespace {

using testing::random_bytes;
using testing::rng;

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kOk;
}

SessionKeys keys_for(Role role) {
  SessionKey c2s{}, s2c{};
  for (std::size_t i = 0; i < c2s.size(); ++i) {
    c2s[i] = static_cast<std::uint8_t>(0x10 + i);
    s2c[i] = static_cast<std::uint8_t>(0x90 + i);
  }
  return role == Role::kClient ? SessionKeys{c2s, s2c} : SessionKeys{s2c, c2s};
}

TEST(Frame, EncodeDecode) {
  Frame f = plaintext_frame(MsgType::kHello, 0, to_bytes("abc"));
  Bytes wire = encode_frame(f);
  EXPECT_EQ(to_hex(wire), "445347580101000000000000000000000003616263");
  EXPECT_EQ(decode_frame(wire), f);
  EXPECT_EQ(frame_payload_length(wire), 3u);
}

TEST(Frame, DecodeRejectsMalformed) {
  Bytes wire = encode_frame(plaintext_frame(MsgType::kHello, 0, to_bytes("abc")));
  Bytes bad = wire;
  bad[0] = 'X';
  EXPECT_EQ(code_of([&] { decode_frame(bad); }), ErrorCode::kMalformedFrame);
  bad = wire;
  bad[4] = 2;
  EXPECT_EQ(code_of([&] { decode_frame(bad); }), ErrorCode::kMalformedFrame);
  bad = wire;
  bad.pop_back();
  EXPECT_EQ(code_of([&] { decode_frame(bad); }), ErrorCode::kMalformedFrame);
  bad = Bytes(wire.begin(), wire.begin() + 10);
  EXPECT_EQ(code_of([&] { decode_frame(bad); }), ErrorCode::kMalformedFrame);
  bad = wire;
  bad[14] = 0x7f;  // absurd length
  EXPECT_EQ(code_of([&] { frame_payload_length(bad); }), ErrorCode::kMalformedFrame);
}

// Reference frames from tools/oracle/golden_vectors.py (key 0x10..0x2f).
TEST(Golden, SealedFrames) {
  SessionKeys client = keys_for(Role::kClient);
  Frame f = seal(client, Role::kClient, 1, MsgType::kLoadFn, to_bytes("hello"));
  EXPECT_EQ(to_hex(encode_frame(f)),
            "445347580111000000000000000100000015104430b9262f07d46dd8df0561aacfac8c665da379");
  SessionKeys server{client.send_key, client.recv_key};  // same key, other nonce label
  Frame g = seal(server, Role::kServer, 7, MsgType::kExecResult, {});
  EXPECT_EQ(to_hex(encode_frame(g)), "4453475801140000000000000007000000101c101229c705f4fa623f9837aad7acc2");
}

TEST(Channel, RoundTripOnRandomPayloads) {
  ChannelEndpoint client(keys_for(Role::kClient), Role::kClient);
  ChannelEndpoint server(keys_for(Role::kServer), Role::kServer);
  for (int i = 0; i < 1000; ++i) {
    Bytes pt = random_bytes(rng()() % 2048);
    Frame f = client.seal(MsgType::kLoadFn, pt);
    ASSERT_EQ(f.payload.size(), pt.size() + kAeadTagSize);
    Opened o = server.open(decode_frame(encode_frame(f)));
    ASSERT_EQ(o.type, MsgType::kLoadFn);
    ASSERT_EQ(o.plaintext, pt);
    Frame back = server.seal(MsgType::kExecResult, pt);
    ASSERT_EQ(client.open(back).plaintext, pt);
  }
  EXPECT_EQ(client.next_send_seq(), 1001u);
  EXPECT_EQ(server.next_recv_seq(), 1001u);
}

TEST(Channel, EverySingleBitMutationRejected) {
  SessionKeys ck = keys_for(Role::kClient), sk = keys_for(Role::kServer);
  for (int trial = 0; trial < 4; ++trial) {
    Bytes pt = random_bytes(1 + trial * 37);
    Bytes wire = encode_frame(seal(ck, Role::kClient, 5, MsgType::kExecFn, pt));
    for (std::size_t bit = 0; bit < wire.size() * 8; ++bit) {
      Bytes m = wire;
      m[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
      ErrorCode c = code_of([&] { open(sk, Role::kServer, 5, decode_frame(m)); });
      ASSERT_NE(c, ErrorCode::kOk) << "bit " << bit;
      if (bit / 8 >= kFrameHeaderSize) {
        ASSERT_EQ(c, ErrorCode::kAuthFailure) << "bit " << bit;
      }
    }
  }
}

TEST(Channel, OrderingEnforced) {
  SessionKeys ck = keys_for(Role::kClient), sk = keys_for(Role::kServer);
  Frame f1 = seal(ck, Role::kClient, 1, MsgType::kListFns, {});
  Frame f2 = seal(ck, Role::kClient, 2, MsgType::kListFns, {});
  EXPECT_EQ(code_of([&] { open(sk, Role::kServer, 1, f2); }), ErrorCode::kReplayOrReorder);
  ChannelEndpoint server(sk, Role::kServer);
  server.open(f1);
  EXPECT_EQ(code_of([&] { server.open(f1); }), ErrorCode::kReplayOrReorder);
  server.open(f2);
  EXPECT_EQ(server.next_recv_seq(), 3u);
  // Rewriting the seq in the header breaks the tag.
  Frame forged = f2;
  forged.seq = 3;
  EXPECT_EQ(code_of([&] { server.open(forged); }), ErrorCode::kAuthFailure);
}

TEST(Channel, DirectionAndKeyBinding) {
  SessionKeys ck = keys_for(Role::kClient);
  Frame f = seal(ck, Role::kClient, 1, MsgType::kListFns, to_bytes("x"));
  // A client cannot open its own frames (reflection).
  EXPECT_EQ(code_of([&] { open(ck, Role::kClient, 1, f); }), ErrorCode::kAuthFailure);
  // Changing the declared type is caught by the associated data.
  Frame retyped = f;
  retyped.msg_type = static_cast<std::uint8_t>(MsgType::kClearFns);
  EXPECT_EQ(code_of([&] { open(keys_for(Role::kServer), Role::kServer, 1, retyped); }),
            ErrorCode::kAuthFailure);
}

TEST(Channel, TypeChecks) {
  SessionKeys ck = keys_for(Role::kClient), sk = keys_for(Role::kServer);
  Frame f = seal(ck, Role::kClient, 1, MsgType::kListFns, {});
  f.msg_type = 0x55;
  EXPECT_EQ(code_of([&] { open(sk, Role::kServer, 1, f); }), ErrorCode::kUnknownType);
  Frame hello = plaintext_frame(MsgType::kHello, 1, Bytes(40));
  EXPECT_EQ(code_of([&] { open(sk, Role::kServer, 1, hello); }), ErrorCode::kProtocolViolation);
  EXPECT_FALSE(is_known_msg_type(0x00));
  EXPECT_TRUE(is_known_msg_type(0x7f));
  EXPECT_TRUE(is_plaintext_type(MsgType::kRaReport));
  EXPECT_FALSE(is_plaintext_type(MsgType::kAddrMap));
}

TEST(Channel, SequenceExhaustion) {
  SessionKeys ck = keys_for(Role::kClient);
  EXPECT_NO_THROW(seal(ck, Role::kClient, kLastUsableSeq, MsgType::kListFns, {}));
  EXPECT_EQ(code_of([&] { seal(ck, Role::kClient, kLastUsableSeq + 1, MsgType::kListFns, {}); }),
            ErrorCode::kSequenceExhausted);
  ChannelEndpoint e(ck, Role::kClient, kLastUsableSeq);
  e.seal(MsgType::kListFns, {});
  EXPECT_EQ(code_of([&] { e.seal(MsgType::kListFns, {}); }), ErrorCode::kSequenceExhausted);
}

}  // namespace
}  // namespace dynenclave
