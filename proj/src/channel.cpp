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

#include "dynenclave/channel.hpp"

#include <sodium.h>

#include <algorithm>
#include <array>
#include <cstring>

namespace dynenclave {

namespace {

using AeadNonce = std::array<std::uint8_t, crypto_aead_chacha20poly1305_IETF_NPUBBYTES>;

static_assert(crypto_aead_chacha20poly1305_IETF_KEYBYTES == kSessionKeySize);
static_assert(crypto_aead_chacha20poly1305_IETF_ABYTES == kAeadTagSize);

AeadNonce make_nonce(Role sender, std::uint64_t seq) {
  AeadNonce n{};
  const char* label = sender == Role::kClient ? "C2S" : "S2C";
  std::memcpy(n.data(), label, 4);  // includes the trailing NUL
  for (int i = 0; i < 8; ++i) n[4 + i] = static_cast<std::uint8_t>(seq >> (56 - 8 * i));
  return n;
}

Role peer(Role r) { return r == Role::kClient ? Role::kServer : Role::kClient; }

}  // namespace

bool is_known_msg_type(std::uint8_t raw) {
  switch (static_cast<MsgType>(raw)) {
    case MsgType::kHello:
    case MsgType::kRaReport:
    case MsgType::kAddrMap:
    case MsgType::kLoadFn:
    case MsgType::kLoadAck:
    case MsgType::kExecFn:
    case MsgType::kExecResult:
    case MsgType::kUnloadFn:
    case MsgType::kClearFns:
    case MsgType::kListFns:
    case MsgType::kError:
      return true;
  }
  return false;
}

bool is_plaintext_type(MsgType type) {
  return type == MsgType::kHello || type == MsgType::kRaReport;
}

std::string_view msg_type_name(MsgType type) {
  switch (type) {
    case MsgType::kHello: return "HELLO";
    case MsgType::kRaReport: return "RA_REPORT";
    case MsgType::kAddrMap: return "ADDR_MAP";
    case MsgType::kLoadFn: return "LOAD_FN";
    case MsgType::kLoadAck: return "LOAD_ACK";
    case MsgType::kExecFn: return "EXEC_FN";
    case MsgType::kExecResult: return "EXEC_RESULT";
    case MsgType::kUnloadFn: return "UNLOAD_FN";
    case MsgType::kClearFns: return "CLEAR_FNS";
    case MsgType::kListFns: return "LIST_FNS";
    case MsgType::kError: return "ERROR";
  }
  return "UNKNOWN";
}

Bytes frame_header(const Frame& frame) {
  if (frame.payload.size() > kMaxFramePayload)
    fail(ErrorCode::kMalformedFrame, "frame payload too large");
  return ByteWriter()
      .raw(to_bytes(kFrameMagic))
      .u8(frame.version)
      .u8(frame.msg_type)
      .u64(frame.seq)
      .u32(static_cast<std::uint32_t>(frame.payload.size()))
      .take();
}

Bytes encode_frame(const Frame& frame) {
  Bytes out = frame_header(frame);
  out.insert(out.end(), frame.payload.begin(), frame.payload.end());
  return out;
}

std::size_t frame_payload_length(ByteView header) {
  if (header.size() < kFrameHeaderSize) fail(ErrorCode::kMalformedFrame, "truncated frame header");
  if (!std::equal(kFrameMagic.begin(), kFrameMagic.end(), header.begin()))
    fail(ErrorCode::kMalformedFrame, "bad frame magic");
  if (header[4] != kFrameVersion) fail(ErrorCode::kMalformedFrame, "unsupported frame version");
  ByteReader r(header.subspan(14, 4), ErrorCode::kMalformedFrame);
  std::size_t len = r.u32();
  if (len > kMaxFramePayload) fail(ErrorCode::kMalformedFrame, "frame payload too large");
  return len;
}

Frame decode_frame(ByteView bytes) {
  std::size_t len = frame_payload_length(bytes);
  if (bytes.size() != kFrameHeaderSize + len)
    fail(ErrorCode::kMalformedFrame, "payload_len does not match frame size");
  ByteReader r(bytes.subspan(4), ErrorCode::kMalformedFrame);
  Frame f;
  f.version = r.u8();
  f.msg_type = r.u8();
  f.seq = r.u64();
  r.u32();
  ByteView payload = r.raw(len);
  f.payload.assign(payload.begin(), payload.end());
  return f;
}

Frame plaintext_frame(MsgType type, std::uint64_t seq, Bytes payload) {
  Frame f;
  f.msg_type = static_cast<std::uint8_t>(type);
  f.seq = seq;
  f.payload = std::move(payload);
  return f;
}

Frame seal(const SessionKeys& keys, Role role, std::uint64_t seq, MsgType type,
           ByteView plaintext) {
  crypto_init();
  if (seq > kLastUsableSeq) fail(ErrorCode::kSequenceExhausted, "sequence space exhausted");
  if (plaintext.size() + kAeadTagSize > kMaxFramePayload)
    fail(ErrorCode::kMalformedFrame, "message too large for one frame");

  Frame f;
  f.msg_type = static_cast<std::uint8_t>(type);
  f.seq = seq;
  f.payload.resize(plaintext.size() + kAeadTagSize);
  Bytes ad = frame_header(f);
  AeadNonce nonce = make_nonce(role, seq);
  unsigned long long clen = 0;
  crypto_aead_chacha20poly1305_ietf_encrypt(f.payload.data(), &clen, plaintext.data(),
                                            plaintext.size(), ad.data(), ad.size(), nullptr,
                                            nonce.data(), keys.send_key.data());
  f.payload.resize(clen);
  return f;
}

Opened open(const SessionKeys& keys, Role role, std::uint64_t expected_seq, const Frame& frame) {
  crypto_init();
  if (frame.version != kFrameVersion) fail(ErrorCode::kMalformedFrame, "unsupported frame version");
  if (!is_known_msg_type(frame.msg_type))
    fail(ErrorCode::kUnknownType, "unknown message type " + std::to_string(frame.msg_type));
  if (frame.seq != expected_seq)
    fail(ErrorCode::kReplayOrReorder, "expected seq " + std::to_string(expected_seq) + ", got " +
                                          std::to_string(frame.seq));
  if (is_plaintext_type(frame.type()))
    fail(ErrorCode::kProtocolViolation,
         std::string(msg_type_name(frame.type())) + " is not valid on an established channel");
  if (frame.payload.size() < kAeadTagSize) fail(ErrorCode::kAuthFailure, "ciphertext too short");

  Bytes ad = frame_header(frame);
  AeadNonce nonce = make_nonce(peer(role), frame.seq);
  Opened out{frame.type(), Bytes(frame.payload.size() - kAeadTagSize)};
  unsigned long long mlen = 0;
  if (crypto_aead_chacha20poly1305_ietf_decrypt(out.plaintext.data(), &mlen, nullptr,
                                                frame.payload.data(), frame.payload.size(),
                                                ad.data(), ad.size(), nonce.data(),
                                                keys.recv_key.data()) != 0)
    fail(ErrorCode::kAuthFailure, "frame authentication failed");
  out.plaintext.resize(mlen);
  return out;
}

Frame ChannelEndpoint::seal(MsgType type, ByteView plaintext) {
  Frame f = dynenclave::seal(keys_, role_, next_send_, type, plaintext);
  ++next_send_;
  return f;
}

Opened ChannelEndpoint::open(const Frame& frame) {
  Opened o = dynenclave::open(keys_, role_, next_recv_, frame);
  ++next_recv_;
  return o;
}

}  // namespace dynenclave
