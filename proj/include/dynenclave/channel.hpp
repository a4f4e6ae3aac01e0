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

#ifndef DYNENCLAVE_CHANNEL_HPP_
#define DYNENCLAVE_CHANNEL_HPP_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>
#include <utility>

#include "dynenclave/attestation.hpp"
#include "dynenclave/bytes.hpp"

namespace dynenclave {

// Wire layout (big-endian):
//   magic "DSGX" | version u8 | msg_type u8 | seq u64 | payload_len u32 | payload
inline constexpr std::string_view kFrameMagic = "DSGX";
inline constexpr std::uint8_t kFrameVersion = 0x01;
inline constexpr std::size_t kFrameHeaderSize = 18;
inline constexpr std::size_t kMaxFramePayload = 256 * 1024 * 1024;
inline constexpr std::size_t kAeadTagSize = 16;
inline constexpr std::uint64_t kLastUsableSeq = std::numeric_limits<std::uint64_t>::max() - 1;

enum class MsgType : std::uint8_t {
  kHello = 0x01,
  kRaReport = 0x02,
  kAddrMap = 0x10,
  kLoadFn = 0x11,
  kLoadAck = 0x12,
  kExecFn = 0x13,
  kExecResult = 0x14,
  kUnloadFn = 0x15,
  kClearFns = 0x16,
  kListFns = 0x17,
  kError = 0x7F,
};

bool is_known_msg_type(std::uint8_t raw);
// HELLO and RA_REPORT travel in the clear; everything else is sealed.
bool is_plaintext_type(MsgType type);
std::string_view msg_type_name(MsgType type);

struct Frame {
  std::uint8_t version = kFrameVersion;
  std::uint8_t msg_type = 0;  // raw, so unknown values survive decoding
  std::uint64_t seq = 0;
  Bytes payload;

  MsgType type() const { return static_cast<MsgType>(msg_type); }
  friend bool operator==(const Frame&, const Frame&) = default;
};

Bytes encode_frame(const Frame& frame);
// Throws MalformedFrame (bad magic/version, truncated, length mismatch).
Frame decode_frame(ByteView bytes);
// Validates a header and returns its payload_len. Throws MalformedFrame.
std::size_t frame_payload_length(ByteView header);
// The 18 header bytes, which double as AEAD associated data.
Bytes frame_header(const Frame& frame);

Frame plaintext_frame(MsgType type, std::uint64_t seq, Bytes payload);

// ChaCha20-Poly1305 (IETF). Nonce = 4-byte direction label || u64be(seq);
// the header is authenticated as associated data. `role` is the sender.
// Throws SequenceExhausted.
Frame seal(const SessionKeys& keys, Role role, std::uint64_t seq, MsgType type,
           ByteView plaintext);

struct Opened {
  MsgType type;
  Bytes plaintext;
};

// `role` is the receiver. Throws UnknownType, ReplayOrReorder,
// ProtocolViolation (a plaintext-only type on the sealed channel) or
// AuthFailure.
Opened open(const SessionKeys& keys, Role role, std::uint64_t expected_seq, const Frame& frame);

// One side of an established channel with its per-direction counters.
class ChannelEndpoint {
 public:
  // Sealed traffic starts at seq 1; seq 0 belongs to the handshake.
  ChannelEndpoint(SessionKeys keys, Role role, std::uint64_t next_send = 1,
                  std::uint64_t next_recv = 1)
      : keys_(keys), role_(role), next_send_(next_send), next_recv_(next_recv) {}

  Frame seal(MsgType type, ByteView plaintext);
  Opened open(const Frame& frame);

  std::uint64_t next_send_seq() const { return next_send_; }
  std::uint64_t next_recv_seq() const { return next_recv_; }

 private:
  SessionKeys keys_;
  Role role_;
  std::uint64_t next_send_;
  std::uint64_t next_recv_;
};

}  // namespace dynenclave

#endif  // DYNENCLAVE_CHANNEL_HPP_
