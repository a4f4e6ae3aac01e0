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

#include "dynenclave/bytes.hpp"

#include <limits>

namespace dynenclave {

namespace {

constexpr char kHexDigits[] = "0123456789abcdef";

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kOk: return "Ok";
    case ErrorCode::kBadDescriptor: return "BadDescriptor";
    case ErrorCode::kOutOfEnclaveMemory: return "OutOfEnclaveMemory";
    case ErrorCode::kDuplicateName: return "DuplicateName";
    case ErrorCode::kUnknownFunction: return "UnknownFunction";
    case ErrorCode::kArityMismatch: return "ArityMismatch";
    case ErrorCode::kScratchOverflow: return "ScratchOverflow";
    case ErrorCode::kPlatformUnsupported: return "PlatformUnsupported";
    case ErrorCode::kAllocationFailure: return "AllocationFailure";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kInvalidPublicKey: return "InvalidPublicKey";
    case ErrorCode::kBadSignature: return "BadSignature";
    case ErrorCode::kNonceMismatch: return "NonceMismatch";
    case ErrorCode::kMeasurementMismatch: return "MeasurementMismatch";
    case ErrorCode::kDegenerateSecret: return "DegenerateSecret";
    case ErrorCode::kAuthFailure: return "AuthFailure";
    case ErrorCode::kReplayOrReorder: return "ReplayOrReorder";
    case ErrorCode::kMalformedFrame: return "MalformedFrame";
    case ErrorCode::kUnknownType: return "UnknownType";
    case ErrorCode::kSequenceExhausted: return "SequenceExhausted";
    case ErrorCode::kProtocolViolation: return "ProtocolViolation";
    case ErrorCode::kBadRequest: return "BadRequest";
    case ErrorCode::kNotAnObject: return "NotAnObject";
    case ErrorCode::kTruncatedObject: return "TruncatedObject";
    case ErrorCode::kUnsupportedClass: return "UnsupportedClass";
    case ErrorCode::kSymbolNotFound: return "SymbolNotFound";
    case ErrorCode::kNotAFunction: return "NotAFunction";
    case ErrorCode::kZeroSize: return "ZeroSize";
    case ErrorCode::kBadHexstring: return "BadHexstring";
    case ErrorCode::kMalformedMap: return "MalformedMap";
    case ErrorCode::kBadCastString: return "BadCastString";
    case ErrorCode::kUnbalancedSource: return "UnbalancedSource";
    case ErrorCode::kExternalSymbolUnresolved: return "ExternalSymbolUnresolved";
    case ErrorCode::kTransportError: return "TransportError";
    case ErrorCode::kBindFailure: return "BindFailure";
    case ErrorCode::kToolchainFailure: return "ToolchainFailure";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kUsage: return "Usage";
  }
  return "Unknown";
}

std::string to_hex(ByteView bytes) {
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(kHexDigits[b >> 4]);
    out.push_back(kHexDigits[b & 0x0f]);
  }
  return out;
}

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) fail(ErrorCode::kUsage, "odd-length hex string");
  Bytes out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    int hi = hex_value(hex[i]);
    int lo = hex_value(hex[i + 1]);
    if (hi < 0 || lo < 0) fail(ErrorCode::kUsage, "invalid hex digit");
    out.push_back(static_cast<std::uint8_t>(hi << 4 | lo));
  }
  return out;
}

ByteWriter& ByteWriter::u8(std::uint8_t v) {
  out_.push_back(v);
  return *this;
}

ByteWriter& ByteWriter::u32(std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8)
    out_.push_back(static_cast<std::uint8_t>(v >> shift));
  return *this;
}

ByteWriter& ByteWriter::u64(std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8)
    out_.push_back(static_cast<std::uint8_t>(v >> shift));
  return *this;
}

ByteWriter& ByteWriter::raw(ByteView v) {
  out_.insert(out_.end(), v.begin(), v.end());
  return *this;
}

ByteWriter& ByteWriter::field(ByteView v) {
  if (v.size() > std::numeric_limits<std::uint32_t>::max())
    fail(ErrorCode::kBadRequest, "field too large");
  u32(static_cast<std::uint32_t>(v.size()));
  return raw(v);
}

ByteWriter& ByteWriter::field(std::string_view v) {
  return field(ByteView(reinterpret_cast<const std::uint8_t*>(v.data()), v.size()));
}

void ByteReader::need(std::size_t n) const {
  if (remaining() < n) fail(on_short_, "truncated message");
}

std::uint8_t ByteReader::u8() {
  need(1);
  return in_[pos_++];
}

std::uint32_t ByteReader::u32() {
  need(4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v = v << 8 | in_[pos_++];
  return v;
}

std::uint64_t ByteReader::u64() {
  need(8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = v << 8 | in_[pos_++];
  return v;
}

ByteView ByteReader::raw(std::size_t n) {
  need(n);
  ByteView out = in_.subspan(pos_, n);
  pos_ += n;
  return out;
}

ByteView ByteReader::field() { return raw(u32()); }

std::string ByteReader::field_string() { return to_string(field()); }

void ByteReader::expect_done() const {
  if (!done()) fail(on_short_, "trailing bytes in message");
}

}  // namespace dynenclave
