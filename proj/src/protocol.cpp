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

#include "dynenclave/protocol.hpp"

namespace dynenclave::protocol {

Bytes encode(const Hello& m) {
  return ByteWriter().field(m.nonce).field(m.client_kx_public).take();
}

HelloFields decode_hello(ByteView payload) {
  ByteReader r(payload);
  HelloFields h;
  ByteView nonce = r.field();
  ByteView pub = r.field();
  r.expect_done();
  h.nonce.assign(nonce.begin(), nonce.end());
  h.client_kx_public.assign(pub.begin(), pub.end());
  return h;
}

Bytes encode(const LoadFn& m) {
  return ByteWriter().field(m.name).field(m.descriptor).field(m.code).take();
}

LoadFn decode_load_fn(ByteView payload) {
  ByteReader r(payload);
  LoadFn m;
  m.name = r.field_string();
  m.descriptor = r.field_string();
  ByteView code = r.field();
  m.code.assign(code.begin(), code.end());
  r.expect_done();
  return m;
}

Bytes encode_ack(std::uint64_t value) { return ByteWriter().u64(value).take(); }

std::uint64_t decode_ack(ByteView payload) {
  ByteReader r(payload);
  std::uint64_t v = r.u64();
  r.expect_done();
  return v;
}

Bytes encode(const ExecFn& m) {
  ByteWriter w;
  w.u64(m.id).u32(static_cast<std::uint32_t>(m.args.size()));
  for (const ArgValue& a : m.args) {
    w.u8(static_cast<std::uint8_t>(a.kind));
    if (a.kind == ArgKind::kWord)
      w.u64(static_cast<std::uint64_t>(a.word));
    else
      w.field(a.data);
  }
  return std::move(w).take();
}

ExecFn decode_exec_fn(ByteView payload) {
  ByteReader r(payload);
  ExecFn m;
  m.id = r.u64();
  std::uint32_t n = r.u32();
  // Each argument occupies at least 5 bytes; reject absurd counts early.
  if (n > r.remaining() / 5 + 1) fail(ErrorCode::kBadRequest, "argument count exceeds payload");
  for (std::uint32_t i = 0; i < n; ++i) {
    ArgValue a;
    std::uint8_t kind = r.u8();
    switch (kind) {
      case 'i':
        a.kind = ArgKind::kWord;
        a.word = static_cast<std::int64_t>(r.u64());
        break;
      case 's':
      case 'b': {
        a.kind = static_cast<ArgKind>(kind);
        ByteView d = r.field();
        a.data.assign(d.begin(), d.end());
        break;
      }
      default:
        fail(ErrorCode::kBadRequest, "unknown argument kind " + std::to_string(kind));
    }
    m.args.push_back(std::move(a));
  }
  r.expect_done();
  return m;
}

Bytes encode(const ExecResultMsg& m) {
  return ByteWriter()
      .u8(m.return_word ? 1 : 0)
      .u64(static_cast<std::uint64_t>(m.return_word.value_or(0)))
      .u64(m.wall_ns)
      .take();
}

ExecResultMsg decode_exec_result(ByteView payload) {
  ByteReader r(payload);
  ExecResultMsg m;
  std::uint8_t has = r.u8();
  auto word = static_cast<std::int64_t>(r.u64());
  if (has > 1) fail(ErrorCode::kBadRequest, "bad return flag");
  if (has) m.return_word = word;
  m.wall_ns = r.u64();
  r.expect_done();
  return m;
}

Bytes encode_id(FunctionId id) { return ByteWriter().u64(id).take(); }

FunctionId decode_id(ByteView payload) { return decode_ack(payload); }

Bytes encode(const ErrorMsg& m) {
  return ByteWriter().u32(static_cast<std::uint32_t>(m.code)).field(m.message).take();
}

ErrorMsg decode_error(ByteView payload) {
  ByteReader r(payload);
  ErrorMsg m;
  m.code = static_cast<ErrorCode>(r.u32());
  m.message = r.field_string();
  r.expect_done();
  return m;
}

}  // namespace dynenclave::protocol
