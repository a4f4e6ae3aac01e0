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

#ifndef DYNENCLAVE_PROTOCOL_HPP_
#define DYNENCLAVE_PROTOCOL_HPP_

// Message bodies carried inside frames. All integers are big-endian;
// "field" means u32 length followed by that many bytes. See
// docs/protocol.md for the byte layouts.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dynenclave/attestation.hpp"
#include "dynenclave/bytes.hpp"
#include "dynenclave/enclave.hpp"

namespace dynenclave::protocol {

struct Hello {
  Nonce nonce{};
  KxPublicKey client_kx_public{};
};
Bytes encode(const Hello& m);
// Raw fields, unvalidated lengths, so the enclave can report bad keys.
struct HelloFields {
  Bytes nonce;
  Bytes client_kx_public;
};
HelloFields decode_hello(ByteView payload);

struct LoadFn {
  std::string name;
  std::string descriptor;
  Bytes code;
};
Bytes encode(const LoadFn& m);
LoadFn decode_load_fn(ByteView payload);

// LOAD_ACK: one u64. New id for LOAD_FN, the id for UNLOAD_FN, the number
// of removed functions for CLEAR_FNS.
Bytes encode_ack(std::uint64_t value);
std::uint64_t decode_ack(ByteView payload);

struct ExecFn {
  FunctionId id = 0;
  std::vector<ArgValue> args;
};
Bytes encode(const ExecFn& m);
ExecFn decode_exec_fn(ByteView payload);

struct ExecResultMsg {
  std::optional<std::int64_t> return_word;
  std::uint64_t wall_ns = 0;
};
Bytes encode(const ExecResultMsg& m);
ExecResultMsg decode_exec_result(ByteView payload);

Bytes encode_id(FunctionId id);
FunctionId decode_id(ByteView payload);

struct ErrorMsg {
  ErrorCode code = ErrorCode::kOk;
  std::string message;
};
Bytes encode(const ErrorMsg& m);
ErrorMsg decode_error(ByteView payload);

}  // namespace dynenclave::protocol

#endif  // DYNENCLAVE_PROTOCOL_HPP_
