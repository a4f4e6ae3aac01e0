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

#ifndef DYNENCLAVE_CLIENT_HPP_
#define DYNENCLAVE_CLIENT_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dynenclave/address_map.hpp"
#include "dynenclave/attestation.hpp"
#include "dynenclave/channel.hpp"
#include "dynenclave/elf_object.hpp"
#include "dynenclave/protocol.hpp"
#include "dynenclave/transport.hpp"

namespace dynenclave {

struct ClientConfig {
  Endpoint server;
  VerifyKey pinned_verify_key{};
  Measurement expected_measurement{};
};

// An ERROR frame from the server, surfaced with the server's code.
class RemoteError : public Error {
 public:
  RemoteError(ErrorCode code, const std::string& message) : Error(code, message) {}
};

// Attested, encrypted session with a server.
class Client {
 public:
  // Connects, verifies the report and receives the address map. Throws
  // TransportError, BadSignature, NonceMismatch, MeasurementMismatch, or
  // RemoteError if the server refuses the handshake.
  static Client attest(const ClientConfig& config, WireTap tap = {});

  Client(Client&&) = default;
  Client& operator=(Client&&) = default;

  // Latest map seen; refreshed by every mutating request.
  const AddressMap& address_map() const { return map_; }
  const AttestationReport& report() const { return report_; }

  FunctionId load(const std::string& name, const std::string& descriptor, ByteView code);
  protocol::ExecResultMsg exec(FunctionId id, const std::vector<ArgValue>& args);
  void unload(FunctionId id);
  std::size_t clear();
  AddressMap list();

  // Sends one sealed request and returns the sealed replies; for tests
  // that exercise raw message types.
  std::vector<Opened> round_trip(MsgType type, ByteView body, std::size_t replies);

 private:
  Client(Connection conn, ChannelEndpoint channel, AttestationReport report)
      : conn_(std::move(conn)), channel_(std::move(channel)), report_(report) {}

  Opened receive();
  Opened expect(MsgType type);
  void absorb_map(const Opened& msg);

  Connection conn_;
  ChannelEndpoint channel_;
  AttestationReport report_;
  AddressMap map_;
};

// External C compiler invocation.
struct Toolchain {
  std::string cc = "cc";
  std::vector<std::string> flags = {"-c", "-O0", "-fPIC", "-fno-stack-protector",
                                    "-fcf-protection=none"};
  std::filesystem::path workdir;  // empty: a fresh temp directory per build

  // Compiles `source` to an object file and returns its bytes. Throws
  // ToolchainFailure with the compiler's diagnostics.
  Bytes compile(std::string_view source, std::string_view stem = "payload") const;
  bool available() const;
};

// Wraps a pipeline failure with the stage it happened in.
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause)
      : Error(cause.code(), stage + ": " + cause.what()), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct BuiltPayload {
  std::string rewritten_source;
  Bytes object;
  ExtractedFunction function;
};

// rewrite -> compile -> parse -> extract -> self-check. Every failure is a
// StageError naming one of: read, rewrite, compile, parse, extract,
// self-check.
BuiltPayload build_payload(std::string_view c_source, const std::string& function_name,
                           const AddressMap& map, const Toolchain& toolchain);

struct ProvisionResult {
  FunctionId id = 0;
  BuiltPayload payload;
};

// build_payload on the file, then LOAD_FN; the load stage is labelled "load".
ProvisionResult provision_function(Client& client, const std::filesystem::path& source_path,
                                   const std::string& function_name,
                                   const std::string& descriptor, const Toolchain& toolchain);

// Command-line argument to ArgValue: a decimal integer becomes 'i',
// "hex:<digits>" becomes 'b', a double-quoted token or anything else 's'.
ArgValue parse_cli_arg(std::string_view token);

}  // namespace dynenclave

#endif  // DYNENCLAVE_CLIENT_HPP_
