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

#include "dynenclave/client.hpp"

#include <fcntl.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dynenclave/linker.hpp"

extern char** environ;

namespace dynenclave {

namespace fs = std::filesystem;

namespace {

Bytes read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) fail(ErrorCode::kIoError, "cannot read " + p.string());
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

// Runs argv, returns exit status; stderr and stdout go to `log`.
int run_process(const std::vector<std::string>& argv, const fs::path& log) {
  std::vector<char*> cargv;
  for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
  cargv.push_back(nullptr);

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, STDOUT_FILENO, log.c_str(),
                                   O_WRONLY | O_CREAT | O_TRUNC, 0644);
  posix_spawn_file_actions_adddup2(&actions, STDOUT_FILENO, STDERR_FILENO);
  pid_t pid = 0;
  int rc = ::posix_spawnp(&pid, cargv[0], &actions, nullptr, cargv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0) return -1;
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0)
    if (errno != EINTR) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

class TempDir {
 public:
  TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "dynenclave-XXXXXX").string();
    if (::mkdtemp(tmpl.data()) == nullptr) fail(ErrorCode::kIoError, "mkdtemp failed");
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

template <typename Fn>
auto stage(const char* name, Fn&& fn) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(name, e);
  }
}

}  // namespace

Client Client::attest(const ClientConfig& config, WireTap tap) {
  Connection conn = Connection::connect(config.server);
  if (tap) conn.set_tap(std::move(tap));

  KxKeyPair kx = KxKeyPair::generate();
  Nonce nonce = random_nonce();
  conn.send_frame(plaintext_frame(MsgType::kHello, 0,
                                  protocol::encode(protocol::Hello{nonce, kx.public_key})));

  std::optional<Frame> in = conn.recv_frame();
  if (!in) fail(ErrorCode::kTransportError, "server hung up during attestation");
  if (in->type() == MsgType::kError) {
    protocol::ErrorMsg err = protocol::decode_error(in->payload);
    throw RemoteError(err.code, err.message);
  }
  if (in->type() != MsgType::kRaReport || in->seq != 0)
    fail(ErrorCode::kProtocolViolation, "expected RA_REPORT from server");

  AttestationReport report = AttestationReport::decode(in->payload);
  client_verify_report(report, config.pinned_verify_key, config.expected_measurement, nonce);
  SharedSecret secret = key_agreement(kx.secret_key, report.enclave_kx_public);
  SessionKeys keys = derive_session_keys(secret, kx.public_key, report.enclave_kx_public,
                                         Role::kClient);

  Client client(std::move(conn), ChannelEndpoint(keys, Role::kClient), report);
  client.absorb_map(client.expect(MsgType::kAddrMap));
  return client;
}

Opened Client::receive() {
  std::optional<Frame> in = conn_.recv_frame();
  if (!in) fail(ErrorCode::kTransportError, "server closed the connection");
  return channel_.open(*in);
}

Opened Client::expect(MsgType type) {
  Opened msg = receive();
  if (msg.type == MsgType::kError) {
    protocol::ErrorMsg err = protocol::decode_error(msg.plaintext);
    throw RemoteError(err.code, err.message);
  }
  if (msg.type != type)
    fail(ErrorCode::kProtocolViolation, "expected " + std::string(msg_type_name(type)) +
                                            ", got " + std::string(msg_type_name(msg.type)));
  return msg;
}

void Client::absorb_map(const Opened& msg) { map_ = parse_map_json(to_string(msg.plaintext)); }

FunctionId Client::load(const std::string& name, const std::string& descriptor, ByteView code) {
  protocol::LoadFn req{name, descriptor, Bytes(code.begin(), code.end())};
  conn_.send_frame(channel_.seal(MsgType::kLoadFn, protocol::encode(req)));
  FunctionId id = protocol::decode_ack(expect(MsgType::kLoadAck).plaintext);
  absorb_map(expect(MsgType::kAddrMap));
  return id;
}

protocol::ExecResultMsg Client::exec(FunctionId id, const std::vector<ArgValue>& args) {
  conn_.send_frame(channel_.seal(MsgType::kExecFn, protocol::encode(protocol::ExecFn{id, args})));
  return protocol::decode_exec_result(expect(MsgType::kExecResult).plaintext);
}

void Client::unload(FunctionId id) {
  conn_.send_frame(channel_.seal(MsgType::kUnloadFn, protocol::encode_id(id)));
  protocol::decode_ack(expect(MsgType::kLoadAck).plaintext);
  absorb_map(expect(MsgType::kAddrMap));
}

std::size_t Client::clear() {
  conn_.send_frame(channel_.seal(MsgType::kClearFns, {}));
  std::size_t n = protocol::decode_ack(expect(MsgType::kLoadAck).plaintext);
  absorb_map(expect(MsgType::kAddrMap));
  return n;
}

AddressMap Client::list() {
  conn_.send_frame(channel_.seal(MsgType::kListFns, {}));
  absorb_map(expect(MsgType::kAddrMap));
  return map_;
}

std::vector<Opened> Client::round_trip(MsgType type, ByteView body, std::size_t replies) {
  conn_.send_frame(channel_.seal(type, body));
  std::vector<Opened> out;
  for (std::size_t i = 0; i < replies; ++i) out.push_back(receive());
  return out;
}

bool Toolchain::available() const {
  auto words = split_words(cc);
  if (words.empty()) return false;
  TempDir dir;
  std::vector<std::string> argv = words;
  argv.push_back("--version");
  return run_process(argv, dir.path() / "probe.log") == 0;
}

Bytes Toolchain::compile(std::string_view source, std::string_view stem) const {
  std::optional<TempDir> scratch;
  fs::path dir = workdir;
  if (dir.empty()) {
    scratch.emplace();
    dir = scratch->path();
  } else {
    fs::create_directories(dir);
  }
  fs::path src = dir / (std::string(stem) + ".c");
  fs::path obj = dir / (std::string(stem) + ".o");
  fs::path log = dir / (std::string(stem) + ".log");
  {
    std::ofstream out(src, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::kIoError, "cannot write " + src.string());
    out << source;
  }
  std::vector<std::string> argv = split_words(cc);
  if (argv.empty()) fail(ErrorCode::kToolchainFailure, "no C compiler configured");
  argv.insert(argv.end(), flags.begin(), flags.end());
  argv.insert(argv.end(), {"-o", obj.string(), src.string()});

  int rc = run_process(argv, log);
  if (rc != 0) {
    std::string diag;
    std::error_code ec;
    if (fs::exists(log, ec)) diag = to_string(read_file(log));
    fail(ErrorCode::kToolchainFailure,
         (rc < 0 ? "cannot run '" + argv[0] + "'" : argv[0] + " exited with " + std::to_string(rc)) +
             (diag.empty() ? "" : "\n" + diag));
  }
  return read_file(obj);
}

BuiltPayload build_payload(std::string_view c_source, const std::string& function_name,
                           const AddressMap& map, const Toolchain& toolchain) {
  BuiltPayload out;
  out.rewritten_source = stage("rewrite", [&] { return rewrite_source(c_source, map); });
  out.object = stage("compile", [&] { return toolchain.compile(out.rewritten_source, function_name); });
  ObjectImage image = stage("parse", [&] { return parse_object(out.object); });
  out.function = stage("extract", [&] { return extract_function(image, function_name); });
  stage("self-check", [&] {
    self_containment_check(out.function);
    return 0;
  });
  return out;
}

ProvisionResult provision_function(Client& client, const fs::path& source_path,
                                   const std::string& function_name,
                                   const std::string& descriptor, const Toolchain& toolchain) {
  Bytes source = stage("read", [&] { return read_file(source_path); });
  stage("descriptor", [&] { return SignatureDescriptor::parse(descriptor); });
  ProvisionResult out;
  out.payload = build_payload(to_string(source), function_name, client.address_map(), toolchain);
  out.id = stage("load", [&] {
    return client.load(function_name, descriptor, out.payload.function.bytes);
  });
  return out;
}

ArgValue parse_cli_arg(std::string_view token) {
  if (token.size() >= 2 && token.front() == '"' && token.back() == '"')
    return ArgValue::string(token.substr(1, token.size() - 2));
  if (token.starts_with("hex:")) {
    try {
      return ArgValue::buffer(from_hex(token.substr(4)));
    } catch (const Error&) {
      fail(ErrorCode::kUsage, "bad buffer argument '" + std::string(token) + "'");
    }
  }
  std::int64_t v = 0;
  auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), v, 10);
  if (!token.empty() && ec == std::errc{} && end == token.data() + token.size())
    return ArgValue::integer(v);
  return ArgValue::string(token);
}

}  // namespace dynenclave
