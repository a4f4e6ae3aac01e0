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

#include <signal.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "dynenclave/attestation.hpp"
#include "dynenclave/cli.hpp"
#include "dynenclave/enclave.hpp"
#include "dynenclave/server.hpp"

namespace {

std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v != nullptr && *v != '\0' ? std::string(v) : fallback;
}

void write_line(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) dynenclave::fail(dynenclave::ErrorCode::kIoError, "cannot write " + path);
  f << text << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  using namespace dynenclave;

  CLI::App app{"Serves one simulated enclave to attested clients.", "dynenclave-server"};
  std::string bind = env_or("DYNENCLAVE_BIND", "127.0.0.1:7878");
  std::size_t capacity_mib = std::stoul(env_or("DYNENCLAVE_CAPACITY_MIB", "128"));
  std::size_t scratch_kib = 1024;
  std::string key_path = env_or("DYNENCLAVE_SIGNING_KEY", "");
  std::string keygen_path, runtime = env_or("DYNENCLAVE_RUNTIME_TABLE", "default");
  std::string image_id = "dynenclave-core-v1";
  std::string verify_key_out, measurement_out;

  app.add_option("--bind", bind, "listen address host:port; port 0 picks one (env DYNENCLAVE_BIND)")
      ->capture_default_str();
  app.add_option("--capacity-mib", capacity_mib, "executable arena size (env DYNENCLAVE_CAPACITY_MIB)")
      ->capture_default_str();
  app.add_option("--scratch-kib", scratch_kib, "per-call argument scratch limit")->capture_default_str();
  app.add_option("--signing-key", key_path,
                 "report signing key file; a fresh key is used if unset (env DYNENCLAVE_SIGNING_KEY)");
  app.add_option("--keygen", keygen_path, "write a new signing key here, print its verify key, exit");
  app.add_option("--runtime-table", runtime, "default or none (env DYNENCLAVE_RUNTIME_TABLE)")
      ->check(CLI::IsMember({"default", "none"}))
      ->capture_default_str();
  app.add_option("--core-image-id", image_id, "identity string folded into the measurement")
      ->capture_default_str();
  app.add_option("--verify-key-out", verify_key_out, "also write the verify key (hex) to this file");
  app.add_option("--measurement-out", measurement_out, "also write the measurement (hex) to this file");
  CLI11_PARSE(app, argc, argv);

  try {
    crypto_init();
    if (!keygen_path.empty()) {
      SigningKey k = SigningKey::generate();
      k.save(keygen_path);
      std::cout << "verify-key " << to_hex(k.verify_key()) << '\n';
      return kExitOk;
    }

    SigningKey key = key_path.empty() ? SigningKey::generate() : SigningKey::load(key_path);
    EnclaveConfig cfg;
    cfg.arena_capacity = capacity_mib * kMiB;
    cfg.scratch_capacity = scratch_kib * 1024;
    cfg.core_image_id = to_bytes(image_id);
    if (runtime == "default") cfg.runtime_table = default_runtime_table();
    Enclave enclave(cfg);

    // Signals go to the waiting main thread only.
    sigset_t stop_signals;
    sigemptyset(&stop_signals);
    sigaddset(&stop_signals, SIGINT);
    sigaddset(&stop_signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);

    Server server(enclave, key, Endpoint::parse(bind));
    std::string vk = to_hex(key.verify_key());
    std::string m = to_hex(enclave.measurement());
    if (!verify_key_out.empty()) write_line(verify_key_out, vk);
    if (!measurement_out.empty()) write_line(measurement_out, m);
    std::cout << "verify-key " << vk << '\n'
              << "measurement " << m << '\n'
              << "listening " << server.local().str() << '\n'
              << std::flush;
    server.start();

    int sig = 0;
    sigwait(&stop_signals, &sig);
    server.stop();
    std::cout << "stopped after " << server.sessions_served() << " sessions\n";
    return kExitOk;
  } catch (const Error& e) {
    std::cerr << "error [" << error_name(e.code()) << "]: " << e.what() << '\n';
    return exit_code_for(e);
  }
}
