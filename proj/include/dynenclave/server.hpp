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

#ifndef DYNENCLAVE_SERVER_HPP_
#define DYNENCLAVE_SERVER_HPP_

#include <atomic>
#include <list>
#include <memory>
#include <mutex>
#include <thread>

#include "dynenclave/attestation.hpp"
#include "dynenclave/enclave.hpp"
#include "dynenclave/transport.hpp"

namespace dynenclave {

// One enclave shared by every connection; each connection runs its own
// ServerSession on its own thread.
class Server {
 public:
  // Throws BindFailure.
  Server(Enclave& enclave, const SigningKey& signing_key, const Endpoint& bind);
  ~Server();

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Accepts until stop(). Blocks.
  void serve();
  // serve() on a background thread.
  void start();
  // Stops accepting, hangs up live sessions and joins their threads.
  void stop();

  Endpoint local() const { return listener_.local(); }
  std::size_t sessions_served() const { return served_.load(); }

 private:
  struct Worker {
    std::shared_ptr<Connection> conn;
    std::shared_ptr<std::atomic<bool>> done;
    std::thread thread;
  };

  void run_session(const std::shared_ptr<Connection>& conn, std::atomic<bool>& done);

  Enclave& enclave_;
  const SigningKey& signing_key_;
  Listener listener_;
  std::atomic<bool> stopping_{false};
  std::atomic<std::size_t> served_{0};
  std::mutex workers_mu_;
  std::list<Worker> workers_;
  std::thread acceptor_;
};

}  // namespace dynenclave

#endif  // DYNENCLAVE_SERVER_HPP_
