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

#include "dynenclave/server.hpp"

#include "dynenclave/session.hpp"

namespace dynenclave {

Server::Server(Enclave& enclave, const SigningKey& signing_key, const Endpoint& bind)
    : enclave_(enclave), signing_key_(signing_key), listener_(bind) {}

Server::~Server() { stop(); }

void Server::serve() {
  while (!stopping_.load()) {
    std::optional<Connection> conn = listener_.accept();
    if (!conn) break;
    if (stopping_.load()) break;
    auto shared = std::make_shared<Connection>(std::move(*conn));
    std::lock_guard lock(workers_mu_);
    // Reap finished workers so long-running servers do not accumulate them.
    for (auto it = workers_.begin(); it != workers_.end();) {
      if (it->done->load()) {
        it->thread.join();
        it = workers_.erase(it);
      } else {
        ++it;
      }
    }
    Worker& w = workers_.emplace_back();
    w.conn = shared;
    w.done = std::make_shared<std::atomic<bool>>(false);
    w.thread = std::thread([this, shared, done = w.done] { run_session(shared, *done); });
  }
}

void Server::start() {
  acceptor_ = std::thread([this] { serve(); });
}

void Server::stop() {
  if (stopping_.exchange(true)) {
    if (acceptor_.joinable()) acceptor_.join();
    return;
  }
  listener_.shutdown();
  if (acceptor_.joinable()) acceptor_.join();
  std::list<Worker> workers;
  {
    std::lock_guard lock(workers_mu_);
    workers.swap(workers_);
  }
  for (auto& w : workers) w.conn->shutdown();
  for (auto& w : workers)
    if (w.thread.joinable()) w.thread.join();
}

void Server::run_session(const std::shared_ptr<Connection>& conn, std::atomic<bool>& done) {
  ServerSession session(enclave_, signing_key_, conn->peer());
  try {
    while (session.phase() != Phase::kClosed) {
      std::optional<Frame> in = conn->recv_frame();
      if (!in) break;
      for (const Frame& out : session.handle(*in)) conn->send_frame(out);
    }
  } catch (const std::exception&) {
    // Transport failure or undecodable header: drop the session.
  }
  served_.fetch_add(1);
  conn->shutdown();
  done.store(true);
}

}  // namespace dynenclave
