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

#ifndef DYNENCLAVE_TRANSPORT_HPP_
#define DYNENCLAVE_TRANSPORT_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "dynenclave/bytes.hpp"
#include "dynenclave/channel.hpp"

namespace dynenclave {

struct Endpoint {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;

  // "host:port"; throws Usage.
  static Endpoint parse(std::string_view text);
  std::string str() const { return host + ":" + std::to_string(port); }
};

enum class Direction { kSent, kReceived };
// Observes raw bytes on the wire, e.g. for transcript checks.
using WireTap = std::function<void(Direction, ByteView)>;

// Connected TCP stream carrying frames. Closes on destruction.
class Connection {
 public:
  Connection() = default;
  explicit Connection(int fd, std::string peer = {}) : fd_(fd), peer_(std::move(peer)) {}
  ~Connection();
  Connection(Connection&& other) noexcept;
  Connection& operator=(Connection&& other) noexcept;
  Connection(const Connection&) = delete;
  Connection& operator=(const Connection&) = delete;

  // Throws TransportError.
  static Connection connect(const Endpoint& ep);

  void send_frame(const Frame& frame);
  // nullopt on orderly EOF before a frame starts. Throws TransportError on
  // I/O errors or EOF mid-frame, MalformedFrame on bad headers.
  std::optional<Frame> recv_frame();

  void set_tap(WireTap tap) { tap_ = std::move(tap); }
  void shutdown();
  bool is_open() const { return fd_ >= 0; }
  const std::string& peer() const { return peer_; }

 private:
  void close() noexcept;
  bool read_exact(std::uint8_t* dst, std::size_t n, bool eof_ok);

  int fd_ = -1;
  std::string peer_;
  WireTap tap_;
};

class Listener {
 public:
  // Throws BindFailure. Port 0 picks an ephemeral port.
  explicit Listener(const Endpoint& ep);
  ~Listener();
  Listener(const Listener&) = delete;
  Listener& operator=(const Listener&) = delete;

  // nullopt once shutdown() has been called.
  std::optional<Connection> accept();
  void shutdown();
  Endpoint local() const { return local_; }

 private:
  int fd_ = -1;
  Endpoint local_;
};

}  // namespace dynenclave

#endif  // DYNENCLAVE_TRANSPORT_HPP_
