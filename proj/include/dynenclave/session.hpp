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

#ifndef DYNENCLAVE_SESSION_HPP_
#define DYNENCLAVE_SESSION_HPP_

#include <optional>
#include <string>
#include <vector>

#include "dynenclave/attestation.hpp"
#include "dynenclave/channel.hpp"
#include "dynenclave/enclave.hpp"

namespace dynenclave {

enum class Phase { kAwaitHello, kServing, kClosed };

std::string_view phase_name(Phase p);

// Server half of one client session, independent of the transport.
//
//   AwaitHello --HELLO--> Serving   (replies RA_REPORT, then sealed ADDR_MAP)
//   AwaitHello --other--> Closed    (plaintext ERROR)
//   Serving --request--> Serving    (reply, or sealed ERROR on enclave errors)
//   Serving --violation--> Closed   (sealed ERROR when keys allow it)
class ServerSession {
 public:
  ServerSession(Enclave& enclave, const SigningKey& signing_key, std::string peer = {})
      : enclave_(enclave), signing_key_(signing_key), peer_(std::move(peer)) {}

  // Frames to send back, in order. Never throws for protocol-level
  // problems; check phase() afterwards to see whether to hang up.
  std::vector<Frame> handle(const Frame& in);

  Phase phase() const { return phase_; }
  const std::string& peer() const { return peer_; }

 private:
  std::vector<Frame> on_hello(const Frame& in);
  std::vector<Frame> on_request(const Frame& in);
  std::vector<Frame> dispatch(MsgType type, ByteView body);
  Frame sealed_error(ErrorCode code, const std::string& message);
  std::vector<Frame> close_plain(ErrorCode code, const std::string& message);
  Frame address_map_frame();

  Enclave& enclave_;
  const SigningKey& signing_key_;
  std::string peer_;
  Phase phase_ = Phase::kAwaitHello;
  std::optional<ChannelEndpoint> channel_;
};

}  // namespace dynenclave

#endif  // DYNENCLAVE_SESSION_HPP_
