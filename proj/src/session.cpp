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

#include "dynenclave/session.hpp"

#include "dynenclave/address_map.hpp"
#include "dynenclave/protocol.hpp"

namespace dynenclave {

namespace {

bool is_request(MsgType t) {
  switch (t) {
    case MsgType::kLoadFn:
    case MsgType::kExecFn:
    case MsgType::kUnloadFn:
    case MsgType::kClearFns:
    case MsgType::kListFns:
      return true;
    default:
      return false;
  }
}

}  // namespace

std::string_view phase_name(Phase p) {
  switch (p) {
    case Phase::kAwaitHello: return "AwaitHello";
    case Phase::kServing: return "Serving";
    case Phase::kClosed: return "Closed";
  }
  return "?";
}

std::vector<Frame> ServerSession::handle(const Frame& in) {
  switch (phase_) {
    case Phase::kAwaitHello: return on_hello(in);
    case Phase::kServing: return on_request(in);
    case Phase::kClosed: return {};
  }
  return {};
}

std::vector<Frame> ServerSession::close_plain(ErrorCode code, const std::string& message) {
  phase_ = Phase::kClosed;
  return {plaintext_frame(MsgType::kError, 0, protocol::encode(protocol::ErrorMsg{code, message}))};
}

Frame ServerSession::sealed_error(ErrorCode code, const std::string& message) {
  Bytes body = protocol::encode(protocol::ErrorMsg{code, message});
  return channel_->seal(MsgType::kError, body);
}

Frame ServerSession::address_map_frame() {
  std::string json = render_map_json(enclave_.get_fas());
  return channel_->seal(MsgType::kAddrMap, to_bytes(json));
}

std::vector<Frame> ServerSession::on_hello(const Frame& in) {
  if (in.msg_type != static_cast<std::uint8_t>(MsgType::kHello))
    return close_plain(ErrorCode::kProtocolViolation, "session not attested; send HELLO first");
  if (in.seq != 0) return close_plain(ErrorCode::kReplayOrReorder, "HELLO must carry seq 0");
  try {
    protocol::HelloFields hello = protocol::decode_hello(in.payload);
    RaInitResult ra = enclave_ra_init(enclave_, signing_key_, hello.nonce, hello.client_kx_public);
    channel_.emplace(ra.server_keys, Role::kServer);
    phase_ = Phase::kServing;
    std::vector<Frame> out;
    out.push_back(plaintext_frame(MsgType::kRaReport, 0, ra.report.encode()));
    out.push_back(address_map_frame());
    return out;
  } catch (const Error& e) {
    return close_plain(e.code(), e.what());
  }
}

std::vector<Frame> ServerSession::on_request(const Frame& in) {
  Opened msg;
  try {
    msg = channel_->open(in);
  } catch (const Error& e) {
    // The peer may not hold our keys; still seal, since the ERROR type is
    // never sent in the clear once keys exist.
    std::vector<Frame> out{sealed_error(e.code(), e.what())};
    phase_ = Phase::kClosed;
    return out;
  }
  if (!is_request(msg.type)) {
    std::vector<Frame> out{sealed_error(
        ErrorCode::kProtocolViolation,
        std::string(msg_type_name(msg.type)) + " is not a request")};
    phase_ = Phase::kClosed;
    return out;
  }
  try {
    return dispatch(msg.type, msg.plaintext);
  } catch (const Error& e) {
    return {sealed_error(e.code(), e.what())};
  }
}

std::vector<Frame> ServerSession::dispatch(MsgType type, ByteView body) {
  std::vector<Frame> out;
  switch (type) {
    case MsgType::kLoadFn: {
      protocol::LoadFn req = protocol::decode_load_fn(body);
      auto desc = SignatureDescriptor::parse(req.descriptor);
      FunctionId id = enclave_.register_function(req.code, req.name, desc);
      out.push_back(channel_->seal(MsgType::kLoadAck, protocol::encode_ack(id)));
      out.push_back(address_map_frame());
      break;
    }
    case MsgType::kExecFn: {
      protocol::ExecFn req = protocol::decode_exec_fn(body);
      ExecResult r = enclave_.execute_function(req.id, req.args);
      protocol::ExecResultMsg res{r.return_word, static_cast<std::uint64_t>(r.wall_time.count())};
      out.push_back(channel_->seal(MsgType::kExecResult, protocol::encode(res)));
      break;
    }
    case MsgType::kUnloadFn: {
      FunctionId id = protocol::decode_id(body);
      enclave_.unregister_function(id);
      out.push_back(channel_->seal(MsgType::kLoadAck, protocol::encode_ack(id)));
      out.push_back(address_map_frame());
      break;
    }
    case MsgType::kClearFns: {
      if (!body.empty()) fail(ErrorCode::kBadRequest, "CLEAR_FNS takes no body");
      std::size_t n = enclave_.clear_functions();
      out.push_back(channel_->seal(MsgType::kLoadAck, protocol::encode_ack(n)));
      out.push_back(address_map_frame());
      break;
    }
    case MsgType::kListFns: {
      if (!body.empty()) fail(ErrorCode::kBadRequest, "LIST_FNS takes no body");
      out.push_back(address_map_frame());
      break;
    }
    default:
      fail(ErrorCode::kProtocolViolation, "not a request");
  }
  return out;
}

}  // namespace dynenclave
