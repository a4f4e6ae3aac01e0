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

#ifndef DYNENCLAVE_ERROR_HPP_
#define DYNENCLAVE_ERROR_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dynenclave {

// Stable numeric codes. These travel inside ERROR frames, so values must
// never be renumbered.
enum class ErrorCode : std::uint32_t {
  kOk = 0,

  // enclave core
  kBadDescriptor = 1,
  kOutOfEnclaveMemory = 2,
  kDuplicateName = 3,
  kUnknownFunction = 4,
  kArityMismatch = 5,
  kScratchOverflow = 6,
  kPlatformUnsupported = 7,
  kAllocationFailure = 8,
  kInvalidConfig = 9,

  // attestation
  kInvalidPublicKey = 10,
  kBadSignature = 11,
  kNonceMismatch = 12,
  kMeasurementMismatch = 13,
  kDegenerateSecret = 14,

  // secure channel
  kAuthFailure = 20,
  kReplayOrReorder = 21,
  kMalformedFrame = 22,
  kUnknownType = 23,
  kSequenceExhausted = 24,
  kProtocolViolation = 25,
  kBadRequest = 26,

  // object files
  kNotAnObject = 30,
  kTruncatedObject = 31,
  kUnsupportedClass = 32,
  kSymbolNotFound = 33,
  kNotAFunction = 34,
  kZeroSize = 35,
  kBadHexstring = 36,

  // linking
  kMalformedMap = 40,
  kBadCastString = 41,
  kUnbalancedSource = 42,
  kExternalSymbolUnresolved = 43,

  // process plumbing
  kTransportError = 50,
  kBindFailure = 51,
  kToolchainFailure = 52,
  kIoError = 53,
  kUsage = 54,
};

std::string_view error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace dynenclave

#endif  // DYNENCLAVE_ERROR_HPP_
