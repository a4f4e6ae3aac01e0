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

#ifndef DYNENCLAVE_ENCLAVE_HPP_
#define DYNENCLAVE_ENCLAVE_HPP_

#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <mutex>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

#include "dynenclave/address_map.hpp"
#include "dynenclave/bytes.hpp"
#include "dynenclave/descriptor.hpp"
#include "dynenclave/native_code.hpp"

namespace dynenclave {

inline constexpr std::size_t kMiB = std::size_t{1} << 20;
inline constexpr std::size_t kDefaultArenaCapacity = 128 * kMiB;
inline constexpr std::size_t kDefaultScratchCapacity = 1 * kMiB;
inline constexpr std::size_t kEntryAlignment = 16;

using FunctionId = std::uint64_t;
using Measurement = std::array<std::uint8_t, 32>;

// Trusted helper exposed to payloads through the address map.
struct RuntimeEntry {
  std::string name;
  std::string return_type;
  Address address = 0;
};

// A curated slice of libc standing in for the trusted libc.
std::vector<RuntimeEntry> default_runtime_table();

struct EnclaveConfig {
  std::size_t arena_capacity = kDefaultArenaCapacity;
  std::size_t scratch_capacity = kDefaultScratchCapacity;
  Bytes core_image_id = to_bytes("dynenclave-core-v1");
  std::vector<RuntimeEntry> runtime_table;

  // Throws InvalidConfig.
  void validate() const;
};

struct FunctionRecord {
  FunctionId id = 0;
  std::string name;
  SignatureDescriptor descriptor;
  Bytes bytes;
  Address entry = 0;
  std::size_t size = 0;
  std::chrono::steady_clock::time_point loaded_at;
};

// One call argument. `word` is used for kWord, `data` for kString/kBuffer.
struct ArgValue {
  ArgKind kind = ArgKind::kWord;
  std::int64_t word = 0;
  Bytes data;

  static ArgValue integer(std::int64_t v) { return {ArgKind::kWord, v, {}}; }
  static ArgValue string(std::string_view s) { return {ArgKind::kString, 0, to_bytes(s)}; }
  static ArgValue buffer(Bytes b) { return {ArgKind::kBuffer, 0, std::move(b)}; }

  friend bool operator==(const ArgValue&, const ArgValue&) = default;
};

struct ExecResult {
  std::optional<std::int64_t> return_word;
  std::chrono::nanoseconds wall_time{0};
};

struct ArenaStats {
  Address base = 0;
  std::size_t capacity = 0;
  std::size_t cursor = 0;
};

// The simulated enclave: an executable bump arena plus the function
// registry. Lookups and executions share a reader lock; register,
// unregister and clear take it exclusively.
class Enclave {
 public:
  // Throws InvalidConfig, PlatformUnsupported or AllocationFailure.
  explicit Enclave(EnclaveConfig config);

  Enclave(const Enclave&) = delete;
  Enclave& operator=(const Enclave&) = delete;

  // Copies `bytes` to the next 16-byte boundary of the arena. Throws
  // BadDescriptor (empty bytes, bad name), DuplicateName or
  // OutOfEnclaveMemory; on error nothing changes.
  FunctionId register_function(ByteView bytes, const std::string& name,
                               const SignatureDescriptor& descriptor);

  // Runtime table followed by live user functions in load order.
  AddressMap get_fas() const;

  // Throws UnknownFunction, ArityMismatch, ScratchOverflow,
  // PlatformUnsupported.
  ExecResult execute_function(FunctionId id, std::span<const ArgValue> args) const;

  // Zeroes the function's bytes. Trailing free space is handed back to the
  // bump cursor; interior holes stay zeroed and unused.
  void unregister_function(FunctionId id);

  std::size_t clear_functions();

  std::optional<FunctionRecord> find(FunctionId id) const;
  std::vector<FunctionRecord> functions() const;
  ArenaStats arena() const;
  // Copy of the arena bytes [offset, offset + n), for consistency checks.
  Bytes arena_bytes(std::size_t offset, std::size_t n) const;

  const EnclaveConfig& config() const { return config_; }
  const Measurement& measurement() const { return measurement_; }

 private:
  struct Slot {
    FunctionRecord record;
    std::size_t offset = 0;
    std::size_t reserved = 0;  // size rounded up to kEntryAlignment
  };

  void trim_cursor();

  // Readers pass through gate_ so a waiting writer is not starved by a
  // steady stream of executions.
  std::shared_lock<std::shared_mutex> read_lock() const {
    { std::lock_guard g(gate_); }
    return std::shared_lock(mu_);
  }
  std::unique_lock<std::shared_mutex> write_lock() {
    std::lock_guard g(gate_);
    return std::unique_lock(mu_);
  }

  EnclaveConfig config_;
  Measurement measurement_{};
  ExecRegion arena_;

  mutable std::mutex gate_;
  mutable std::shared_mutex mu_;
  std::map<FunctionId, Slot> slots_;
  std::size_t cursor_ = 0;
  FunctionId next_id_ = 1;
};

}  // namespace dynenclave

#endif  // DYNENCLAVE_ENCLAVE_HPP_
