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

#include "dynenclave/enclave.hpp"

#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <mutex>
#include <set>

#include "dynenclave/attestation.hpp"

namespace dynenclave {

namespace {

std::size_t align_up(std::size_t n) {
  return (n + kEntryAlignment - 1) & ~(kEntryAlignment - 1);
}

template <typename Fn>
Address address_of(Fn* fn) {
  return reinterpret_cast<Address>(fn);
}

}  // namespace

std::vector<RuntimeEntry> default_runtime_table() {
  return {
      {"strcmp", "int", address_of(&::strcmp)},
      {"strncmp", "int", address_of(&::strncmp)},
      {"strlen", "unsigned long", address_of(&::strlen)},
      {"memcmp", "int", address_of(&::memcmp)},
      {"memcpy", "void *", address_of(&::memcpy)},
      {"memset", "void *", address_of(&::memset)},
      {"snprintf", "int", address_of(&::snprintf)},
      {"vsnprintf", "int", address_of(&::vsnprintf)},
      {"malloc", "void *", address_of(&::malloc)},
      {"calloc", "void *", address_of(&::calloc)},
      {"free", "void", address_of(&::free)},
  };
}

void EnclaveConfig::validate() const {
  if (arena_capacity == 0) fail(ErrorCode::kInvalidConfig, "arena capacity must be > 0");
  if (scratch_capacity == 0) fail(ErrorCode::kInvalidConfig, "scratch capacity must be > 0");
  std::set<std::string> names;
  for (const auto& e : runtime_table) {
    if (!is_c_identifier(e.name))
      fail(ErrorCode::kInvalidConfig, "runtime entry is not a C identifier: " + e.name);
    if (e.address == 0) fail(ErrorCode::kInvalidConfig, "runtime entry without address: " + e.name);
    if (!names.insert(e.name).second)
      fail(ErrorCode::kInvalidConfig, "duplicate runtime entry: " + e.name);
  }
}

Enclave::Enclave(EnclaveConfig config)
    : config_((config.validate(), std::move(config))),
      measurement_(compute_measurement(config_)),
      arena_(config_.arena_capacity) {}

FunctionId Enclave::register_function(ByteView bytes, const std::string& name,
                                      const SignatureDescriptor& descriptor) {
  if (bytes.empty()) fail(ErrorCode::kBadDescriptor, "function bytes are empty");
  if (!is_c_identifier(name))
    fail(ErrorCode::kBadDescriptor, "function name is not a C identifier: '" + name + "'");

  auto lock = write_lock();
  for (const auto& e : config_.runtime_table)
    if (e.name == name) fail(ErrorCode::kDuplicateName, "name taken by runtime table: " + name);
  for (const auto& [id, slot] : slots_)
    if (slot.record.name == name) fail(ErrorCode::kDuplicateName, "function already loaded: " + name);

  std::size_t offset = align_up(cursor_);
  std::size_t reserved = align_up(bytes.size());
  if (offset > config_.arena_capacity || reserved > config_.arena_capacity - offset)
    fail(ErrorCode::kOutOfEnclaveMemory,
         "need " + std::to_string(reserved) + " bytes at offset " + std::to_string(offset) +
             ", capacity " + std::to_string(config_.arena_capacity));

  std::memcpy(arena_.data() + offset, bytes.data(), bytes.size());

  Slot slot;
  slot.offset = offset;
  slot.reserved = reserved;
  slot.record.id = next_id_++;
  slot.record.name = name;
  slot.record.descriptor = descriptor;
  slot.record.bytes.assign(bytes.begin(), bytes.end());
  slot.record.entry = arena_.address() + offset;
  slot.record.size = bytes.size();
  slot.record.loaded_at = std::chrono::steady_clock::now();

  FunctionId id = slot.record.id;
  slots_.emplace(id, std::move(slot));
  cursor_ = offset + reserved;
  return id;
}

AddressMap Enclave::get_fas() const {
  AddressMap map;
  for (const auto& e : config_.runtime_table) map.add({e.name, e.return_type, e.address});
  auto lock = read_lock();
  for (const auto& [id, slot] : slots_)
    map.add({slot.record.name, slot.record.descriptor.c_return_type(), slot.record.entry});
  return map;
}

ExecResult Enclave::execute_function(FunctionId id, std::span<const ArgValue> args) const {
  auto lock = read_lock();
  auto it = slots_.find(id);
  if (it == slots_.end()) fail(ErrorCode::kUnknownFunction, "no function with id " + std::to_string(id));
  const FunctionRecord& rec = it->second.record;
  const auto& kinds = rec.descriptor.args();

  if (args.size() != kinds.size())
    fail(ErrorCode::kArityMismatch, rec.name + " expects " + std::to_string(kinds.size()) +
                                        " arguments (" + rec.descriptor.str() + "), got " +
                                        std::to_string(args.size()));
  std::size_t scratch_needed = 0;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i].kind != kinds[i])
      fail(ErrorCode::kArityMismatch, rec.name + " argument " + std::to_string(i) +
                                          " must be '" + static_cast<char>(kinds[i]) + "' (" +
                                          rec.descriptor.str() + ")");
    if (kinds[i] == ArgKind::kString) scratch_needed += args[i].data.size() + 1;
    if (kinds[i] == ArgKind::kBuffer) scratch_needed += args[i].data.size();
  }
  if (scratch_needed > config_.scratch_capacity)
    fail(ErrorCode::kScratchOverflow, "arguments need " + std::to_string(scratch_needed) +
                                          " scratch bytes, capacity " +
                                          std::to_string(config_.scratch_capacity));
  if (!native_calls_supported())
    fail(ErrorCode::kPlatformUnsupported, "native calls require an x86-64 host");

  // Per-call scratch keeps concurrent executions apart.
  Bytes scratch(scratch_needed);
  std::size_t used = 0;
  CallWords words{};
  std::size_t w = 0;
  for (const ArgValue& a : args) {
    switch (a.kind) {
      case ArgKind::kWord:
        words[w++] = static_cast<std::uint64_t>(a.word);
        break;
      case ArgKind::kString:
        std::memcpy(scratch.data() + used, a.data.data(), a.data.size());
        scratch[used + a.data.size()] = 0;
        words[w++] = reinterpret_cast<std::uint64_t>(scratch.data() + used);
        used += a.data.size() + 1;
        break;
      case ArgKind::kBuffer:
        if (!a.data.empty()) std::memcpy(scratch.data() + used, a.data.data(), a.data.size());
        words[w++] = reinterpret_cast<std::uint64_t>(scratch.data() + used);
        words[w++] = a.data.size();
        used += a.data.size();
        break;
    }
  }

  auto start = std::chrono::steady_clock::now();
  std::uint64_t rax = call_native(rec.entry, words);
  auto stop = std::chrono::steady_clock::now();

  ExecResult result;
  result.wall_time = std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start);
  if (rec.descriptor.ret() == ReturnKind::kWord) result.return_word = static_cast<std::int64_t>(rax);
  return result;
}

void Enclave::unregister_function(FunctionId id) {
  auto lock = write_lock();
  auto it = slots_.find(id);
  if (it == slots_.end()) fail(ErrorCode::kUnknownFunction, "no function with id " + std::to_string(id));
  std::memset(arena_.data() + it->second.offset, 0, it->second.reserved);
  slots_.erase(it);
  trim_cursor();
}

void Enclave::trim_cursor() {
  std::size_t end = 0;
  for (const auto& [id, slot] : slots_) end = std::max(end, slot.offset + slot.reserved);
  cursor_ = end;
}

std::size_t Enclave::clear_functions() {
  auto lock = write_lock();
  std::size_t n = slots_.size();
  std::memset(arena_.data(), 0, cursor_);
  slots_.clear();
  cursor_ = 0;
  return n;
}

std::optional<FunctionRecord> Enclave::find(FunctionId id) const {
  auto lock = read_lock();
  auto it = slots_.find(id);
  if (it == slots_.end()) return std::nullopt;
  return it->second.record;
}

std::vector<FunctionRecord> Enclave::functions() const {
  auto lock = read_lock();
  std::vector<FunctionRecord> out;
  out.reserve(slots_.size());
  for (const auto& [id, slot] : slots_) out.push_back(slot.record);
  return out;
}

ArenaStats Enclave::arena() const {
  auto lock = read_lock();
  return {arena_.address(), config_.arena_capacity, cursor_};
}

Bytes Enclave::arena_bytes(std::size_t offset, std::size_t n) const {
  auto lock = read_lock();
  if (offset > config_.arena_capacity || n > config_.arena_capacity - offset)
    fail(ErrorCode::kOutOfEnclaveMemory, "arena read out of range");
  return Bytes(arena_.data() + offset, arena_.data() + offset + n);
}

}  // namespace dynenclave
