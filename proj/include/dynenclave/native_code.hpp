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

#ifndef DYNENCLAVE_NATIVE_CODE_HPP_
#define DYNENCLAVE_NATIVE_CODE_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

#include "dynenclave/bytes.hpp"

namespace dynenclave {

using Address = std::uint64_t;
using CallWords = std::array<std::uint64_t, 4>;

// Anonymous read/write/execute mapping, unmapped on destruction.
class ExecRegion {
 public:
  // Throws PlatformUnsupported if the host refuses an executable mapping,
  // AllocationFailure on other mmap failures.
  explicit ExecRegion(std::size_t size);
  ~ExecRegion();

  ExecRegion(ExecRegion&& other) noexcept;
  ExecRegion& operator=(ExecRegion&& other) noexcept;
  ExecRegion(const ExecRegion&) = delete;
  ExecRegion& operator=(const ExecRegion&) = delete;

  std::uint8_t* data() { return base_; }
  const std::uint8_t* data() const { return base_; }
  std::size_t size() const { return size_; }
  Address address() const { return reinterpret_cast<Address>(base_); }
  std::span<std::uint8_t> span() { return {base_, size_}; }

 private:
  void release() noexcept;

  std::uint8_t* base_ = nullptr;
  std::size_t size_ = 0;
};

// True on hosts where loaded payloads can be called (x86-64 SysV).
bool native_calls_supported();

// Calls the code at `entry` with four integer-class words (rdi, rsi, rdx,
// rcx) and returns rax. Callees taking fewer arguments ignore the rest.
// Throws PlatformUnsupported on other architectures.
std::uint64_t call_native(Address entry, const CallWords& words);

// Copies `code` into its own executable region and calls it directly; the
// in-process baseline used by the benchmark and the execution oracle tests.
class DirectFunction {
 public:
  explicit DirectFunction(ByteView code);
  std::uint64_t operator()(const CallWords& words) const {
    return call_native(region_.address(), words);
  }
  Address entry() const { return region_.address(); }

 private:
  ExecRegion region_;
};

}  // namespace dynenclave

#endif  // DYNENCLAVE_NATIVE_CODE_HPP_
