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

#include "dynenclave/native_code.hpp"

#include <sys/mman.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <string>
#include <utility>

namespace dynenclave {

ExecRegion::ExecRegion(std::size_t size) {
  if (size == 0) fail(ErrorCode::kInvalidConfig, "executable region of size 0");
  void* p = ::mmap(nullptr, size, PROT_READ | PROT_WRITE | PROT_EXEC,
                   MAP_PRIVATE | MAP_ANONYMOUS | MAP_NORESERVE, -1, 0);
  if (p == MAP_FAILED) {
    int err = errno;
    if (err == EACCES || err == EPERM)
      fail(ErrorCode::kPlatformUnsupported,
           "host refuses executable anonymous memory: " + std::string(std::strerror(err)));
    fail(ErrorCode::kAllocationFailure,
         "mmap of " + std::to_string(size) + " bytes failed: " + std::strerror(err));
  }
  base_ = static_cast<std::uint8_t*>(p);
  size_ = size;
}

ExecRegion::~ExecRegion() { release(); }

ExecRegion::ExecRegion(ExecRegion&& other) noexcept
    : base_(std::exchange(other.base_, nullptr)),
      size_(std::exchange(other.size_, 0)) {}

ExecRegion& ExecRegion::operator=(ExecRegion&& other) noexcept {
  if (this != &other) {
    release();
    base_ = std::exchange(other.base_, nullptr);
    size_ = std::exchange(other.size_, 0);
  }
  return *this;
}

void ExecRegion::release() noexcept {
  if (base_ != nullptr) ::munmap(base_, size_);
  base_ = nullptr;
  size_ = 0;
}

bool native_calls_supported() {
#if defined(__x86_64__)
  return true;
#else
  return false;
#endif
}

std::uint64_t call_native(Address entry, const CallWords& words) {
#if defined(__x86_64__)
  using Fn = std::uint64_t (*)(std::uint64_t, std::uint64_t, std::uint64_t, std::uint64_t);
  auto fn = reinterpret_cast<Fn>(entry);
  return fn(words[0], words[1], words[2], words[3]);
#else
  (void)entry;
  (void)words;
  fail(ErrorCode::kPlatformUnsupported, "native calls require an x86-64 host");
#endif
}

DirectFunction::DirectFunction(ByteView code)
    : region_(std::max<std::size_t>(code.size(), 1)) {
  if (code.empty()) fail(ErrorCode::kBadDescriptor, "empty function bytes");
  std::memcpy(region_.data(), code.data(), code.size());
}

}  // namespace dynenclave
