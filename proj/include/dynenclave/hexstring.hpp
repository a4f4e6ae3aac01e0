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

#ifndef DYNENCLAVE_HEXSTRING_HPP_
#define DYNENCLAVE_HEXSTRING_HPP_

#include <string>
#include <string_view>

#include "dynenclave/bytes.hpp"

namespace dynenclave {

// "\x55\x48\x89..." with lowercase digits.
std::string to_hexstring(ByteView bytes);

// Inverse of to_hexstring. Throws BadHexstring on anything but a run of
// lowercase \xNN tokens.
Bytes from_hexstring(std::string_view text);

}  // namespace dynenclave

#endif  // DYNENCLAVE_HEXSTRING_HPP_
