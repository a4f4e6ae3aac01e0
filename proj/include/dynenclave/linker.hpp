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

#ifndef DYNENCLAVE_LINKER_HPP_
#define DYNENCLAVE_LINKER_HPP_

// Distributed linking. The server publishes an address map; the client
// rewrites calls to mapped names in the payload's C source into calls
// through absolute addresses, so the compiled bytes need no relocations.

#include <string>
#include <string_view>
#include <vector>

#include "dynenclave/address_map.hpp"
#include "dynenclave/elf_object.hpp"
#include "dynenclave/enclave.hpp"

namespace dynenclave {

inline AddressMap build_address_map(const Enclave& enclave) { return enclave.get_fas(); }

// "((int (*)())0x7f1e438179a0ULL)": what a call to `entry` becomes.
std::string call_expression(const AddressMapEntry& entry);

// Replaces every call-position identifier that names a map entry with its
// call expression. Only code inside function bodies is touched; string and
// character literals, comments, preprocessor lines, member accesses,
// prototypes and definitions are left alone. Throws UnbalancedSource on an
// unterminated literal or comment.
std::string rewrite_source(std::string_view c_source, const AddressMap& map);

class UnresolvedSymbols : public Error {
 public:
  explicit UnresolvedSymbols(std::vector<std::string> names);
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
};

// Throws UnresolvedSymbols (code ExternalSymbolUnresolved) unless the
// extracted bytes carry no relocations.
void self_containment_check(const ExtractedFunction& extracted);

}  // namespace dynenclave

#endif  // DYNENCLAVE_LINKER_HPP_
