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

#ifndef DYNENCLAVE_ADDRESS_MAP_HPP_
#define DYNENCLAVE_ADDRESS_MAP_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dynenclave/bytes.hpp"

namespace dynenclave {

struct AddressMapEntry {
  std::string name;
  std::string return_type;  // C type name, e.g. "int" or "void *"
  std::uint64_t address = 0;

  friend bool operator==(const AddressMapEntry&, const AddressMapEntry&) = default;
};

// Name -> (return type, address) table that clients link their payloads
// against. Order is preserved; names are unique.
class AddressMap {
 public:
  AddressMap() = default;

  // Throws MalformedMap on a duplicate name, an invalid identifier, or a
  // zero address.
  void add(AddressMapEntry entry);

  const std::vector<AddressMapEntry>& entries() const { return entries_; }
  const AddressMapEntry* find(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name) != nullptr; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  friend bool operator==(const AddressMap&, const AddressMap&) = default;

 private:
  std::vector<AddressMapEntry> entries_;
};

bool is_c_identifier(std::string_view s);

// "(*(int(*)(0x7f1e438179a0)))": the wire form of one entry's value.
std::string render_cast_string(const AddressMapEntry& entry);
// Recovers (return type, address); throws BadCastString.
AddressMapEntry parse_cast_string(std::string_view name, std::string_view cast);

// JSON object of name -> cast string.
std::string render_map_json(const AddressMap& map);
// Throws MalformedMap (not an object of strings, bad names) or BadCastString.
AddressMap parse_map_json(std::string_view json);

}  // namespace dynenclave

#endif  // DYNENCLAVE_ADDRESS_MAP_HPP_
