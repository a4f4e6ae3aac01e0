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

#include "dynenclave/address_map.hpp"

#include <charconv>
#include <cstdio>

#include "json.hpp"

namespace dynenclave {

namespace {

constexpr std::string_view kCastPrefix = "(*(";
constexpr std::string_view kCastMiddle = "(*)(0x";
constexpr std::string_view kCastSuffix = ")))";

bool is_ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }

std::string_view trim(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return s;
}

// Return types are C type names: identifiers, spaces and pointer stars.
bool is_type_name(std::string_view s) {
  if (s.empty() || !is_ident_start(s.front())) return false;
  for (char c : s)
    if (!is_ident_char(c) && c != ' ' && c != '*') return false;
  return true;
}

}  // namespace

bool is_c_identifier(std::string_view s) {
  if (s.empty() || !is_ident_start(s.front())) return false;
  for (char c : s)
    if (!is_ident_char(c)) return false;
  return true;
}

void AddressMap::add(AddressMapEntry entry) {
  if (!is_c_identifier(entry.name))
    fail(ErrorCode::kMalformedMap, "not a C identifier: '" + entry.name + "'");
  if (entry.address == 0)
    fail(ErrorCode::kMalformedMap, "null address for '" + entry.name + "'");
  if (contains(entry.name))
    fail(ErrorCode::kMalformedMap, "duplicate map entry '" + entry.name + "'");
  entries_.push_back(std::move(entry));
}

const AddressMapEntry* AddressMap::find(std::string_view name) const {
  for (const auto& e : entries_)
    if (e.name == name) return &e;
  return nullptr;
}

std::string render_cast_string(const AddressMapEntry& entry) {
  char hex[24];
  std::snprintf(hex, sizeof hex, "%llx", static_cast<unsigned long long>(entry.address));
  std::string out;
  out += kCastPrefix;
  out += entry.return_type;
  out += kCastMiddle;
  out += hex;
  out += kCastSuffix;
  return out;
}

AddressMapEntry parse_cast_string(std::string_view name, std::string_view cast) {
  auto bad = [&](const char* why) -> void {
    fail(ErrorCode::kBadCastString,
         "bad cast string for '" + std::string(name) + "': " + why + " in '" +
             std::string(cast) + "'");
  };
  if (!cast.starts_with(kCastPrefix) || !cast.ends_with(kCastSuffix)) bad("wrong framing");
  std::string_view inner = cast.substr(kCastPrefix.size(),
                                       cast.size() - kCastPrefix.size() - kCastSuffix.size());
  auto mid = inner.rfind(kCastMiddle);
  if (mid == std::string_view::npos) bad("missing (*)(0x");
  std::string_view type = trim(inner.substr(0, mid));
  std::string_view digits = inner.substr(mid + kCastMiddle.size());
  if (!is_type_name(type)) bad("bad return type");
  if (digits.empty() || digits.size() > 16) bad("bad address");

  std::uint64_t address = 0;
  auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), address, 16);
  if (ec != std::errc{} || end != digits.data() + digits.size()) bad("bad address");
  for (char c : digits)
    if (c >= 'A' && c <= 'F') bad("uppercase address digits");
  if (address == 0) bad("null address");
  return {std::string(name), std::string(type), address};
}

std::string render_map_json(const AddressMap& map) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& e : map.entries()) j[e.name] = render_cast_string(e);
  return j.dump(2);
}

AddressMap parse_map_json(std::string_view json) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(json);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kMalformedMap, std::string("address map is not JSON: ") + e.what());
  }
  if (!j.is_object()) fail(ErrorCode::kMalformedMap, "address map must be a JSON object");
  AddressMap map;
  for (const auto& [name, value] : j.items()) {
    if (!value.is_string())
      fail(ErrorCode::kMalformedMap, "value for '" + name + "' is not a string");
    if (!is_c_identifier(name))
      fail(ErrorCode::kMalformedMap, "not a C identifier: '" + name + "'");
    map.add(parse_cast_string(name, value.get<std::string>()));
  }
  return map;
}

}  // namespace dynenclave
