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

#include "dynenclave/corpus.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dynenclave/hexstring.hpp"
#include "json.hpp"

#ifndef DYNENCLAVE_CORPUS_DIR
#define DYNENCLAVE_CORPUS_DIR "corpus"
#endif

namespace dynenclave {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void bad_manifest(const std::string& why) {
  fail(ErrorCode::kMalformedMap, "corpus manifest: " + why);
}

std::string get_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) bad_manifest(std::string("missing string '") + key + "'");
  return it->get<std::string>();
}

std::optional<std::string> get_optional_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) bad_manifest(std::string("'") + key + "' must be a string or null");
  return it->get<std::string>();
}

ArgValue arg_from_json(const json& a) {
  if (a.is_number_integer()) return ArgValue::integer(a.get<std::int64_t>());
  if (a.is_string()) return ArgValue::string(a.get<std::string>());
  if (a.is_object() && a.contains("hex") && a["hex"].is_string())
    return ArgValue::buffer(from_hex(a["hex"].get<std::string>()));
  bad_manifest("bad argument " + a.dump());
}

}  // namespace

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoError, "cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Corpus Corpus::load(const fs::path& dir) {
  Corpus c;
  c.root_ = dir;
  json j;
  try {
    j = json::parse(read_text_file(dir / "manifest.json"));
  } catch (const json::exception& e) {
    bad_manifest(e.what());
  }
  if (!j.is_object() || !j.contains("entries") || !j["entries"].is_array())
    bad_manifest("expected {\"entries\": [...]}");
  for (const json& e : j["entries"]) {
    if (!e.is_object()) bad_manifest("entry is not an object");
    CorpusEntry entry;
    entry.name = get_string(e, "name");
    entry.source = dir / get_string(e, "source");
    entry.function = get_string(e, "function");
    entry.descriptor = get_string(e, "descriptor");
    if (auto h = get_optional_string(e, "hexstring")) entry.hexstring = dir / *h;
    entry.io = dir / get_string(e, "io");
    if (auto it = e.find("links"); it != e.end()) {
      if (!it->is_array()) bad_manifest("'links' must be an array");
      for (const json& l : *it) {
        if (!l.is_string()) bad_manifest("'links' must hold strings");
        entry.links.push_back(l.get<std::string>());
      }
    }
    if (auto m = get_optional_string(e, "fixture_map")) entry.fixture_map = dir / *m;
    c.entries_.push_back(std::move(entry));
  }
  return c;
}

const CorpusEntry& Corpus::get(std::string_view name) const {
  for (const auto& e : entries_)
    if (e.name == name) return e;
  fail(ErrorCode::kUnknownFunction, "no corpus entry '" + std::string(name) + "'");
}

Bytes Corpus::fixture_bytes(const CorpusEntry& entry) const {
  if (!entry.hexstring) fail(ErrorCode::kIoError, "corpus entry '" + entry.name + "' has no fixture");
  std::string text = read_text_file(*entry.hexstring);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.pop_back();
  return from_hexstring(text);
}

std::string Corpus::source_text(const CorpusEntry& entry) const {
  return read_text_file(entry.source);
}

std::vector<IoCase> Corpus::io_table(const CorpusEntry& entry) const {
  json j;
  try {
    j = json::parse(read_text_file(entry.io));
  } catch (const json::exception& e) {
    bad_manifest(entry.io.string() + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("cases") || !j["cases"].is_array())
    bad_manifest(entry.io.string() + ": expected {\"cases\": [...]}");
  std::vector<IoCase> out;
  for (const json& row : j["cases"]) {
    if (!row.is_object() || !row.contains("args") || !row["args"].is_array() ||
        !row.contains("expect") || !row["expect"].is_number_integer())
      bad_manifest(entry.io.string() + ": bad case " + row.dump());
    IoCase c;
    for (const json& a : row["args"]) c.args.push_back(arg_from_json(a));
    c.expect = row["expect"].get<std::int64_t>();
    out.push_back(std::move(c));
  }
  return out;
}

fs::path default_corpus_dir() {
  if (const char* env = std::getenv("DYNENCLAVE_CORPUS"); env != nullptr && *env != '\0')
    return env;
  return DYNENCLAVE_CORPUS_DIR;
}

}  // namespace dynenclave
