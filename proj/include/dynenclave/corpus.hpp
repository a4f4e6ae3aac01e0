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

#ifndef DYNENCLAVE_CORPUS_HPP_
#define DYNENCLAVE_CORPUS_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dynenclave/enclave.hpp"

namespace dynenclave {

// One row of an expected input/output table.
struct IoCase {
  std::vector<ArgValue> args;
  std::int64_t expect = 0;
};

struct CorpusEntry {
  std::string name;
  std::filesystem::path source;
  std::string function;
  std::string descriptor;
  std::optional<std::filesystem::path> hexstring;
  std::filesystem::path io;
  // Address-map names the source calls through.
  std::vector<std::string> links;
  // Map the committed fixture was linked against, if any. Such fixtures
  // carry foreign addresses and are not executable here.
  std::optional<std::filesystem::path> fixture_map;
};

// corpus/manifest.json and the files it points at. Paths are resolved
// against the manifest's directory. Throws IoError or MalformedMap.
class Corpus {
 public:
  static Corpus load(const std::filesystem::path& dir);

  const std::filesystem::path& root() const { return root_; }
  const std::vector<CorpusEntry>& entries() const { return entries_; }
  // Throws UnknownFunction.
  const CorpusEntry& get(std::string_view name) const;

  // Throws IoError, BadHexstring.
  Bytes fixture_bytes(const CorpusEntry& entry) const;
  std::string source_text(const CorpusEntry& entry) const;
  std::vector<IoCase> io_table(const CorpusEntry& entry) const;

 private:
  std::filesystem::path root_;
  std::vector<CorpusEntry> entries_;
};

// $DYNENCLAVE_CORPUS, else the corpus directory of the source tree.
std::filesystem::path default_corpus_dir();

std::string read_text_file(const std::filesystem::path& path);

}  // namespace dynenclave

#endif  // DYNENCLAVE_CORPUS_HPP_
