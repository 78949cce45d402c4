// Shared test fixtures: throwaway directories and tiny corpora.
//
// Copyright 2026 the semshift authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "semshift/corpus.hpp"

namespace testutil {

/// Unique directory under the system temp root, removed on destruction.
class TempDir {
 public:
  TempDir() {
    auto base = std::filesystem::temp_directory_path();
    for (int i = 0; i < 10000; ++i) {
      auto candidate =
          base / ("semshift-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter_++));
      std::error_code ec;
      if (std::filesystem::create_directory(candidate, ec)) {
        path_ = candidate;
        return;
      }
    }
    throw std::runtime_error("could not create temp dir");
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }
  const std::filesystem::path& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  std::filesystem::path path_;
};

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

/// Two-bin corpus from raw token documents.
inline semshift::TimeBinnedCorpus make_corpus(
    const std::vector<std::vector<std::string>>& t1_docs,
    const std::vector<std::vector<std::string>>& t2_docs) {
  semshift::TimeBinnedCorpus corpus;
  corpus.add_bin({"t1", 0, 100});
  corpus.add_bin({"t2", 100, 200});
  for (const auto& doc : t1_docs) corpus.add_document(0, doc);
  for (const auto& doc : t2_docs) corpus.add_document(1, doc);
  return corpus;
}

} // namespace testutil
