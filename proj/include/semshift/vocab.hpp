// semshift/vocab.hpp
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

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "semshift/common.hpp"
#include "semshift/corpus.hpp"

namespace semshift {

/// Word to dense-id map with absolute counts and the total token count of the
/// bin it was built from (pre-filter). Ids are assigned by descending count,
/// ties broken lexicographically, so downstream Huffman trees are reproducible.
class Vocabulary {
public:
  Vocabulary() = default;

  /// Builds from (word, count) pairs plus the pre-filter total. Orders ids.
  Vocabulary(std::vector<std::pair<std::string, std::uint64_t>> entries,
             std::uint64_t total_tokens)
      : total_tokens_(total_tokens) {
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    words_.reserve(entries.size());
    counts_.reserve(entries.size());
    for (auto& [word, count] : entries) {
      if (count == 0) throw data_error("vocabulary count must be >= 1: " + word);
      index_.emplace(word, static_cast<std::uint32_t>(words_.size()));
      words_.push_back(std::move(word));
      counts_.push_back(count);
    }
  }

  std::uint32_t size() const { return static_cast<std::uint32_t>(words_.size()); }
  bool contains(std::string_view word) const { return index_.find(std::string(word)) != index_.end(); }

  std::optional<std::uint32_t> id_of(std::string_view word) const {
    auto it = index_.find(std::string(word));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::uint32_t require(std::string_view word) const {
    auto id = id_of(word);
    if (!id) throw data_error("word not in vocabulary: " + std::string(word));
    return *id;
  }

  const std::string& word(std::uint32_t id) const { return words_.at(id); }
  std::uint64_t count(std::uint32_t id) const { return counts_.at(id); }
  std::uint64_t count_of(std::string_view word) const { return counts_.at(require(word)); }
  std::uint64_t total_tokens() const { return total_tokens_; }
  const std::vector<std::string>& words() const { return words_; }
  const std::vector<std::uint64_t>& counts() const { return counts_; }

  /// Relative frequency in occurrences per million tokens.
  double rel_freq(std::uint32_t id) const {
    return static_cast<double>(counts_.at(id)) * 1e6 / static_cast<double>(total_tokens_);
  }
  double rel_freq_of(std::string_view word) const { return rel_freq(require(word)); }

  bool operator==(const Vocabulary& o) const {
    return words_ == o.words_ && counts_ == o.counts_ && total_tokens_ == o.total_tokens_;
  }

private:
  std::vector<std::string> words_;
  std::vector<std::uint64_t> counts_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::uint64_t total_tokens_ = 0;
};

/// Counts the named bin's tokens and keeps words with count >= min_count.
/// rel_freq denominators use the bin's pre-filter total.
inline Vocabulary build_vocab(const TimeBinnedCorpus& corpus, std::string_view bin_label,
                              std::uint64_t min_count = 1) {
  if (min_count < 1) throw data_error("min_count must be >= 1");
  const std::size_t bin = corpus.bin_index(bin_label);
  if (corpus.documents[bin].empty())
    throw data_error("bin '" + std::string(bin_label) + "' is empty");
  std::unordered_map<std::string, std::uint64_t> counts;
  for (const auto& doc : corpus.documents[bin])
    for (const auto& token : doc) ++counts[token];
  std::vector<std::pair<std::string, std::uint64_t>> kept;
  kept.reserve(counts.size());
  for (auto& [word, count] : counts)
    if (count >= min_count) kept.emplace_back(word, count);
  if (kept.empty())
    throw data_error("bin '" + std::string(bin_label) + "': no word reaches min_count");
  return Vocabulary(std::move(kept), corpus.token_counts[bin]);
}

/// Intersection of the reference vocabulary with every other vocabulary.
/// The result carries the reference's counts and total; each source keeps its
/// own counts untouched. Ids are re-densified by descending reference count,
/// ties lexicographic, so the assignment is independent of `others` order.
inline Vocabulary intersect_vocabs(const Vocabulary& reference,
                                   const std::vector<const Vocabulary*>& others) {
  if (others.empty()) throw data_error("intersect_vocabs: need at least one other vocabulary");
  std::vector<std::pair<std::string, std::uint64_t>> kept;
  for (std::uint32_t id = 0; id < reference.size(); ++id) {
    const std::string& w = reference.word(id);
    bool in_all = true;
    for (const Vocabulary* other : others) {
      if (!other->contains(w)) {
        in_all = false;
        break;
      }
    }
    if (in_all) kept.emplace_back(w, reference.count(id));
  }
  if (kept.empty()) throw data_error("intersect_vocabs: empty intersection");
  return Vocabulary(std::move(kept), reference.total_tokens());
}

/// TSV layout: word <TAB> id <TAB> count <TAB> rel_freq_per_million, sorted by
/// id. A leading "# total_tokens=N" comment row carries the denominator.
inline void save_vocab_tsv(const Vocabulary& vocab, const std::string& path) {
  std::ostringstream out;
  out << "# total_tokens=" << vocab.total_tokens() << '\n';
  char buf[64];
  for (std::uint32_t id = 0; id < vocab.size(); ++id) {
    std::snprintf(buf, sizeof(buf), "%.6f", vocab.rel_freq(id));
    out << vocab.word(id) << '\t' << id << '\t' << vocab.count(id) << '\t' << buf << '\n';
  }
  atomic_write_file(path, out.str());
}

inline Vocabulary load_vocab_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open: " + path);
  std::uint64_t total = 0;
  std::vector<std::pair<std::string, std::uint64_t>> entries;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto eq = line.find("total_tokens=");
      if (eq != std::string::npos) total = std::stoull(line.substr(eq + 13));
      continue;
    }
    std::istringstream row(line);
    std::string word, id, count;
    if (!std::getline(row, word, '\t') || !std::getline(row, id, '\t') ||
        !std::getline(row, count, '\t'))
      throw format_error("malformed vocabulary row: " + line);
    entries.emplace_back(word, std::stoull(count));
  }
  if (total == 0) throw format_error("vocabulary file lacks total_tokens header: " + path);
  return Vocabulary(std::move(entries), total);
}

} // namespace semshift
