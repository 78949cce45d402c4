// semshift/corpus.hpp
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

#include <cctype>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "semshift/common.hpp"

#include "json.hpp"

namespace semshift {

/// A labeled, half-open time range [start_epoch, end_epoch) in Unix seconds.
struct TimeBin {
  std::string label;
  std::int64_t start_epoch = 0;
  std::int64_t end_epoch = 0;

  bool contains(std::int64_t epoch) const {
    return epoch >= start_epoch && epoch < end_epoch;
  }
  bool operator==(const TimeBin&) const = default;
};

/// Tokenized documents partitioned into labeled time bins. Each document
/// belongs to exactly one bin; token_counts[b] equals the sum of document
/// lengths in bin b. Immutable once built; safe to share across threads.
struct TimeBinnedCorpus {
  std::vector<TimeBin> bins;
  // documents[bin][doc] is a token sequence
  std::vector<std::vector<std::vector<std::string>>> documents;
  std::vector<std::uint64_t> token_counts;

  std::size_t bin_count() const { return bins.size(); }

  std::size_t bin_index(std::string_view label) const {
    for (std::size_t i = 0; i < bins.size(); ++i)
      if (bins[i].label == label) return i;
    throw data_error("unknown time bin: " + std::string(label));
  }

  void add_bin(TimeBin bin) {
    if (bin.start_epoch >= bin.end_epoch)
      throw data_error("time bin '" + bin.label + "': start_epoch must precede end_epoch");
    for (const auto& b : bins)
      if (b.label == bin.label)
        throw data_error("duplicate time bin label: " + bin.label);
    bins.push_back(std::move(bin));
    documents.emplace_back();
    token_counts.push_back(0);
  }

  void add_document(std::size_t bin, std::vector<std::string> tokens) {
    if (bin >= bins.size()) throw data_error("bin index out of range");
    if (tokens.empty()) throw data_error("empty documents are not stored");
    token_counts[bin] += tokens.size();
    documents[bin].push_back(std::move(tokens));
  }
};

namespace detail {

inline bool is_ascii_punct(unsigned char c) { return c < 128 && std::ispunct(c); }

} // namespace detail

/// Lowercases, splits on whitespace, and strips leading/trailing ASCII
/// punctuation from each piece. Pieces left empty by stripping are dropped.
/// Bytes outside ASCII pass through untouched, so UTF-8 input stays valid.
inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t start = i;
    while (i < n && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i == start) continue;
    std::size_t lo = start, hi = i;
    while (lo < hi && detail::is_ascii_punct(static_cast<unsigned char>(text[lo]))) ++lo;
    while (hi > lo && detail::is_ascii_punct(static_cast<unsigned char>(text[hi - 1]))) --hi;
    if (lo == hi) continue;
    std::string tok(text.substr(lo, hi - lo));
    for (char& c : tok)
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    tokens.push_back(std::move(tok));
  }
  return tokens;
}

/// Per-file ingestion counters.
struct IngestStats {
  std::uint64_t records = 0;        // lines seen
  std::uint64_t documents = 0;      // documents stored
  std::uint64_t malformed = 0;      // unparseable JSON lines
  std::uint64_t missing_field = 0;  // missing/mistyped text or time field
  std::uint64_t out_of_range = 0;   // timestamp outside every bin
  std::uint64_t empty = 0;          // tokenized to nothing

  IngestStats& operator+=(const IngestStats& o) {
    records += o.records;
    documents += o.documents;
    malformed += o.malformed;
    missing_field += o.missing_field;
    out_of_range += o.out_of_range;
    empty += o.empty;
    return *this;
  }
};

struct IngestResult {
  TimeBinnedCorpus corpus;
  IngestStats stats;
};

/// Reads one JSON object per line, tokenizes `text_field`, and appends the
/// document to the bin of `corpus` containing `time_field`. Malformed lines
/// and lines with a missing or mistyped field are skipped and counted;
/// records whose timestamp falls outside every bin are dropped and counted.
inline IngestStats ingest_jsonl_into(TimeBinnedCorpus& corpus, const std::string& path,
                                     const std::string& text_field = "body",
                                     const std::string& time_field = "created_utc") {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open: " + path);
  IngestStats stats;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++stats.records;
    nlohmann::json rec = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (rec.is_discarded() || !rec.is_object()) {
      ++stats.malformed;
      continue;
    }
    auto text_it = rec.find(text_field);
    auto time_it = rec.find(time_field);
    if (text_it == rec.end() || !text_it->is_string() || time_it == rec.end() ||
        !time_it->is_number()) {
      ++stats.missing_field;
      continue;
    }
    const std::int64_t epoch = time_it->is_number_integer()
                                   ? time_it->get<std::int64_t>()
                                   : static_cast<std::int64_t>(time_it->get<double>());
    std::size_t bin = corpus.bins.size();
    for (std::size_t b = 0; b < corpus.bins.size(); ++b) {
      if (corpus.bins[b].contains(epoch)) {
        bin = b;
        break;
      }
    }
    if (bin == corpus.bins.size()) {
      ++stats.out_of_range;
      continue;
    }
    auto tokens = tokenize(text_it->get<std::string>());
    if (tokens.empty()) {
      ++stats.empty;
      continue;
    }
    corpus.add_document(bin, std::move(tokens));
    ++stats.documents;
  }
  return stats;
}

inline IngestResult ingest_jsonl(const std::string& path, const std::string& text_field,
                                 const std::string& time_field, std::vector<TimeBin> bins) {
  IngestResult result;
  for (auto& b : bins) result.corpus.add_bin(std::move(b));
  result.stats = ingest_jsonl_into(result.corpus, path, text_field, time_field);
  return result;
}

/// Reads plain UTF-8 text, one document per line, into the named bin.
/// Blank lines tokenize to nothing and are dropped (counted in `empty`).
inline IngestStats ingest_text_into(TimeBinnedCorpus& corpus, const std::string& path,
                                    std::string_view bin_label) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open: " + path);
  const std::size_t bin = corpus.bin_index(bin_label);
  IngestStats stats;
  std::string line;
  while (std::getline(in, line)) {
    ++stats.records;
    auto tokens = tokenize(line);
    if (tokens.empty()) {
      ++stats.empty;
      continue;
    }
    corpus.add_document(bin, std::move(tokens));
    ++stats.documents;
  }
  return stats;
}

inline IngestResult ingest_text(const std::string& path, const std::string& bin_label) {
  IngestResult result;
  result.corpus.add_bin(TimeBin{bin_label, 0, 1});
  result.stats = ingest_text_into(result.corpus, path, bin_label);
  return result;
}

/// Writes `<prefix>.bins.tsv` plus one `<prefix>.<label>.txt` per bin with
/// one space-joined document per line. Loading the result back through
/// load_corpus_text reproduces the token sequences exactly.
inline void save_corpus_text(const TimeBinnedCorpus& corpus, const std::string& prefix) {
  std::ostringstream manifest;
  for (const auto& bin : corpus.bins)
    manifest << bin.label << '\t' << bin.start_epoch << '\t' << bin.end_epoch << '\n';
  atomic_write_file(prefix + ".bins.tsv", manifest.str());
  for (std::size_t b = 0; b < corpus.bins.size(); ++b) {
    std::ostringstream out;
    for (const auto& doc : corpus.documents[b]) {
      for (std::size_t t = 0; t < doc.size(); ++t) {
        if (t) out << ' ';
        out << doc[t];
      }
      out << '\n';
    }
    atomic_write_file(prefix + "." + corpus.bins[b].label + ".txt", out.str());
  }
}

inline TimeBinnedCorpus load_corpus_text(const std::string& prefix) {
  std::ifstream manifest(prefix + ".bins.tsv");
  if (!manifest) throw io_error("cannot open: " + prefix + ".bins.tsv");
  TimeBinnedCorpus corpus;
  std::string line;
  while (std::getline(manifest, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    TimeBin bin;
    std::string start, end;
    if (!std::getline(row, bin.label, '\t') || !std::getline(row, start, '\t') ||
        !std::getline(row, end, '\t'))
      throw format_error("malformed bins manifest row: " + line);
    bin.start_epoch = std::stoll(start);
    bin.end_epoch = std::stoll(end);
    corpus.add_bin(std::move(bin));
  }
  for (std::size_t b = 0; b < corpus.bins.size(); ++b) {
    const std::string path = prefix + "." + corpus.bins[b].label + ".txt";
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open: " + path);
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      // Tokens are stored verbatim; split on single spaces without re-tokenizing.
      std::vector<std::string> tokens;
      std::size_t pos = 0;
      while (pos <= line.size()) {
        std::size_t space = line.find(' ', pos);
        if (space == std::string::npos) space = line.size();
        if (space > pos) tokens.emplace_back(line.substr(pos, space - pos));
        pos = space + 1;
      }
      if (!tokens.empty()) corpus.add_document(b, std::move(tokens));
    }
  }
  return corpus;
}

} // namespace semshift
