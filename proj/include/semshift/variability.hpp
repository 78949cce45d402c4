// semshift/variability.hpp
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
#include <cstdio>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "semshift/common.hpp"
#include "semshift/corpus.hpp"
#include "semshift/embedding.hpp"

namespace semshift {

/// Mean embedding of the in-vocabulary tokens around one occurrence of the
/// target word. occurrence_id = (document index in the bin, token offset).
struct ContextVector {
  std::vector<float> vector;
  std::size_t doc_index = 0;
  std::size_t token_offset = 0;
  std::uint32_t n_context_tokens = 0;
};

struct ContextVectors {
  std::vector<ContextVector> used;
  std::uint64_t n_occurrences = 0;
  std::uint64_t n_skipped = 0;  // occurrences with zero usable context tokens
};

/// One context vector per occurrence of the word in the bin: up to `window`
/// raw token positions each side within the document, skipping the target
/// position itself; out-of-vocabulary tokens occupy window slots but do not
/// enter the mean. Occurrences whose window holds no in-vocabulary token are
/// skipped and counted.
inline ContextVectors context_vectors(const TimeBinnedCorpus& corpus, std::string_view bin_label,
                                      std::string_view word, const EmbeddingModel& model,
                                      std::uint32_t window = 5) {
  if (window < 1) throw data_error("context_vectors: window must be >= 1");
  const std::size_t bin = corpus.bin_index(bin_label);
  ContextVectors result;
  const std::size_t dim = model.dim;
  std::vector<double> acc(dim);
  const auto& docs = corpus.documents[bin];
  for (std::size_t d = 0; d < docs.size(); ++d) {
    const auto& doc = docs[d];
    for (std::size_t i = 0; i < doc.size(); ++i) {
      if (doc[i] != word) continue;
      ++result.n_occurrences;
      std::fill(acc.begin(), acc.end(), 0.0);
      std::uint32_t used_tokens = 0;
      const std::size_t lo = i > window ? i - window : 0;
      const std::size_t hi = std::min(doc.size() - 1, i + window);
      for (std::size_t j = lo; j <= hi; ++j) {
        if (j == i) continue;
        const auto id = model.vocab.id_of(doc[j]);
        if (!id) continue;
        const auto vec = model.vector_of(*id);
        for (std::size_t k = 0; k < dim; ++k) acc[k] += vec[k];
        ++used_tokens;
      }
      if (used_tokens == 0) {
        ++result.n_skipped;
        continue;
      }
      ContextVector cv;
      cv.doc_index = d;
      cv.token_offset = i;
      cv.n_context_tokens = used_tokens;
      cv.vector.resize(dim);
      for (std::size_t k = 0; k < dim; ++k)
        cv.vector[k] = static_cast<float>(acc[k] / used_tokens);
      result.used.push_back(std::move(cv));
    }
  }
  if (result.n_occurrences == 0)
    throw data_error("context_vectors: word does not occur in bin '" + std::string(bin_label) +
                     "': " + std::string(word));
  return result;
}

/// Average pairwise cosine distance over the context vectors, after a seeded
/// uniform subsample of max_contexts when there are more. Vectors are put in
/// canonical occurrence order before sampling, so the result is independent
/// of input order.
inline double contextual_variability(std::span<const ContextVector> contexts,
                                     std::uint32_t max_contexts, std::uint64_t seed) {
  if (contexts.size() < 2)
    throw data_error("contextual_variability: need at least 2 context vectors");
  if (max_contexts < 2) throw data_error("contextual_variability: max_contexts must be >= 2");
  std::vector<const ContextVector*> ordered;
  ordered.reserve(contexts.size());
  for (const auto& cv : contexts) ordered.push_back(&cv);
  std::sort(ordered.begin(), ordered.end(), [](const ContextVector* a, const ContextVector* b) {
    if (a->doc_index != b->doc_index) return a->doc_index < b->doc_index;
    return a->token_offset < b->token_offset;
  });
  if (ordered.size() > max_contexts) {
    std::vector<const ContextVector*> sampled;
    sampled.reserve(max_contexts);
    std::mt19937_64 rng(seed);
    std::sample(ordered.begin(), ordered.end(), std::back_inserter(sampled), max_contexts, rng);
    ordered = std::move(sampled);
  }
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t a = 0; a < ordered.size(); ++a)
    for (std::size_t b = a + 1; b < ordered.size(); ++b) {
      sum += cosine_distance(std::span<const float>(ordered[a]->vector),
                             std::span<const float>(ordered[b]->vector));
      ++pairs;
    }
  return sum / static_cast<double>(pairs);
}

struct VariabilityRow {
  std::string word;
  double variability = 0.0;
  std::uint64_t n_occurrences = 0;
  std::uint64_t n_used = 0;
  std::uint64_t n_skipped = 0;
};

struct VariabilityReport {
  std::vector<VariabilityRow> rows;                          // input word order
  std::vector<std::pair<std::string, std::string>> failed;   // word, reason
};

/// Contextual variability for each word over the given bin. Per-word
/// failures (too few occurrences, absent word) are recorded rather than
/// aborting the batch. The subsample generator is re-seeded per word from
/// the word's name, so the report is a deterministic function of
/// (corpus, model, parameters, seed) only.
inline VariabilityReport variability_report(const TimeBinnedCorpus& corpus,
                                            std::string_view bin_label,
                                            const std::vector<std::string>& words,
                                            const EmbeddingModel& model, std::uint32_t window = 5,
                                            std::uint32_t max_contexts = 200,
                                            std::uint64_t seed = 1) {
  VariabilityReport report;
  for (const auto& word : words) {
    try {
      ContextVectors cvs = context_vectors(corpus, bin_label, word, model, window);
      if (cvs.used.size() < 2)
        throw data_error("fewer than 2 usable occurrences");
      VariabilityRow row;
      row.word = word;
      row.n_occurrences = cvs.n_occurrences;
      row.n_used = cvs.used.size();
      row.n_skipped = cvs.n_skipped;
      row.variability = contextual_variability(cvs.used, max_contexts,
                                               seed ^ detail::fnv1a64(word));
      report.rows.push_back(std::move(row));
    } catch (const error& e) {
      report.failed.emplace_back(word, e.what());
    }
  }
  return report;
}

/// TSV: word, variability, n_occurrences, n_used, n_skipped.
inline void save_variability_tsv(const VariabilityReport& report, const std::string& path) {
  std::string out = "# word\tvariability\tn_occurrences\tn_used\tn_skipped\n";
  char buf[96];
  for (const auto& row : report.rows) {
    out += row.word;
    std::snprintf(buf, sizeof buf, "\t%.6f\t%llu\t%llu\t%llu\n", row.variability,
                  static_cast<unsigned long long>(row.n_occurrences),
                  static_cast<unsigned long long>(row.n_used),
                  static_cast<unsigned long long>(row.n_skipped));
    out += buf;
  }
  atomic_write_file(path, out);
}

} // namespace semshift
