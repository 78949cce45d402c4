// semshift/shift.hpp
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
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "semshift/common.hpp"
#include "semshift/embedding.hpp"
#include "semshift/vocab.hpp"

namespace semshift {

/// Relative-frequency movement of one word between the two bins.
/// log_ratio = ln((rel_freq_t2 + eps) / (rel_freq_t1 + eps)) with frequencies
/// and eps in occurrences per million tokens.
struct FreqDelta {
  std::string word;
  double rel_freq_t1 = 0.0;
  double rel_freq_t2 = 0.0;
  double log_ratio = 0.0;
  double z = 0.0;
};

enum class Region : std::uint8_t {
  unflagged,
  true_positive,
  false_positive_region,
  false_negative_region,
};

inline std::string_view region_name(Region r) {
  switch (r) {
    case Region::true_positive: return "true_positive";
    case Region::false_positive_region: return "false_positive_region";
    case Region::false_negative_region: return "false_negative_region";
    case Region::unflagged: return "unflagged";
  }
  throw data_error("unknown region");
}

struct ShiftRecord {
  std::string word;
  double cosine = 0.0;
  std::optional<double> variability;
  std::uint64_t freq_t1 = 0;
  std::uint64_t freq_t2 = 0;
  std::optional<double> z;
  Region region = Region::unflagged;
};

/// Cosine distance between the word's input vectors in the two snapshots.
/// Symmetric in its model arguments.
inline double shift_score(const EmbeddingModel& model_t1, const EmbeddingModel& model_t2,
                          std::string_view word) {
  if (model_t1.dim != model_t2.dim)
    throw data_error("shift_score: models have different dimensions");
  return cosine_distance(model_t1.vector_of(word), model_t2.vector_of(word));
}

/// Score every word and sort by cosine descending, ties lexicographically.
/// Frequency columns come from the models' shared vocabulary unless per-bin
/// vocabularies are supplied.
inline std::vector<ShiftRecord> rank_shifts(const EmbeddingModel& model_t1,
                                            const EmbeddingModel& model_t2,
                                            const std::vector<std::string>& words,
                                            const Vocabulary* vocab_t1 = nullptr,
                                            const Vocabulary* vocab_t2 = nullptr) {
  if (model_t1.dim != model_t2.dim)
    throw data_error("rank_shifts: models have different dimensions");
  std::vector<ShiftRecord> records;
  records.reserve(words.size());
  for (const auto& word : words) {
    ShiftRecord rec;
    rec.word = word;
    rec.cosine = shift_score(model_t1, model_t2, word);
    rec.freq_t1 = (vocab_t1 ? *vocab_t1 : model_t1.vocab).count_of(word);
    rec.freq_t2 = (vocab_t2 ? *vocab_t2 : model_t2.vocab).count_of(word);
    records.push_back(std::move(rec));
  }
  std::stable_sort(records.begin(), records.end(), [](const ShiftRecord& a, const ShiftRecord& b) {
    if (a.cosine != b.cosine) return a.cosine > b.cosine;
    return a.word < b.word;
  });
  return records;
}

/// Candidate selection: content words present in both bins whose t2 absolute
/// frequency lies in [min_abs, max_abs], standardized by the log-ratio of
/// their per-million frequencies, keeping those z_threshold population SDs
/// above the mean. Smoothing eps = 1 per million. When standardize_over_band
/// is false the mean/SD come from all in-both-bins content words instead of
/// the frequency band.
inline std::vector<FreqDelta> candidate_words(const Vocabulary& vocab_t1,
                                              const Vocabulary& vocab_t2,
                                              const std::unordered_set<std::string>& content_words,
                                              double z_threshold = 2.0,
                                              std::uint64_t min_abs = 50,
                                              std::uint64_t max_abs = 500,
                                              bool standardize_over_band = true) {
  if (content_words.empty()) throw data_error("candidate_words: empty content-word list");
  if (min_abs > max_abs) throw data_error("candidate_words: min_abs > max_abs");
  constexpr double kEps = 1.0;  // per million

  std::vector<FreqDelta> band;       // the [min_abs, max_abs] population
  std::vector<double> standardize;   // log_ratios the mean/SD are taken over
  for (const auto& word : vocab_t2.words()) {
    if (!content_words.contains(word)) continue;
    const auto id1 = vocab_t1.id_of(word);
    if (!id1) continue;
    const std::uint64_t abs_t2 = vocab_t2.count_of(word);
    FreqDelta d;
    d.word = word;
    d.rel_freq_t1 = vocab_t1.rel_freq(*id1);
    d.rel_freq_t2 = vocab_t2.rel_freq_of(word);
    d.log_ratio = std::log((d.rel_freq_t2 + kEps) / (d.rel_freq_t1 + kEps));
    const bool in_band = abs_t2 >= min_abs && abs_t2 <= max_abs;
    if (!standardize_over_band || in_band) standardize.push_back(d.log_ratio);
    if (in_band) band.push_back(std::move(d));
  }
  if (standardize.size() < 2 || band.size() < 2)
    throw data_error("candidate_words: population smaller than 2, SD undefined");
  double mean = 0.0;
  for (double v : standardize) mean += v;
  mean /= static_cast<double>(standardize.size());
  double ss = 0.0;
  for (double v : standardize) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(standardize.size()));
  if (sd == 0.0)
    throw numeric_error("candidate_words: zero variance in log-ratios");

  std::vector<FreqDelta> selected;
  for (auto& d : band) {
    d.z = (d.log_ratio - mean) / sd;
    if (d.z >= z_threshold) selected.push_back(std::move(d));
  }
  std::sort(selected.begin(), selected.end(), [](const FreqDelta& a, const FreqDelta& b) {
    if (a.z != b.z) return a.z > b.z;
    return a.word < b.word;
  });
  return selected;
}

/// Label the regions of the score-vs-index plane: a high human index with a
/// low cosine is the detector missing a shift; a zero index with a high
/// cosine is a spurious detection.
inline std::vector<ShiftRecord> classify_regions(
    std::vector<ShiftRecord> records, const std::unordered_map<std::string, double>& index,
    double index_hi = 0.5, double cos_hi = 0.25) {
  for (auto& rec : records) {
    auto it = index.find(rec.word);
    if (it == index.end())
      throw data_error("classify_regions: no shift index for word: " + rec.word);
    const double idx = it->second;
    if (idx > index_hi && rec.cosine < cos_hi)
      rec.region = Region::false_negative_region;
    else if (idx == 0.0 && rec.cosine > cos_hi)
      rec.region = Region::false_positive_region;
    else if (idx > index_hi && rec.cosine >= cos_hi)
      rec.region = Region::true_positive;
    else
      rec.region = Region::unflagged;
  }
  return records;
}

namespace detail {

inline void append_tsv_real(std::string& out, double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  out += buf;
}

inline void append_tsv_optional(std::string& out, const std::optional<double>& v) {
  if (v)
    append_tsv_real(out, *v);
  else
    out += "NA";
}

} // namespace detail

/// TSV: word, cosine, variability, freq_t1, freq_t2, z, region. Missing
/// optional fields are written as NA.
inline void save_shift_tsv(const std::vector<ShiftRecord>& records, const std::string& path) {
  std::string out = "# word\tcosine\tvariability\tfreq_t1\tfreq_t2\tz\tregion\n";
  for (const auto& rec : records) {
    out += rec.word;
    out += '\t';
    detail::append_tsv_real(out, rec.cosine);
    out += '\t';
    detail::append_tsv_optional(out, rec.variability);
    out += '\t';
    out += std::to_string(rec.freq_t1);
    out += '\t';
    out += std::to_string(rec.freq_t2);
    out += '\t';
    detail::append_tsv_optional(out, rec.z);
    out += '\t';
    out += region_name(rec.region);
    out += '\n';
  }
  atomic_write_file(path, out);
}

/// Two-column scatter data keyed by word, for external plotting.
inline void save_scatter_tsv(const std::string& path, std::string_view x_name,
                             std::string_view y_name,
                             const std::vector<std::tuple<std::string, double, double>>& rows) {
  std::string out = "# word\t";
  out += x_name;
  out += '\t';
  out += y_name;
  out += '\n';
  for (const auto& [word, x, y] : rows) {
    out += word;
    out += '\t';
    detail::append_tsv_real(out, x);
    out += '\t';
    detail::append_tsv_real(out, y);
    out += '\n';
  }
  atomic_write_file(path, out);
}

} // namespace semshift
