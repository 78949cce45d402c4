// semshift/synth.hpp
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
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "semshift/common.hpp"
#include "semshift/corpus.hpp"
#include "semshift/embedding.hpp"
#include "semshift/shift.hpp"
#include "semshift/stats.hpp"
#include "semshift/variability.hpp"
#include "semshift/vocab.hpp"

namespace semshift {

/// Planted behaviors: `shift` words change topic between bins, `referential`
/// words keep their topic but collapse into a handful of fixed context
/// frames in t2, `stable` words change nothing.
enum class PseudoKind : std::uint8_t { shift, referential, stable };

inline std::string_view kind_name(PseudoKind k) {
  switch (k) {
    case PseudoKind::shift: return "shift";
    case PseudoKind::referential: return "referential";
    case PseudoKind::stable: return "stable";
  }
  throw data_error("unknown pseudoword kind");
}

inline PseudoKind kind_from_name(std::string_view name) {
  if (name == "shift") return PseudoKind::shift;
  if (name == "referential") return PseudoKind::referential;
  if (name == "stable") return PseudoKind::stable;
  throw data_error("unknown pseudoword kind: " + std::string(name));
}

struct PseudowordSpec {
  std::string name;
  PseudoKind kind = PseudoKind::stable;
  std::uint32_t occurrences = 200;  // per bin
};

struct SynthSpec {
  std::uint32_t n_topics = 10;
  std::uint32_t topic_vocab_size = 500;
  std::uint32_t n_documents = 50000;  // per bin, before referential frame docs
  double doc_len_mean = 20.0;
  double doc_len_sd = 5.0;
  std::vector<PseudowordSpec> pseudowords;
  std::uint64_t seed = 42;

  void validate() const {
    if (n_topics < 2) throw data_error("synth spec: n_topics must be >= 2");
    if (topic_vocab_size < 10) throw data_error("synth spec: topic_vocab_size must be >= 10");
    if (n_documents < n_topics) throw data_error("synth spec: n_documents must be >= n_topics");
    if (!(doc_len_mean >= 5.0)) throw data_error("synth spec: doc_len_mean must be >= 5");
    if (!(doc_len_sd >= 0.0)) throw data_error("synth spec: doc_len_sd must be >= 0");
    if (pseudowords.empty()) throw data_error("synth spec: no pseudowords");
    std::map<std::string, int> seen;
    for (const auto& pw : pseudowords) {
      if (pw.name.empty() || pw.name.find_first_of(" \t\n") != std::string::npos)
        throw data_error("synth spec: bad pseudoword name: '" + pw.name + "'");
      if (++seen[pw.name] > 1)
        throw data_error("synth spec: duplicate pseudoword name: " + pw.name);
      if (pw.occurrences < 10)
        throw data_error("synth spec: pseudoword '" + pw.name +
                         "' needs >= 10 occurrences per bin");
    }
    // Insertion capacity: each occurrence of a stable/shift pseudoword claims
    // one distinct document of its topic in that bin.
    const auto capacity = [&](std::uint32_t topic) {
      return std::uint64_t(n_documents / n_topics) + (topic < n_documents % n_topics ? 1 : 0);
    };
    std::map<std::pair<int, std::uint32_t>, std::uint64_t> demand;  // (bin, topic) -> docs
    for (std::size_t i = 0; i < pseudowords.size(); ++i) {
      const auto& pw = pseudowords[i];
      const std::uint32_t topic_a = static_cast<std::uint32_t>(i % n_topics);
      const std::uint32_t topic_b = (topic_a + std::max<std::uint32_t>(1, n_topics / 2)) % n_topics;
      demand[{0, topic_a}] += pw.occurrences;
      if (pw.kind == PseudoKind::stable) demand[{1, topic_a}] += pw.occurrences;
      if (pw.kind == PseudoKind::shift) demand[{1, topic_b}] += pw.occurrences;
      // referential pseudowords emit standalone frame documents in t2
    }
    for (const auto& [key, need] : demand)
      if (need > capacity(key.second))
        throw data_error("synth spec infeasible: topic " + std::to_string(key.second) + " in " +
                         (key.first == 0 ? "t1" : "t2") + " has " +
                         std::to_string(capacity(key.second)) + " documents but " +
                         std::to_string(need) + " pseudoword occurrences to place");
  }
};

inline SynthSpec default_synth_spec() {
  SynthSpec spec;
  char name[32];
  for (int k = 0; k < 3; ++k) {
    const PseudoKind kind = static_cast<PseudoKind>(k);
    for (int i = 0; i < 10; ++i) {
      std::snprintf(name, sizeof name, "pw_%s_%02d", std::string(kind_name(kind)).c_str(), i);
      spec.pseudowords.push_back({name, kind, 200});
    }
  }
  return spec;
}

/// Key-value spec file: `key = value` lines, '#' comments. Keys: n_topics,
/// topic_vocab_size, n_documents, doc_len_mean, doc_len_sd, seed,
/// pseudowords_per_kind, occurrences, and repeatable
/// `pseudoword = name,kind,occurrences` lines that replace the generated set.
inline SynthSpec parse_synth_spec(const std::string& text) {
  SynthSpec spec;
  std::uint32_t per_kind = 10;
  std::uint32_t occurrences = 200;
  std::vector<PseudowordSpec> explicit_words;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw format_error("synth spec line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "n_topics") spec.n_topics = static_cast<std::uint32_t>(std::stoul(value));
      else if (key == "topic_vocab_size") spec.topic_vocab_size = static_cast<std::uint32_t>(std::stoul(value));
      else if (key == "n_documents") spec.n_documents = static_cast<std::uint32_t>(std::stoul(value));
      else if (key == "doc_len_mean") spec.doc_len_mean = std::stod(value);
      else if (key == "doc_len_sd") spec.doc_len_sd = std::stod(value);
      else if (key == "seed") spec.seed = std::stoull(value);
      else if (key == "pseudowords_per_kind") per_kind = static_cast<std::uint32_t>(std::stoul(value));
      else if (key == "occurrences") occurrences = static_cast<std::uint32_t>(std::stoul(value));
      else if (key == "pseudoword") {
        const auto c1 = value.find(',');
        const auto c2 = value.find(',', c1 == std::string::npos ? c1 : c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
          throw format_error("expected name,kind,occurrences");
        PseudowordSpec pw;
        pw.name = trim(value.substr(0, c1));
        pw.kind = kind_from_name(trim(value.substr(c1 + 1, c2 - c1 - 1)));
        pw.occurrences = static_cast<std::uint32_t>(std::stoul(trim(value.substr(c2 + 1))));
        explicit_words.push_back(std::move(pw));
      } else {
        throw format_error("unknown key '" + key + "'");
      }
    } catch (const std::logic_error&) {
      throw format_error("synth spec line " + std::to_string(lineno) + ": bad value for '" +
                         key + "': " + value);
    }
  }
  if (!explicit_words.empty()) {
    spec.pseudowords = std::move(explicit_words);
  } else {
    char name[32];
    for (int k = 0; k < 3; ++k) {
      const PseudoKind kind = static_cast<PseudoKind>(k);
      for (std::uint32_t i = 0; i < per_kind; ++i) {
        std::snprintf(name, sizeof name, "pw_%s_%02u", std::string(kind_name(kind)).c_str(), i);
        spec.pseudowords.push_back({name, kind, occurrences});
      }
    }
  }
  spec.validate();
  return spec;
}

inline SynthSpec load_synth_spec(const std::string& path) {
  return parse_synth_spec(read_entire_file(path));
}

struct SynthResult {
  TimeBinnedCorpus corpus;
  std::map<std::string, PseudoKind> gold;
};

/// Deterministic two-bin corpus of unigram topic documents with the spec's
/// pseudowords planted. Documents cycle through topics; token draws follow a
/// Zipf law over each topic's private vocabulary, so topics stay disjoint.
inline SynthResult generate(const SynthSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);

  std::vector<std::vector<std::string>> topic_words(spec.n_topics);
  for (std::uint32_t t = 0; t < spec.n_topics; ++t) {
    topic_words[t].reserve(spec.topic_vocab_size);
    for (std::uint32_t k = 0; k < spec.topic_vocab_size; ++k)
      topic_words[t].push_back("t" + std::to_string(t) + "w" + std::to_string(k));
  }
  std::vector<double> zipf(spec.topic_vocab_size);
  for (std::uint32_t k = 0; k < spec.topic_vocab_size; ++k) zipf[k] = 1.0 / (k + 1.0);
  std::discrete_distribution<std::uint32_t> word_dist(zipf.begin(), zipf.end());
  std::normal_distribution<double> len_dist(spec.doc_len_mean, spec.doc_len_sd);

  const auto sample_length = [&] {
    const double raw = std::round(len_dist(rng));
    return static_cast<std::size_t>(std::max(5.0, raw));
  };

  // Base documents, both bins; document d belongs to topic d % n_topics.
  std::array<std::vector<std::vector<std::string>>, 2> docs;
  for (int bin = 0; bin < 2; ++bin) {
    docs[bin].resize(spec.n_documents);
    for (std::uint32_t d = 0; d < spec.n_documents; ++d) {
      const std::uint32_t topic = d % spec.n_topics;
      const std::size_t len = sample_length();
      auto& doc = docs[bin][d];
      doc.reserve(len + 1);
      for (std::size_t i = 0; i < len; ++i) doc.push_back(topic_words[topic][word_dist(rng)]);
    }
  }

  // Shuffled per-(bin, topic) pools of host documents; each insertion takes
  // the next unused document so no document hosts two pseudoword tokens.
  std::array<std::vector<std::vector<std::uint32_t>>, 2> pools;
  std::array<std::vector<std::size_t>, 2> cursor;
  for (int bin = 0; bin < 2; ++bin) {
    pools[bin].resize(spec.n_topics);
    cursor[bin].assign(spec.n_topics, 0);
    for (std::uint32_t d = 0; d < spec.n_documents; ++d)
      pools[bin][d % spec.n_topics].push_back(d);
    for (auto& pool : pools[bin]) std::shuffle(pool.begin(), pool.end(), rng);
  }
  const auto insert_occurrence = [&](int bin, std::uint32_t topic, const std::string& word) {
    auto& pool = pools[bin][topic];
    auto& cur = cursor[bin][topic];
    if (cur >= pool.size())
      throw data_error("synth generate: topic " + std::to_string(topic) + " exhausted");
    auto& doc = docs[bin][pool[cur++]];
    std::uniform_int_distribution<std::size_t> pos(0, doc.size());
    doc.insert(doc.begin() + static_cast<std::ptrdiff_t>(pos(rng)), word);
  };

  SynthResult result;
  std::array<std::vector<std::vector<std::string>>, 2> extra_docs;  // referential frames
  for (std::size_t i = 0; i < spec.pseudowords.size(); ++i) {
    const auto& pw = spec.pseudowords[i];
    result.gold[pw.name] = pw.kind;
    const std::uint32_t topic_a = static_cast<std::uint32_t>(i % spec.n_topics);
    const std::uint32_t topic_b =
        (topic_a + std::max<std::uint32_t>(1, spec.n_topics / 2)) % spec.n_topics;
    switch (pw.kind) {
      case PseudoKind::stable:
        for (std::uint32_t o = 0; o < pw.occurrences; ++o) insert_occurrence(0, topic_a, pw.name);
        for (std::uint32_t o = 0; o < pw.occurrences; ++o) insert_occurrence(1, topic_a, pw.name);
        break;
      case PseudoKind::shift:
        for (std::uint32_t o = 0; o < pw.occurrences; ++o) insert_occurrence(0, topic_a, pw.name);
        for (std::uint32_t o = 0; o < pw.occurrences; ++o) insert_occurrence(1, topic_b, pw.name);
        break;
      case PseudoKind::referential: {
        for (std::uint32_t o = 0; o < pw.occurrences; ++o) insert_occurrence(0, topic_a, pw.name);
        // t2: at most 5 fixed 10-token frames from the same topic, each
        // occurrence a standalone frame document with the word in the middle.
        // The frames are variants of one template, differing in a single slot:
        // independently sampled frames would let training pull each frame's
        // words into a private cluster (the frame repeats verbatim), inflating
        // the word's contextual variability instead of narrowing it.
        const std::uint32_t n_frames = std::min<std::uint32_t>(5, pw.occurrences);
        std::vector<std::string> base(10);
        for (auto& token : base) token = topic_words[topic_a][word_dist(rng)];
        const std::size_t slot = std::uniform_int_distribution<std::size_t>(0, 9)(rng);
        std::vector<std::vector<std::string>> frames(n_frames, base);
        std::set<std::string> fillers;
        for (auto& frame : frames) {
          std::string token;
          do token = topic_words[topic_a][word_dist(rng)];
          while (!fillers.insert(token).second);
          frame[slot] = token;
        }
        for (std::uint32_t o = 0; o < pw.occurrences; ++o) {
          const auto& frame = frames[o % n_frames];
          std::vector<std::string> doc(frame.begin(), frame.begin() + 5);
          doc.push_back(pw.name);
          doc.insert(doc.end(), frame.begin() + 5, frame.end());
          extra_docs[1].push_back(std::move(doc));
        }
        break;
      }
    }
  }

  result.corpus.add_bin({"t1", 0, 1});
  result.corpus.add_bin({"t2", 1, 2});
  for (int bin = 0; bin < 2; ++bin) {
    for (auto& doc : docs[bin]) result.corpus.add_document(bin, std::move(doc));
    for (auto& doc : extra_docs[bin]) result.corpus.add_document(bin, std::move(doc));
  }
  return result;
}

/// Gold labels, TSV `word<TAB>kind`.
inline void save_gold_tsv(const std::map<std::string, PseudoKind>& gold, const std::string& path) {
  std::string out = "# word\tkind\n";
  for (const auto& [word, kind] : gold) {
    out += word;
    out += '\t';
    out += kind_name(kind);
    out += '\n';
  }
  atomic_write_file(path, out);
}

inline std::map<std::string, PseudoKind> load_gold_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open: " + path);
  std::map<std::string, PseudoKind> gold;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw format_error(path + ":" + std::to_string(lineno) + ": expected word<TAB>kind");
    gold[line.substr(0, tab)] = kind_from_name(line.substr(tab + 1));
  }
  if (gold.empty()) throw format_error(path + ": no gold labels");
  return gold;
}

struct BenchmarkConfig {
  TrainParams train{.dim = 100};
  std::uint32_t min_count = 5;
  std::uint32_t variability_window = 5;
  std::uint32_t max_contexts = 200;
  std::uint64_t variability_seed = 1;
};

struct KindSummary {
  PseudoKind kind = PseudoKind::stable;
  std::size_t n = 0;
  double mean_cosine = 0.0;
  double sd_cosine = 0.0;  // population SD
  double mean_variability = 0.0;
  double sd_variability = 0.0;
};

struct BenchmarkReport {
  std::vector<ShiftRecord> records;  // pseudowords, cosine descending
  std::vector<KindSummary> kinds;    // shift, referential, stable order
  std::optional<double> auc_cosine_shift_vs_stable;
  std::optional<MannWhitneyResult> variability_ref_below_shift;
  std::optional<PearsonResult> variability_vs_shift_label;     // all pseudowords
  std::optional<PearsonResult> variability_vs_cosine_nonshift; // stable + referential
  TrainStats train_t1;
  TrainStats train_t2;
  double seconds = 0.0;
};

/// Full pipeline over a generated corpus: per-bin vocabularies, intersection,
/// t1 training, chained t2 training, cosine scoring and t2 contextual
/// variability for every pseudoword, then the separation statistics the
/// planted kinds are designed to exercise.
inline BenchmarkReport score_benchmark(const TimeBinnedCorpus& corpus,
                                       const std::map<std::string, PseudoKind>& gold,
                                       const BenchmarkConfig& config = {}) {
  if (corpus.bins.size() < 2)
    throw data_error("score_benchmark: corpus needs two bins");
  if (gold.empty()) throw data_error("score_benchmark: empty gold map");
  const auto start = std::chrono::steady_clock::now();
  const std::string& label_t1 = corpus.bins[0].label;
  const std::string& label_t2 = corpus.bins[1].label;

  const Vocabulary vocab_t1 = build_vocab(corpus, label_t1, config.min_count);
  const Vocabulary vocab_t2 = build_vocab(corpus, label_t2, config.min_count);
  const Vocabulary shared = intersect_vocabs(vocab_t1, {&vocab_t2});

  std::vector<std::string> words;
  words.reserve(gold.size());
  for (const auto& [word, kind] : gold) {
    if (!shared.contains(word))
      throw data_error("score_benchmark: pseudoword below min_count or missing: " + word);
    words.push_back(word);
  }

  BenchmarkReport report;
  EmbeddingModel m1 = init_random(shared, config.train);
  report.train_t1 = train(m1, corpus, label_t1, config.train);
  EmbeddingModel m2 = init_from(m1, shared);
  report.train_t2 = train(m2, corpus, label_t2, config.train);

  report.records = rank_shifts(m1, m2, words, &vocab_t1, &vocab_t2);

  const VariabilityReport vrep =
      variability_report(corpus, label_t2, words, m2, config.variability_window,
                         config.max_contexts, config.variability_seed);
  if (!vrep.failed.empty())
    throw data_error("score_benchmark: variability failed for '" + vrep.failed.front().first +
                     "': " + vrep.failed.front().second);
  std::map<std::string, double> variability;
  for (const auto& row : vrep.rows) variability[row.word] = row.variability;
  for (auto& rec : report.records) rec.variability = variability.at(rec.word);

  std::map<PseudoKind, std::vector<double>> cosines, variabilities;
  for (const auto& rec : report.records) {
    const PseudoKind kind = gold.at(rec.word);
    cosines[kind].push_back(rec.cosine);
    variabilities[kind].push_back(*rec.variability);
  }
  const auto summarize = [](std::span<const double> v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::pair{mean, std::sqrt(ss / static_cast<double>(v.size()))};
  };
  for (PseudoKind kind : {PseudoKind::shift, PseudoKind::referential, PseudoKind::stable}) {
    auto it = cosines.find(kind);
    if (it == cosines.end()) continue;
    KindSummary s;
    s.kind = kind;
    s.n = it->second.size();
    std::tie(s.mean_cosine, s.sd_cosine) = summarize(it->second);
    std::tie(s.mean_variability, s.sd_variability) = summarize(variabilities.at(kind));
    report.kinds.push_back(s);
  }

  if (cosines.contains(PseudoKind::shift) && cosines.contains(PseudoKind::stable))
    report.auc_cosine_shift_vs_stable =
        ranking_auc(cosines.at(PseudoKind::shift), cosines.at(PseudoKind::stable));
  if (variabilities.contains(PseudoKind::referential) && variabilities.contains(PseudoKind::shift))
    report.variability_ref_below_shift = mann_whitney_less(
        variabilities.at(PseudoKind::referential), variabilities.at(PseudoKind::shift));

  {
    std::vector<double> vs, labels;
    for (const auto& rec : report.records) {
      vs.push_back(*rec.variability);
      labels.push_back(gold.at(rec.word) == PseudoKind::shift ? 1.0 : 0.0);
    }
    try {
      report.variability_vs_shift_label = pearson(vs, labels);
    } catch (const error&) {
    }
  }
  {
    std::vector<double> vs, cs;
    for (const auto& rec : report.records) {
      if (gold.at(rec.word) == PseudoKind::shift) continue;
      vs.push_back(*rec.variability);
      cs.push_back(rec.cosine);
    }
    try {
      report.variability_vs_cosine_nonshift = pearson(vs, cs);
    } catch (const error&) {
    }
  }

  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

inline std::string format_benchmark_report(const BenchmarkReport& report) {
  std::ostringstream out;
  char buf[160];
  out << "pseudoword benchmark\n";
  std::snprintf(buf, sizeof buf, "  t1 train: %llu tokens, %.1fs; t2 train: %llu tokens, %.1fs\n",
                static_cast<unsigned long long>(report.train_t1.tokens_processed),
                report.train_t1.seconds,
                static_cast<unsigned long long>(report.train_t2.tokens_processed),
                report.train_t2.seconds);
  out << buf;
  for (const auto& k : report.kinds) {
    std::snprintf(buf, sizeof buf,
                  "  %-11s n=%2zu  cosine %.4f (+/- %.4f)  variability %.4f (+/- %.4f)\n",
                  std::string(kind_name(k.kind)).c_str(), k.n, k.mean_cosine, k.sd_cosine,
                  k.mean_variability, k.sd_variability);
    out << buf;
  }
  if (report.auc_cosine_shift_vs_stable) {
    std::snprintf(buf, sizeof buf, "  AUC(cosine, shift vs stable) = %.4f\n",
                  *report.auc_cosine_shift_vs_stable);
    out << buf;
  } else {
    out << "  AUC(cosine, shift vs stable): not applicable (single class)\n";
  }
  if (report.variability_ref_below_shift) {
    std::snprintf(buf, sizeof buf,
                  "  rank-sum referential < shift on variability: U=%.1f p=%.2e (%s)\n",
                  report.variability_ref_below_shift->u, report.variability_ref_below_shift->p,
                  report.variability_ref_below_shift->exact ? "exact" : "normal approx");
    out << buf;
  }
  if (report.variability_vs_shift_label) {
    std::snprintf(buf, sizeof buf, "  pearson(variability, shift label) r=%.3f p=%.2e\n",
                  report.variability_vs_shift_label->r, report.variability_vs_shift_label->p);
    out << buf;
  }
  if (report.variability_vs_cosine_nonshift) {
    std::snprintf(buf, sizeof buf,
                  "  pearson(variability, cosine | stable+referential) r=%.3f p=%.2e\n",
                  report.variability_vs_cosine_nonshift->r,
                  report.variability_vs_cosine_nonshift->p);
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "  total %.1fs\n", report.seconds);
  out << buf;
  return out.str();
}

} // namespace semshift
