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

#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "semshift/synth.hpp"

using namespace semshift;

namespace {

/// Two topics, three pseudowords (one per kind), small enough to inspect.
SynthSpec small_spec() {
  SynthSpec spec;
  spec.n_topics = 2;
  spec.topic_vocab_size = 10;
  spec.n_documents = 40;
  spec.doc_len_mean = 6.0;
  spec.doc_len_sd = 1.0;
  spec.seed = 7;
  spec.pseudowords = {
      {"pw_shift", PseudoKind::shift, 10},       // topics 0 -> 1
      {"pw_ref", PseudoKind::referential, 10},   // topic 1
      {"pw_stable", PseudoKind::stable, 10},     // topic 0
  };
  return spec;
}

/// Documents of the bin that contain the word, as (other-tokens, position).
std::vector<std::vector<std::string>> host_contexts(const TimeBinnedCorpus& corpus,
                                                    std::size_t bin, const std::string& word) {
  std::vector<std::vector<std::string>> hosts;
  for (const auto& doc : corpus.documents[bin]) {
    std::vector<std::string> rest;
    int hits = 0;
    for (const auto& token : doc) {
      if (token == word)
        ++hits;
      else
        rest.push_back(token);
    }
    if (hits > 0) {
      REQUIRE(hits == 1);  // one occurrence per host document
      hosts.push_back(std::move(rest));
    }
  }
  return hosts;
}

bool all_from_topic(const std::vector<std::vector<std::string>>& hosts, const std::string& prefix) {
  for (const auto& host : hosts)
    for (const auto& token : host)
      if (token.rfind(prefix, 0) != 0) return false;
  return true;
}

} // namespace

TEST_CASE("default spec plants ten pseudowords of each kind") {
  auto spec = default_synth_spec();
  CHECK(spec.n_topics == 10);
  CHECK(spec.topic_vocab_size == 500);
  CHECK(spec.n_documents == 50000);
  CHECK(spec.seed == 42);
  REQUIRE(spec.pseudowords.size() == 30);
  CHECK(spec.pseudowords[0].name == "pw_shift_00");
  CHECK(spec.pseudowords[10].name == "pw_referential_00");
  CHECK(spec.pseudowords[29].name == "pw_stable_09");
  for (const auto& pw : spec.pseudowords) CHECK(pw.occurrences == 200);
  CHECK_NOTHROW(spec.validate());
}

TEST_CASE("generation is a pure function of the spec") {
  auto a = generate(small_spec());
  auto b = generate(small_spec());
  CHECK(a.corpus.documents == b.corpus.documents);
  CHECK(a.corpus.token_counts == b.corpus.token_counts);
  CHECK(a.gold == b.gold);

  auto other = small_spec();
  other.seed = 8;
  CHECK(generate(other).corpus.documents != a.corpus.documents);
}

TEST_CASE("generated corpus places each kind as designed") {
  auto result = generate(small_spec());
  const auto& corpus = result.corpus;
  REQUIRE(corpus.bin_count() == 2);
  CHECK(corpus.documents[0].size() == 40);
  CHECK(corpus.documents[1].size() == 50);  // 40 base + 10 referential frame docs
  REQUIRE(result.gold.size() == 3);
  CHECK(result.gold.at("pw_shift") == PseudoKind::shift);

  SECTION("shift words move from their t1 topic to the opposite topic") {
    auto t1 = host_contexts(corpus, 0, "pw_shift");
    auto t2 = host_contexts(corpus, 1, "pw_shift");
    CHECK(t1.size() == 10);
    CHECK(t2.size() == 10);
    CHECK(all_from_topic(t1, "t0w"));
    CHECK(all_from_topic(t2, "t1w"));
  }

  SECTION("stable words keep their topic in both bins") {
    auto t1 = host_contexts(corpus, 0, "pw_stable");
    auto t2 = host_contexts(corpus, 1, "pw_stable");
    CHECK(t1.size() == 10);
    CHECK(t2.size() == 10);
    CHECK(all_from_topic(t1, "t0w"));
    CHECK(all_from_topic(t2, "t0w"));
  }

  SECTION("referential words collapse into at most five fixed t2 frames") {
    auto t1 = host_contexts(corpus, 0, "pw_ref");
    CHECK(t1.size() == 10);
    CHECK(all_from_topic(t1, "t1w"));

    std::set<std::vector<std::string>> frames;
    std::size_t occurrences = 0;
    for (const auto& doc : corpus.documents[1]) {
      std::vector<std::string> rest;
      bool hit = false;
      for (const auto& token : doc)
        if (token == "pw_ref")
          hit = true;
        else
          rest.push_back(token);
      if (!hit) continue;
      ++occurrences;
      REQUIRE(doc.size() == 11);  // 10-token frame plus the word
      CHECK(doc[5] == "pw_ref");
      frames.insert(rest);
    }
    CHECK(occurrences == 10);
    CHECK(frames.size() <= 5);
    CHECK(frames.size() >= 2);
    for (const auto& frame : frames)
      for (const auto& token : frame) CHECK(token.rfind("t1w", 0) == 0);
  }
}

TEST_CASE("spec validation rejects impossible and malformed plants") {
  auto spec = small_spec();
  SECTION("more occurrences than host documents") {
    spec.pseudowords[2].occurrences = 25;  // topic 0 t1 then holds 10 + 25 > 20 docs
    CHECK_THROWS_WITH(generate(spec), Catch::Matchers::ContainsSubstring("infeasible"));
  }
  SECTION("duplicate names") {
    spec.pseudowords[1].name = "pw_shift";
    CHECK_THROWS_AS(spec.validate(), data_error);
  }
  SECTION("whitespace in a name") {
    spec.pseudowords[0].name = "pw bad";
    CHECK_THROWS_AS(spec.validate(), data_error);
  }
  SECTION("too few occurrences") {
    spec.pseudowords[0].occurrences = 9;
    CHECK_THROWS_AS(spec.validate(), data_error);
  }
  SECTION("no pseudowords") {
    spec.pseudowords.clear();
    CHECK_THROWS_AS(spec.validate(), data_error);
  }
  SECTION("degenerate shape") {
    spec.n_topics = 1;
    CHECK_THROWS_AS(spec.validate(), data_error);
  }
}

TEST_CASE("spec files parse keys, comments, and explicit pseudowords") {
  auto spec = parse_synth_spec(
      "# comment line\n"
      "n_topics = 4\n"
      "topic_vocab_size = 25   # trailing comment\n"
      "n_documents = 200\n"
      "doc_len_mean = 9\n"
      "doc_len_sd = 2.5\n"
      "seed = 99\n"
      "pseudowords_per_kind = 2\n"
      "occurrences = 12\n");
  CHECK(spec.n_topics == 4);
  CHECK(spec.topic_vocab_size == 25);
  CHECK(spec.n_documents == 200);
  CHECK(spec.doc_len_mean == 9.0);
  CHECK(spec.doc_len_sd == 2.5);
  CHECK(spec.seed == 99);
  REQUIRE(spec.pseudowords.size() == 6);
  CHECK(spec.pseudowords[0].name == "pw_shift_00");
  CHECK(spec.pseudowords[0].occurrences == 12);

  SECTION("explicit pseudoword lines replace the generated set") {
    auto custom = parse_synth_spec(
        "n_documents = 200\n"
        "pseudoword = vans, shift, 15\n"
        "pseudoword = kodak, stable, 20\n");
    REQUIRE(custom.pseudowords.size() == 2);
    CHECK(custom.pseudowords[0].name == "vans");
    CHECK(custom.pseudowords[0].kind == PseudoKind::shift);
    CHECK(custom.pseudowords[0].occurrences == 15);
    CHECK(custom.pseudowords[1].kind == PseudoKind::stable);
  }

  SECTION("malformed input is rejected with the line number") {
    CHECK_THROWS_AS(parse_synth_spec("frobnicate = 3\n"), format_error);
    CHECK_THROWS_AS(parse_synth_spec("n_topics three\n"), format_error);
    CHECK_THROWS_AS(parse_synth_spec("n_topics = three\n"), format_error);
    CHECK_THROWS_AS(parse_synth_spec("pseudoword = onlyname\n"), format_error);
    CHECK_THROWS_AS(parse_synth_spec("pseudoword = w, sideways, 15\n"), data_error);
    CHECK_THROWS_WITH(parse_synth_spec("n_topics = ?\n"),
                      Catch::Matchers::ContainsSubstring("line 1"));
  }

  SECTION("specs load from disk") {
    testutil::TempDir dir;
    const std::string path = dir.file("bench.spec");
    testutil::write_file(path, "seed = 5\n");
    CHECK(load_synth_spec(path).seed == 5);
    CHECK_THROWS_AS(load_synth_spec(dir.file("absent.spec")), io_error);
  }
}

TEST_CASE("gold labels round-trip through TSV") {
  testutil::TempDir dir;
  const std::string path = dir.file("gold.tsv");
  const std::map<std::string, PseudoKind> gold{
      {"vans", PseudoKind::shift}, {"kodak", PseudoKind::stable}, {"mux", PseudoKind::referential}};
  save_gold_tsv(gold, path);
  CHECK(load_gold_tsv(path) == gold);

  const std::string bad = dir.file("bad.tsv");
  testutil::write_file(bad, "vans shift\n");  // space, not tab
  CHECK_THROWS_AS(load_gold_tsv(bad), format_error);
  testutil::write_file(bad, "# header only\n");
  CHECK_THROWS_AS(load_gold_tsv(bad), format_error);
}

TEST_CASE("benchmark pipeline separates the planted kinds on a small corpus") {
  SynthSpec spec;
  spec.n_topics = 2;
  spec.topic_vocab_size = 30;
  spec.n_documents = 400;
  spec.doc_len_mean = 8.0;
  spec.doc_len_sd = 2.0;
  spec.seed = 11;
  spec.pseudowords = {
      {"pw_shift", PseudoKind::shift, 40},
      {"pw_ref", PseudoKind::referential, 40},
      {"pw_stable", PseudoKind::stable, 40},
  };
  auto result = generate(spec);

  BenchmarkConfig config;
  config.train.dim = 16;
  config.train.window = 3;
  config.train.epochs = 2;
  config.min_count = 2;
  config.variability_window = 3;

  auto report = score_benchmark(result.corpus, result.gold, config);
  REQUIRE(report.records.size() == 3);
  for (const auto& rec : report.records) {
    CHECK(rec.variability.has_value());
    CHECK(rec.freq_t1 >= 40);
    CHECK(rec.cosine >= 0.0);
    CHECK(rec.cosine <= 2.0);
  }
  REQUIRE(report.kinds.size() == 3);
  CHECK(report.kinds[0].kind == PseudoKind::shift);
  CHECK(report.kinds[1].kind == PseudoKind::referential);
  CHECK(report.kinds[2].kind == PseudoKind::stable);
  for (const auto& k : report.kinds) CHECK(k.n == 1);
  REQUIRE(report.auc_cosine_shift_vs_stable.has_value());
  REQUIRE(report.variability_ref_below_shift.has_value());
  CHECK(report.train_t1.tokens_processed > 0);
  CHECK(report.train_t2.tokens_processed > 0);
  CHECK(report.seconds > 0.0);
  CHECK_FALSE(format_benchmark_report(report).empty());

  SECTION("a gold word the corpus lacks is an error") {
    auto gold = result.gold;
    gold["ghost"] = PseudoKind::stable;
    CHECK_THROWS_AS(score_benchmark(result.corpus, gold, config), data_error);
  }
}
