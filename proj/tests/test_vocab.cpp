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

#include "helpers.hpp"
#include "semshift/vocab.hpp"

using namespace semshift;

TEST_CASE("vocabulary ids are ordered by count descending, word ascending") {
  Vocabulary vocab({{"mid", 5}, {"top", 9}, {"tie_b", 5}, {"rare", 1}}, 20);
  REQUIRE(vocab.size() == 4);
  CHECK(vocab.word(0) == "top");
  CHECK(vocab.word(1) == "mid");   // count tie with tie_b broken lexicographically
  CHECK(vocab.word(2) == "tie_b");
  CHECK(vocab.word(3) == "rare");
  CHECK(vocab.count_of("top") == 9);
  CHECK(vocab.id_of("absent") == std::nullopt);
  CHECK_THROWS_AS(vocab.require("absent"), data_error);
}

TEST_CASE("relative frequency is per million of the total token count") {
  Vocabulary vocab({{"a", 3}, {"b", 1}}, 1000);
  CHECK(vocab.rel_freq_of("a") == Catch::Approx(3000.0));
  CHECK(vocab.rel_freq_of("b") == Catch::Approx(1000.0));
}

TEST_CASE("build_vocab applies min_count against the full bin total") {
  auto corpus = testutil::make_corpus(
      {{"dog", "dog", "dog", "cat", "cat", "bird"}, {"dog", "fish"}}, {{"dog"}});
  auto vocab = build_vocab(corpus, "t1", 2);
  CHECK(vocab.size() == 2);  // dog x4, cat x2; bird and fish fall below
  CHECK(vocab.contains("dog"));
  CHECK(vocab.contains("cat"));
  CHECK_FALSE(vocab.contains("bird"));
  // totals keep the pre-filter token mass so frequencies stay comparable
  CHECK(vocab.total_tokens() == 8);
  CHECK_THROWS_AS(build_vocab(corpus, "t1", 100), data_error);  // no survivors
}

TEST_CASE("intersect_vocabs keeps the reference counts") {
  Vocabulary ref({{"a", 10}, {"b", 5}, {"c", 2}}, 100);
  Vocabulary other({{"b", 7}, {"c", 9}, {"d", 3}}, 50);
  auto shared = intersect_vocabs(ref, {&other});
  CHECK(shared.size() == 2);
  CHECK(shared.count_of("b") == 5);
  CHECK(shared.count_of("c") == 2);
  CHECK_FALSE(shared.contains("a"));
  CHECK_FALSE(shared.contains("d"));
  CHECK(shared.total_tokens() == 100);

  Vocabulary disjoint({{"x", 1}, {"y", 1}}, 2);
  CHECK_THROWS_AS(intersect_vocabs(ref, {&disjoint}), data_error);
  CHECK_THROWS_AS(intersect_vocabs(ref, {}), data_error);
}

TEST_CASE("vocabulary TSV round-trips") {
  Vocabulary vocab({{"alpha", 42}, {"beta", 17}}, 1234);
  testutil::TempDir dir;
  const std::string path = dir.file("vocab.tsv");
  save_vocab_tsv(vocab, path);
  auto loaded = load_vocab_tsv(path);
  CHECK(loaded == vocab);
  CHECK(loaded.total_tokens() == 1234);
}

TEST_CASE("vocabulary rejects zero counts and empty input") {
  CHECK_THROWS_AS(Vocabulary({{"a", 0}}, 10), data_error);
  CHECK_THROWS_AS(load_vocab_tsv("/nonexistent/vocab.tsv"), io_error);
}
