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

#include <random>
#include <set>

#include "oracles.hpp"
#include "semshift/huffman.hpp"
#include "semshift/vocab.hpp"

using namespace semshift;

namespace {

bool is_prefix(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
  if (a.size() > b.size()) return false;
  return std::equal(a.begin(), a.end(), b.begin());
}

} // namespace

TEST_CASE("worked example: counts 4,2,1,1 give code lengths 1,2,3,3") {
  Vocabulary vocab({{"a", 4}, {"b", 2}, {"c", 1}, {"d", 1}}, 8);
  auto tree = build_huffman(vocab);
  REQUIRE(tree.codes.size() == 4);
  CHECK(tree.codes[vocab.require("a")].size() == 1);
  CHECK(tree.codes[vocab.require("b")].size() == 2);
  CHECK(tree.codes[vocab.require("c")].size() == 3);
  CHECK(tree.codes[vocab.require("d")].size() == 3);
  CHECK(weighted_path_length(tree, vocab) == 14);  // 4*1 + 2*2 + 1*3 + 1*3
  CHECK(tree.inner_count == 3);
}

TEST_CASE("codes are prefix-free and paths run root-first") {
  Vocabulary vocab({{"w1", 7}, {"w2", 5}, {"w3", 5}, {"w4", 2}, {"w5", 1}}, 20);
  auto tree = build_huffman(vocab);
  for (std::uint32_t i = 0; i < vocab.size(); ++i) {
    REQUIRE(tree.codes[i].size() == tree.paths[i].size());
    // every path starts at the root inner node
    CHECK(tree.paths[i].front() == tree.inner_count - 1);
    for (std::uint32_t j = i + 1; j < vocab.size(); ++j) {
      CHECK_FALSE(is_prefix(tree.codes[i], tree.codes[j]));
      CHECK_FALSE(is_prefix(tree.codes[j], tree.codes[i]));
    }
  }
  // inner node ids stay within the matrix
  for (const auto& path : tree.paths)
    for (auto node : path) CHECK(node < tree.inner_count);
}

TEST_CASE("tree matches brute-force optimal weighted path length") {
  std::mt19937_64 rng(7); // NOLINT: fixed seed keeps the cases reproducible
  std::uniform_int_distribution<std::uint64_t> count_dist(1, 40);
  std::uniform_int_distribution<int> size_dist(2, 6);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = size_dist(rng);
    std::vector<std::pair<std::string, std::uint64_t>> entries;
    std::vector<std::uint64_t> weights;
    for (int i = 0; i < n; ++i) {
      const std::uint64_t c = count_dist(rng);
      entries.emplace_back("w" + std::to_string(i), c);
      weights.push_back(c);
    }
    Vocabulary vocab(entries, 1000);
    auto tree = build_huffman(vocab);
    std::vector<std::uint64_t> ordered;  // map back to vocab id order
    for (std::uint32_t id = 0; id < vocab.size(); ++id) ordered.push_back(vocab.count(id));
    CHECK(weighted_path_length(tree, vocab) == oracle::optimal_wpl(ordered));
  }
}

TEST_CASE("equal counts break ties deterministically") {
  Vocabulary vocab({{"p", 3}, {"q", 3}, {"r", 3}, {"s", 3}}, 12);
  auto t1 = build_huffman(vocab);
  auto t2 = build_huffman(vocab);
  CHECK(t1 == t2);
  // four equal weights make a perfectly balanced tree
  for (const auto& code : t1.codes) CHECK(code.size() == 2);
}

TEST_CASE("huffman needs at least two words") {
  Vocabulary tiny({{"only", 5}}, 5);
  CHECK_THROWS_AS(build_huffman(tiny), data_error);
}
