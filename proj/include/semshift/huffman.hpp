// semshift/huffman.hpp
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
#include <queue>
#include <vector>

#include "semshift/common.hpp"
#include "semshift/vocab.hpp"

namespace semshift {

/// Binary prefix code over vocabulary counts. codes[w] and paths[w] are
/// root-first and equally long: paths[w][d] is the inner node whose binary
/// decision codes[w][d] selects the branch toward leaf w.
struct HuffmanTree {
  std::vector<std::vector<std::uint8_t>> codes;
  std::vector<std::vector<std::uint32_t>> paths;
  std::uint32_t inner_count = 0;

  bool operator==(const HuffmanTree&) const = default;
};

/// Builds the Huffman tree over the vocabulary's counts. Merge ties are
/// broken by smallest node id (leaves are vocabulary ids, inner nodes are
/// numbered |V|, |V|+1, ... in creation order), which fixes the tree shape.
inline HuffmanTree build_huffman(const Vocabulary& vocab) {
  const std::uint32_t n = vocab.size();
  if (n < 2) throw data_error("build_huffman: vocabulary must contain at least 2 words");

  // node ids: [0, n) leaves, [n, 2n-1) inner nodes in creation order
  struct Node {
    std::uint32_t left = 0, right = 0;  // children (left popped first)
    std::uint32_t parent = 0;
    std::uint8_t bit = 0;  // branch bit under parent: left 0, right 1
  };
  std::vector<Node> nodes(2 * static_cast<std::size_t>(n) - 1);

  using Entry = std::pair<std::uint64_t, std::uint32_t>;  // (count, node id)
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;
  for (std::uint32_t id = 0; id < n; ++id) heap.emplace(vocab.count(id), id);

  std::uint32_t next_id = n;
  while (heap.size() > 1) {
    auto [ca, a] = heap.top();
    heap.pop();
    auto [cb, b] = heap.top();
    heap.pop();
    nodes[next_id].left = a;
    nodes[next_id].right = b;
    nodes[a].parent = next_id;
    nodes[a].bit = 0;
    nodes[b].parent = next_id;
    nodes[b].bit = 1;
    heap.emplace(ca + cb, next_id);
    ++next_id;
  }
  const std::uint32_t root = next_id - 1;

  HuffmanTree tree;
  tree.inner_count = n - 1;
  tree.codes.resize(n);
  tree.paths.resize(n);
  for (std::uint32_t w = 0; w < n; ++w) {
    std::vector<std::uint8_t> code;
    std::vector<std::uint32_t> path;
    for (std::uint32_t node = w; node != root; node = nodes[node].parent) {
      code.push_back(nodes[node].bit);
      path.push_back(nodes[node].parent - n);  // inner nodes indexed from 0
    }
    std::reverse(code.begin(), code.end());
    std::reverse(path.begin(), path.end());
    tree.codes[w] = std::move(code);
    tree.paths[w] = std::move(path);
  }
  return tree;
}

/// Sum over words of count * code length.
inline std::uint64_t weighted_path_length(const HuffmanTree& tree, const Vocabulary& vocab) {
  std::uint64_t total = 0;
  for (std::uint32_t w = 0; w < vocab.size(); ++w)
    total += vocab.count(w) * tree.codes[w].size();
  return total;
}

} // namespace semshift
