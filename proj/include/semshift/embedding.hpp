// semshift/embedding.hpp
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
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "semshift/common.hpp"
#include "semshift/corpus.hpp"
#include "semshift/huffman.hpp"
#include "semshift/vocab.hpp"

namespace semshift {

struct TrainParams {
  std::uint32_t window = 5;
  std::uint32_t dim = 200;
  float lr_initial = 0.01f;
  float lr_final = 1e-4f;
  std::uint32_t epochs = 5;
  std::uint64_t seed = 1;
  std::uint32_t threads = 1;
  // Frequent-word subsampling is off unless requested.
  bool subsample = false;
  double subsample_threshold = 1e-3;
  // Per-epoch average pair loss is only accumulated when asked for.
  bool track_loss = false;

  void validate() const {
    if (window < 1) throw data_error("window must be >= 1");
    if (dim < 1) throw data_error("dim must be >= 1");
    if (!(lr_final > 0.0f) || !(lr_final <= lr_initial))
      throw data_error("learning rates must satisfy 0 < lr_final <= lr_initial");
    if (epochs < 1) throw data_error("epochs must be >= 1");
    if (threads < 1) throw data_error("threads must be >= 1");
  }

  bool operator==(const TrainParams&) const = default;
};

namespace detail {

#if defined(__GNUC__) && !defined(__clang__)
#pragma GCC push_options
#pragma GCC optimize("unsafe-math-optimizations,tree-vectorize")
#endif

template <class S>
inline S dot(const S* a, const S* b, std::size_t n) {
  S s{};
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

template <class S>
inline void axpy(S g, const S* x, S* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += g * x[i];
}

#if defined(__GNUC__) && !defined(__clang__)
#pragma GCC pop_options
#endif

template <class S>
inline S sigmoid(S x) {
  return S(1) / (S(1) + std::exp(-x));
}

// log(1 + e^y), linear for large y where the exp would overflow
inline double softplus(double y) {
  if (y > 30.0) return y;
  return std::log1p(std::exp(y));
}

/// Loss of predicting the context word with code/path from the center vector:
/// the sum over path nodes (n, b) of -log sigmoid((1-2b) * center . inner_n).
template <class S>
double hs_pair_loss(const S* center, const std::vector<std::uint8_t>& code,
                    const std::vector<std::uint32_t>& path, const S* inner, std::size_t dim) {
  double loss = 0.0;
  for (std::size_t d = 0; d < code.size(); ++d) {
    const double x = static_cast<double>(dot(center, inner + std::size_t(path[d]) * dim, dim));
    loss += softplus(code[d] ? x : -x);
  }
  return loss;
}

/// Gradient of hs_pair_loss at the current parameters. grad_center has dim
/// entries; grad_inner has code.size() rows of dim (row d is the gradient of
/// the inner vector at path[d]).
template <class S>
void hs_pair_gradient(const S* center, const std::vector<std::uint8_t>& code,
                      const std::vector<std::uint32_t>& path, const S* inner, std::size_t dim,
                      S* grad_center, S* grad_inner) {
  for (std::size_t j = 0; j < dim; ++j) grad_center[j] = S(0);
  for (std::size_t d = 0; d < code.size(); ++d) {
    const S* vn = inner + std::size_t(path[d]) * dim;
    const S x = dot(center, vn, dim);
    // d/dx of -log sigmoid((1-2b) x) is sigmoid(x) - (1 - b)
    const S gx = sigmoid(x) - (S(1) - S(code[d]));
    axpy(gx, vn, grad_center, dim);
    for (std::size_t j = 0; j < dim; ++j) grad_inner[d * dim + j] = gx * center[j];
  }
}

/// One SGD step at rate lr. Inner rows move against the old center vector and
/// the center moves against the old inner rows, matching hs_pair_gradient.
/// When loss_acc is non-null the pre-update pair loss is added to it.
template <class S>
void hs_pair_update(S lr, S* center, const std::vector<std::uint8_t>& code,
                    const std::vector<std::uint32_t>& path, S* inner, std::size_t dim,
                    S* scratch, double* loss_acc = nullptr) {
  for (std::size_t j = 0; j < dim; ++j) scratch[j] = S(0);
  for (std::size_t d = 0; d < code.size(); ++d) {
    S* vn = inner + std::size_t(path[d]) * dim;
    const S x = dot(center, vn, dim);
    const S f = sigmoid(x);
    if (loss_acc) *loss_acc += softplus(code[d] ? double(x) : -double(x));
    const S g = lr * (S(1) - S(code[d]) - f);
    axpy(g, vn, scratch, dim);
    axpy(g, center, vn, dim);
  }
  axpy(S(1), scratch, center, dim);
}

} // namespace detail

/// 1 - u.v / (|u| |v|), computed in double. Lies in [0, 2].
template <class S>
double cosine_distance(std::span<const S> u, std::span<const S> v) {
  if (u.size() != v.size()) throw data_error("cosine_distance: dimension mismatch");
  if (u.empty()) throw data_error("cosine_distance: empty vectors");
  double uu = 0.0, vv = 0.0, uv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double a = static_cast<double>(u[i]);
    const double b = static_cast<double>(v[i]);
    uu += a * a;
    vv += b * b;
    uv += a * b;
  }
  if (uu == 0.0 || vv == 0.0) throw numeric_error("cosine_distance: zero vector");
  const double d = 1.0 - uv / std::sqrt(uu * vv);
  return d < 0.0 ? 0.0 : (d > 2.0 ? 2.0 : d);
}

inline double cosine_distance(std::span<const float> u, std::span<const float> v) {
  return cosine_distance<float>(u, v);
}

/// Skip-gram embeddings with hierarchical-softmax parameters for one time
/// bin. input holds the word vectors (vocab.size() x dim row-major), inner
/// the tree's inner-node vectors (tree.inner_count x dim). The tree always
/// has one code/path entry per vocabulary word; inner_count can exceed
/// |V| - 1 on models chained from a larger parent vocabulary.
struct EmbeddingModel {
  Vocabulary vocab;
  std::uint32_t dim = 0;
  std::vector<float> input;
  std::vector<float> inner;
  HuffmanTree tree;
  std::string bin_label;
  TrainParams params;

  std::span<const float> vector_of(std::uint32_t id) const {
    return {input.data() + std::size_t(id) * dim, dim};
  }
  std::span<const float> vector_of(std::string_view word) const {
    return vector_of(vocab.require(word));
  }
  float* input_row(std::uint32_t id) { return input.data() + std::size_t(id) * dim; }

  void check_consistent() const {
    if (input.size() != std::size_t(vocab.size()) * dim)
      throw data_error("model: input matrix shape does not match vocabulary");
    if (inner.size() != std::size_t(tree.inner_count) * dim)
      throw data_error("model: inner matrix shape does not match tree");
    if (tree.codes.size() != vocab.size() || tree.paths.size() != vocab.size())
      throw data_error("model: tree does not cover the vocabulary");
  }

  bool operator==(const EmbeddingModel&) const = default;
};

/// Fresh model: input vectors uniform in [-0.5/dim, 0.5/dim) from the seeded
/// generator, inner vectors zero, tree built from the vocabulary counts.
inline EmbeddingModel init_random(const Vocabulary& vocab, const TrainParams& params) {
  params.validate();
  EmbeddingModel model;
  model.vocab = vocab;
  model.dim = params.dim;
  model.params = params;
  model.tree = build_huffman(vocab);
  model.input.resize(std::size_t(vocab.size()) * params.dim);
  model.inner.assign(std::size_t(model.tree.inner_count) * params.dim, 0.0f);
  std::mt19937_64 rng(params.seed);
  const float bound = 0.5f / static_cast<float>(params.dim);
  std::uniform_real_distribution<float> dist(-bound, bound);
  for (auto& x : model.input) x = dist(rng);
  return model;
}

/// Child model for the next time bin: input vectors copied from the parent
/// for every word of `vocab`, the full inner matrix and the parent's tree
/// carried over so hierarchical-softmax parameters stay aligned across bins.
inline EmbeddingModel init_from(const EmbeddingModel& parent, const Vocabulary& vocab) {
  parent.check_consistent();
  if (vocab.words() == parent.vocab.words()) {
    EmbeddingModel child = parent;
    child.vocab = vocab;
    return child;
  }
  EmbeddingModel child;
  child.vocab = vocab;
  child.dim = parent.dim;
  child.params = parent.params;
  child.bin_label = parent.bin_label;
  child.inner = parent.inner;
  child.tree.inner_count = parent.tree.inner_count;
  child.tree.codes.resize(vocab.size());
  child.tree.paths.resize(vocab.size());
  child.input.resize(std::size_t(vocab.size()) * parent.dim);
  for (std::uint32_t id = 0; id < vocab.size(); ++id) {
    const std::string& w = vocab.word(id);
    auto parent_id = parent.vocab.id_of(w);
    if (!parent_id)
      throw data_error("init_from: word not in parent vocabulary: " + w);
    child.tree.codes[id] = parent.tree.codes[*parent_id];
    child.tree.paths[id] = parent.tree.paths[*parent_id];
    auto src = parent.vector_of(*parent_id);
    std::copy(src.begin(), src.end(), child.input.begin() + std::size_t(id) * parent.dim);
  }
  return child;
}

struct TrainStats {
  std::uint64_t tokens_processed = 0;
  std::uint64_t pairs_processed = 0;
  std::vector<double> epoch_loss;  // average pair loss, one entry per epoch when tracked
  double seconds = 0.0;
};

namespace detail {

struct TrainPlan {
  std::vector<std::vector<std::uint32_t>> docs;  // in-vocabulary token ids
  std::uint64_t tokens_per_epoch = 0;
  std::vector<double> keep_prob;  // per word id, only filled when subsampling
};

inline TrainPlan prepare_training(const EmbeddingModel& model, const TimeBinnedCorpus& corpus,
                                  std::string_view bin_label, const TrainParams& params) {
  const std::size_t bin = corpus.bin_index(bin_label);
  if (corpus.documents[bin].empty())
    throw data_error("train: bin '" + std::string(bin_label) + "' is empty");
  TrainPlan plan;
  plan.docs.reserve(corpus.documents[bin].size());
  std::vector<std::uint64_t> bin_counts(model.vocab.size(), 0);
  for (const auto& doc : corpus.documents[bin]) {
    std::vector<std::uint32_t> ids;
    ids.reserve(doc.size());
    for (const auto& token : doc) {
      if (auto id = model.vocab.id_of(token)) {
        ids.push_back(*id);
        ++bin_counts[*id];
      }
    }
    plan.tokens_per_epoch += ids.size();
    if (!ids.empty()) plan.docs.push_back(std::move(ids));
  }
  if (plan.tokens_per_epoch == 0)
    throw data_error("train: bin '" + std::string(bin_label) +
                     "' has no in-vocabulary tokens");
  if (params.subsample) {
    // word2vec-style keep probability from this bin's relative frequencies
    plan.keep_prob.resize(model.vocab.size(), 1.0);
    const double t = params.subsample_threshold;
    const double total = static_cast<double>(plan.tokens_per_epoch);
    for (std::uint32_t id = 0; id < model.vocab.size(); ++id) {
      const double f = bin_counts[id] / total;
      if (f > 0.0) {
        const double p = std::sqrt(t / f) + t / f;
        plan.keep_prob[id] = p < 1.0 ? p : 1.0;
      }
    }
  }
  return plan;
}

} // namespace detail

/// Skip-gram SGD over the named bin: every (center, context) pair within the
/// window of the vocabulary-filtered token sequence takes one hierarchical-
/// softmax step on the center's input vector and the context path's inner
/// vectors. The learning rate decays linearly from lr_initial to lr_final
/// over epochs * tokens. With threads == 1 the result is bit-reproducible
/// for a fixed seed; with more threads, document shards race on the shared
/// matrices (hogwild) and results are nondeterministic.
inline TrainStats train(EmbeddingModel& model, const TimeBinnedCorpus& corpus,
                        std::string_view bin_label, const TrainParams& params) {
  params.validate();
  model.check_consistent();
  if (params.dim != model.dim)
    throw data_error("train: params.dim does not match the model");

  const auto start = std::chrono::steady_clock::now();
  detail::TrainPlan plan = detail::prepare_training(model, corpus, bin_label, params);

  const std::uint64_t total_plan = std::uint64_t(params.epochs) * plan.tokens_per_epoch;
  const float lr_initial = params.lr_initial;
  const float lr_final = params.lr_final;
  const std::uint32_t window = params.window;
  const std::size_t dim = model.dim;
  float* const input = model.input.data();
  float* const inner = model.inner.data();
  const auto& codes = model.tree.codes;
  const auto& paths = model.tree.paths;

  std::atomic<std::uint64_t> processed{0};
  std::atomic<std::uint64_t> pairs_total{0};
  TrainStats stats;

  const std::uint32_t threads =
      std::min<std::uint32_t>(params.threads, static_cast<std::uint32_t>(plan.docs.size()));

  for (std::uint32_t epoch = 0; epoch < params.epochs; ++epoch) {
    std::atomic<double> epoch_loss{0.0};
    std::atomic<std::uint64_t> epoch_pairs{0};

    auto run_shard = [&](std::uint32_t tid) {
      std::vector<float> scratch(dim);
      std::vector<std::uint32_t> sampled;
      std::mt19937_64 rng(params.seed ^ (0x9E3779B97F4A7C15ULL * (epoch + 1)) ^ tid);
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      double loss = 0.0;
      double* loss_ptr = params.track_loss ? &loss : nullptr;
      std::uint64_t local_tokens = 0;
      std::uint64_t local_pairs = 0;

      for (std::size_t d = tid; d < plan.docs.size(); d += threads) {
        const std::vector<std::uint32_t>* seq = &plan.docs[d];
        if (params.subsample) {
          sampled.clear();
          for (std::uint32_t id : *seq)
            if (unit(rng) < plan.keep_prob[id]) sampled.push_back(id);
          local_tokens += seq->size() - sampled.size();  // discarded still advance the schedule
          seq = &sampled;
        }
        const auto& s = *seq;
        const std::int64_t len = static_cast<std::int64_t>(s.size());
        for (std::int64_t i = 0; i < len; ++i) {
          const std::uint64_t done = processed.load(std::memory_order_relaxed) + local_tokens;
          const double frac =
              total_plan ? std::min(1.0, static_cast<double>(done) / total_plan) : 1.0;
          const float lr = lr_initial + (lr_final - lr_initial) * static_cast<float>(frac);
          ++local_tokens;
          float* vc = input + std::size_t(s[i]) * dim;
          const std::int64_t lo = i > window ? i - window : 0;
          const std::int64_t hi = std::min<std::int64_t>(len - 1, i + window);
          for (std::int64_t j = lo; j <= hi; ++j) {
            if (j == i) continue;
            const std::uint32_t ctx = s[j];
            detail::hs_pair_update(lr, vc, codes[ctx], paths[ctx], inner, dim, scratch.data(),
                                   loss_ptr);
            ++local_pairs;
          }
        }
        processed.fetch_add(local_tokens, std::memory_order_relaxed);
        local_tokens = 0;
      }
      epoch_pairs.fetch_add(local_pairs, std::memory_order_relaxed);
      if (params.track_loss) {
        double expected = epoch_loss.load();
        while (!epoch_loss.compare_exchange_weak(expected, expected + loss)) {
        }
      }
    };

    if (threads <= 1) {
      run_shard(0);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(threads);
      for (std::uint32_t t = 0; t < threads; ++t) pool.emplace_back(run_shard, t);
      for (auto& t : pool) t.join();
    }

    pairs_total.fetch_add(epoch_pairs.load(), std::memory_order_relaxed);
    if (params.track_loss) {
      const double n = static_cast<double>(epoch_pairs.load());
      stats.epoch_loss.push_back(n > 0 ? epoch_loss.load() / n : 0.0);
    }
  }

  stats.tokens_processed = processed.load();
  stats.pairs_processed = pairs_total.load();
  stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  model.bin_label = std::string(bin_label);
  model.params = params;
  return stats;
}

} // namespace semshift
