// semshift/model_io.hpp
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

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <string>
#include <string_view>
#include <vector>

#include "semshift/common.hpp"
#include "semshift/embedding.hpp"

namespace semshift {
namespace detail {

// Little-endian scalar encoding, independent of host byte order.
class BinaryWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void bytes(std::string_view s) { buf_.append(s.data(), s.size()); }
  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    bytes(s);
  }
  const std::string& data() const { return buf_; }

 private:
  std::string buf_;
};

class BinaryReader {
 public:
  explicit BinaryReader(std::string_view data) : data_(data) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(take(1)[0]); }
  std::uint32_t u32() {
    const auto s = take(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(static_cast<unsigned char>(s[i])) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    const auto s = take(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(static_cast<unsigned char>(s[i])) << (8 * i);
    return v;
  }
  float f32() { return std::bit_cast<float>(u32()); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() {
    const std::uint32_t n = u32();
    const auto s = take(n);
    return std::string(s);
  }
  std::string_view take(std::size_t n) {
    if (n > data_.size() - pos_)
      throw format_error("model file truncated");
    std::string_view s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == data_.size(); }

 private:
  std::string_view data_;
  std::size_t pos_ = 0;
};

} // namespace detail

/// Serialize the model. Layout, all integers little-endian:
///   magic "SSEM1"
///   dim u32, vocab_size u32
///   vocab: total_tokens u64, then per word (id order) len u32 + bytes + count u64
///   input vectors: vocab_size * dim f32
///   inner vectors: row count u32, then rows * dim f32
///   tree: per word, code length u32 + that many u8 bits + that many u32 node ids
///   train params, then the bin label
inline void save_model(const EmbeddingModel& model, const std::string& path) {
  model.check_consistent();
  detail::BinaryWriter w;
  w.bytes(kModelMagic);
  w.u32(model.dim);
  w.u32(model.vocab.size());
  w.u64(model.vocab.total_tokens());
  for (std::uint32_t id = 0; id < model.vocab.size(); ++id) {
    w.str(model.vocab.word(id));
    w.u64(model.vocab.count(id));
  }
  for (float v : model.input) w.f32(v);
  w.u32(model.tree.inner_count);
  for (float v : model.inner) w.f32(v);
  for (std::uint32_t id = 0; id < model.vocab.size(); ++id) {
    const auto& code = model.tree.codes[id];
    const auto& path_ids = model.tree.paths[id];
    w.u32(static_cast<std::uint32_t>(code.size()));
    for (std::uint8_t b : code) w.u8(b);
    for (std::uint32_t n : path_ids) w.u32(n);
  }
  const TrainParams& p = model.params;
  w.u32(p.window);
  w.f32(p.lr_initial);
  w.f32(p.lr_final);
  w.u32(p.epochs);
  w.u64(p.seed);
  w.u32(p.threads);
  w.u8(p.subsample ? 1 : 0);
  w.f64(p.subsample_threshold);
  w.u8(p.track_loss ? 1 : 0);
  w.str(model.bin_label);
  atomic_write_file(path, w.data());
}

inline EmbeddingModel load_model(const std::string& path) {
  const std::string blob = read_entire_file(path);
  detail::BinaryReader r(blob);
  const std::string_view magic = r.take(kModelMagic.size());
  if (magic != kModelMagic) {
    if (magic.substr(0, 4) == kModelMagic.substr(0, 4))
      throw format_error("unsupported model format version '" + std::string(magic) +
                         "' (expected '" + std::string(kModelMagic) + "'): " + path);
    throw format_error("not a model file (bad magic): " + path);
  }
  EmbeddingModel model;
  model.dim = r.u32();
  const std::uint32_t vocab_size = r.u32();
  if (model.dim == 0 || vocab_size < 2)
    throw format_error("model file has degenerate dimensions: " + path);
  const std::uint64_t total_tokens = r.u64();
  std::vector<std::pair<std::string, std::uint64_t>> entries;
  entries.reserve(vocab_size);
  for (std::uint32_t id = 0; id < vocab_size; ++id) {
    std::string word = r.str();
    const std::uint64_t count = r.u64();
    entries.emplace_back(std::move(word), count);
  }
  model.vocab = Vocabulary(std::move(entries), total_tokens);
  if (model.vocab.size() != vocab_size)
    throw format_error("model file contains duplicate vocabulary words: " + path);

  model.input.resize(std::size_t(vocab_size) * model.dim);
  for (float& v : model.input) v = r.f32();
  const std::uint32_t inner_rows = r.u32();
  if (inner_rows < vocab_size - 1)
    throw format_error("model file inner matrix smaller than the tree needs: " + path);
  model.tree.inner_count = inner_rows;
  model.inner.resize(std::size_t(inner_rows) * model.dim);
  for (float& v : model.inner) v = r.f32();
  for (float v : model.input)
    if (!std::isfinite(v)) throw format_error("model file has non-finite input vectors: " + path);
  for (float v : model.inner)
    if (!std::isfinite(v)) throw format_error("model file has non-finite inner vectors: " + path);

  model.tree.codes.resize(vocab_size);
  model.tree.paths.resize(vocab_size);
  for (std::uint32_t id = 0; id < vocab_size; ++id) {
    const std::uint32_t len = r.u32();
    if (len == 0 || len > vocab_size)
      throw format_error("model file has a malformed tree path: " + path);
    auto& code = model.tree.codes[id];
    auto& path_ids = model.tree.paths[id];
    code.resize(len);
    path_ids.resize(len);
    for (std::uint32_t i = 0; i < len; ++i) {
      code[i] = r.u8();
      if (code[i] > 1) throw format_error("model file has a non-binary code: " + path);
    }
    for (std::uint32_t i = 0; i < len; ++i) {
      path_ids[i] = r.u32();
      if (path_ids[i] >= inner_rows)
        throw format_error("model file tree path leaves the inner matrix: " + path);
    }
  }
  TrainParams p;
  p.dim = model.dim;  // stored once, in the header
  p.window = r.u32();
  p.lr_initial = r.f32();
  p.lr_final = r.f32();
  p.epochs = r.u32();
  p.seed = r.u64();
  p.threads = r.u32();
  p.subsample = r.u8() != 0;
  p.subsample_threshold = r.f64();
  p.track_loss = r.u8() != 0;
  model.params = p;
  model.bin_label = r.str();
  if (!r.done()) throw format_error("model file has trailing data: " + path);
  model.check_consistent();
  return model;
}

/// Plain-text vectors: a "vocab_size dim" header line, then one word per
/// line followed by its input vector, space-separated. The layout commonly
/// consumed by embedding analysis tools.
inline void save_text_vectors(const EmbeddingModel& model, const std::string& path) {
  model.check_consistent();
  std::string out;
  out.reserve(std::size_t(model.vocab.size()) * (model.dim * 10 + 16));
  char num[64];
  std::snprintf(num, sizeof num, "%u %u\n", model.vocab.size(), model.dim);
  out += num;
  for (std::uint32_t id = 0; id < model.vocab.size(); ++id) {
    out += model.vocab.word(id);
    const auto vec = model.vector_of(id);
    for (float v : vec) {
      std::snprintf(num, sizeof num, " %.6g", static_cast<double>(v));
      out += num;
    }
    out += '\n';
  }
  atomic_write_file(path, out);
}

} // namespace semshift
