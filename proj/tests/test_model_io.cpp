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

#include <fstream>
#include <limits>
#include <sstream>

#include "helpers.hpp"
#include "semshift/model_io.hpp"

using namespace semshift;

namespace {

EmbeddingModel sample_model() {
  Vocabulary vocab({{"alpha", 9}, {"beta", 4}, {"gamma", 2}, {"delta", 1}}, 16);
  TrainParams params;
  params.dim = 6;
  params.seed = 31;
  params.window = 3;
  params.epochs = 2;
  auto model = init_random(vocab, params);
  model.bin_label = "t1";
  for (std::size_t i = 0; i < model.inner.size(); ++i)
    model.inner[i] = 0.01f * static_cast<float>(i);
  return model;
}

} // namespace

TEST_CASE("model binary round-trip reproduces every field") {
  auto model = sample_model();
  testutil::TempDir dir;
  const std::string path = dir.file("model.bin");
  save_model(model, path);
  auto loaded = load_model(path);
  CHECK(loaded == model);
}

TEST_CASE("saving twice yields byte-identical files") {
  auto model = sample_model();
  testutil::TempDir dir;
  const std::string p1 = dir.file("m1.bin"), p2 = dir.file("m2.bin");
  save_model(model, p1);
  save_model(model, p2);
  CHECK(read_entire_file(p1) == read_entire_file(p2));
}

TEST_CASE("load rejects foreign files, bad versions, and truncation") {
  testutil::TempDir dir;

  const std::string garbage = dir.file("garbage.bin");
  testutil::write_file(garbage, "not a model at all");
  CHECK_THROWS_AS(load_model(garbage), format_error);

  const std::string versioned = dir.file("versioned.bin");
  testutil::write_file(versioned, "SSEM9rest-of-payload");
  CHECK_THROWS_WITH(load_model(versioned), Catch::Matchers::ContainsSubstring("version"));

  auto model = sample_model();
  const std::string good = dir.file("good.bin");
  save_model(model, good);
  const std::string full = read_entire_file(good);
  const std::string truncated_path = dir.file("truncated.bin");
  testutil::write_file(truncated_path, full.substr(0, full.size() / 2));
  CHECK_THROWS_AS(load_model(truncated_path), format_error);

  const std::string padded_path = dir.file("padded.bin");
  testutil::write_file(padded_path, full + "x");
  CHECK_THROWS_WITH(load_model(padded_path), Catch::Matchers::ContainsSubstring("trailing"));
}

TEST_CASE("load rejects non-finite vectors") {
  auto model = sample_model();
  model.input[3] = std::numeric_limits<float>::quiet_NaN();
  testutil::TempDir dir;
  const std::string path = dir.file("nan.bin");
  save_model(model, path);
  CHECK_THROWS_WITH(load_model(path), Catch::Matchers::ContainsSubstring("non-finite"));
}

TEST_CASE("text export writes the header and one row per word") {
  auto model = sample_model();
  testutil::TempDir dir;
  const std::string path = dir.file("vectors.txt");
  save_text_vectors(model, path);
  std::ifstream in(path);
  std::string header;
  REQUIRE(std::getline(in, header));
  CHECK(header == "4 6");
  std::size_t rows = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++rows;
    // word followed by dim floats
    std::istringstream row(line);
    std::string word;
    row >> word;
    CHECK(model.vocab.contains(word));
    double v;
    int n = 0;
    while (row >> v) ++n;
    CHECK(n == 6);
  }
  CHECK(rows == 4);
}
