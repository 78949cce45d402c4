// semshift command-line front end: the pipeline as inspectable stages.
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

#include <cstdio>
#include <filesystem>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "CLI11.hpp"
#include "semshift/semshift.hpp"

namespace {

using namespace semshift;

std::uint32_t default_threads() {
  return std::max(1u, std::thread::hardware_concurrency());
}

/// "label:start:end" with integral epochs.
TimeBin parse_bin_spec(const std::string& spec) {
  const auto c1 = spec.find(':');
  const auto c2 = c1 == std::string::npos ? c1 : spec.find(':', c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw CLI::ValidationError("--bin", "expected label:start:end, got '" + spec + "'");
  TimeBin bin;
  bin.label = spec.substr(0, c1);
  try {
    bin.start_epoch = std::stoll(spec.substr(c1 + 1, c2 - c1 - 1));
    bin.end_epoch = std::stoll(spec.substr(c2 + 1));
  } catch (const std::logic_error&) {
    throw CLI::ValidationError("--bin", "non-numeric epoch in '" + spec + "'");
  }
  return bin;
}

/// The corpus-prefix files train/variability read; checked before work starts.
void require_corpus(const std::string& prefix) {
  if (!std::filesystem::exists(prefix + ".bins.tsv"))
    throw io_error("no corpus at prefix '" + prefix + "' (missing " + prefix + ".bins.tsv)");
}

/// One word per line; '#' lines and blanks skipped.
std::vector<std::string> load_word_list(const std::string& path) {
  const std::string text = read_entire_file(path);
  std::vector<std::string> words;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto b = line.find_first_not_of(" \t");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto e = line.find_last_not_of(" \t");
    words.push_back(line.substr(b, e - b + 1));
  }
  if (words.empty()) throw data_error("word list is empty: " + path);
  return words;
}

/// First two columns of a score TSV (as written by `score`): word, cosine.
std::unordered_map<std::string, double> load_scores_tsv(const std::string& path) {
  const std::string text = read_entire_file(path);
  std::unordered_map<std::string, double> scores;
  std::size_t pos = 0, lineno = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    const std::string line = text.substr(pos, end - pos);
    pos = end + 1;
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto t1 = line.find('\t');
    if (t1 == std::string::npos)
      throw format_error(path + ":" + std::to_string(lineno) + ": expected word<TAB>score");
    auto t2 = line.find('\t', t1 + 1);
    if (t2 == std::string::npos) t2 = line.size();
    const std::string word = line.substr(0, t1);
    double value = 0.0;
    try {
      value = std::stod(line.substr(t1 + 1, t2 - t1 - 1));
    } catch (const std::logic_error&) {
      throw format_error(path + ":" + std::to_string(lineno) + ": non-numeric score");
    }
    if (!scores.emplace(word, value).second)
      throw data_error(path + ": duplicate word in scores: " + word);
  }
  if (scores.empty()) throw data_error("score file has no rows: " + path);
  return scores;
}

struct IngestArgs {
  std::string jsonl, text, output;
  std::string text_field = "body", time_field = "created_utc";
  std::string bin_label = "all";
  std::vector<std::string> bin_specs;
};

void run_ingest(const IngestArgs& args) {
  IngestResult result;
  if (!args.jsonl.empty()) {
    if (args.bin_specs.empty())
      throw CLI::ValidationError("ingest", "--jsonl requires at least one --bin");
    std::vector<TimeBin> bins;
    bins.reserve(args.bin_specs.size());
    for (const auto& spec : args.bin_specs) bins.push_back(parse_bin_spec(spec));
    result = ingest_jsonl(args.jsonl, args.text_field, args.time_field, std::move(bins));
  } else {
    result = ingest_text(args.text, args.bin_label);
  }
  save_corpus_text(result.corpus, args.output);
  const auto& s = result.stats;
  std::printf("ingested %llu of %llu records (%llu malformed, %llu missing field, "
              "%llu out of range, %llu empty)\n",
              static_cast<unsigned long long>(s.documents),
              static_cast<unsigned long long>(s.records),
              static_cast<unsigned long long>(s.malformed),
              static_cast<unsigned long long>(s.missing_field),
              static_cast<unsigned long long>(s.out_of_range),
              static_cast<unsigned long long>(s.empty));
  for (std::size_t b = 0; b < result.corpus.bin_count(); ++b)
    std::printf("  bin %-10s %zu documents, %llu tokens\n", result.corpus.bins[b].label.c_str(),
                result.corpus.documents[b].size(),
                static_cast<unsigned long long>(result.corpus.token_counts[b]));
  std::printf("wrote %s.bins.tsv and per-bin token files\n", args.output.c_str());
}

struct TrainArgs {
  std::string corpus, bin, output, init_from, save_vocab, text_vectors;
  std::uint64_t min_count = 5;
  TrainParams params;
  bool deterministic = false;
};

void run_train(TrainArgs args) {
  require_corpus(args.corpus);
  if (args.deterministic) args.params.threads = 1;
  args.params.validate();

  const TimeBinnedCorpus corpus = load_corpus_text(args.corpus);
  Vocabulary vocab = build_vocab(corpus, args.bin, args.min_count);
  const std::uint32_t raw_size = vocab.size();

  EmbeddingModel model;
  if (!args.init_from.empty()) {
    const EmbeddingModel parent = load_model(args.init_from);
    vocab = intersect_vocabs(vocab, {&parent.vocab});
    model = init_from(parent, vocab);
    model.params = args.params;
    std::printf("vocabulary: %u words (%u before intersection with parent)\n", vocab.size(),
                raw_size);
  } else {
    model = init_random(vocab, args.params);
    std::printf("vocabulary: %u words\n", raw_size);
  }
  model.bin_label = args.bin;

  const TrainStats stats = train(model, corpus, args.bin, args.params);
  for (std::size_t e = 0; e < stats.epoch_loss.size(); ++e)
    std::printf("  epoch %zu: average pair loss %.6f\n", e + 1, stats.epoch_loss[e]);
  std::printf("trained %llu tokens (%llu pairs) in %.1fs: %.0f tokens/s\n",
              static_cast<unsigned long long>(stats.tokens_processed),
              static_cast<unsigned long long>(stats.pairs_processed), stats.seconds,
              stats.seconds > 0 ? static_cast<double>(stats.tokens_processed) / stats.seconds
                                : 0.0);

  save_model(model, args.output);
  std::printf("wrote %s\n", args.output.c_str());
  if (!args.save_vocab.empty()) save_vocab_tsv(vocab, args.save_vocab);
  if (!args.text_vectors.empty()) save_text_vectors(model, args.text_vectors);
}

struct ScoreArgs {
  std::string model_t1, model_t2, output, words_file;
};

void run_score(const ScoreArgs& args) {
  const EmbeddingModel m1 = load_model(args.model_t1);
  const EmbeddingModel m2 = load_model(args.model_t2);
  std::vector<std::string> words;
  if (!args.words_file.empty()) {
    words = load_word_list(args.words_file);
  } else {
    for (const auto& word : m2.vocab.words())
      if (m1.vocab.contains(word)) words.push_back(word);
  }
  if (words.empty()) throw data_error("score: the models share no words");

  const auto records = rank_shifts(m1, m2, words, &m1.vocab, &m2.vocab);
  save_shift_tsv(records, args.output);
  std::printf("scored %zu words; top shifts:\n", records.size());
  for (std::size_t i = 0; i < std::min<std::size_t>(5, records.size()); ++i)
    std::printf("  %-24s %.4f\n", records[i].word.c_str(), records[i].cosine);
  std::printf("wrote %s\n", args.output.c_str());
}

struct VariabilityArgs {
  std::string corpus, bin, model, words_file, output;
  std::uint32_t window = 5;
  std::uint32_t max_contexts = 200;
  std::uint64_t seed = 1;
};

void run_variability(const VariabilityArgs& args) {
  require_corpus(args.corpus);
  const TimeBinnedCorpus corpus = load_corpus_text(args.corpus);
  const EmbeddingModel model = load_model(args.model);
  const auto words = load_word_list(args.words_file);
  const auto report =
      variability_report(corpus, args.bin, words, model, args.window, args.max_contexts, args.seed);
  for (const auto& [word, reason] : report.failed)
    std::fprintf(stderr, "variability: skipped '%s': %s\n", word.c_str(), reason.c_str());
  if (report.rows.empty()) throw data_error("variability: no word had enough contexts");
  save_variability_tsv(report, args.output);
  std::printf("variability for %zu of %zu words; wrote %s\n", report.rows.size(), words.size(),
              args.output.c_str());
}

struct EvaluateArgs {
  std::string scores, judgments, output;
  double index_hi = 0.5;
  double cos_hi = 0.25;
};

void run_evaluate(const EvaluateArgs& args) {
  const auto scores = load_scores_tsv(args.scores);
  const JudgmentTable table = load_judgments_csv(args.judgments);
  const ShiftIndex index = shift_index(table);
  const EvalReport report = evaluate(scores, index, args.index_hi, args.cos_hi);
  std::fputs(format_eval_report(report).c_str(), stdout);
  const AlphaResult agreement = krippendorff_alpha(table);
  std::printf("  krippendorff alpha = %.4f%s\n", agreement.alpha,
              agreement.degenerate ? " (degenerate: single label)" : "");
  if (!args.output.empty()) {
    save_eval_tsv(report, args.output);
    std::printf("wrote %s\n", args.output.c_str());
  }
}

struct SynthArgs {
  std::string output, spec_file, report_file;
  bool benchmark = false;
  bool deterministic = false;
  std::uint64_t min_count = 5;
  BenchmarkConfig config;
};

void run_synth(SynthArgs args) {
  const SynthSpec spec = args.spec_file.empty() ? default_synth_spec()
                                                : load_synth_spec(args.spec_file);
  const SynthResult result = generate(spec);
  save_corpus_text(result.corpus, args.output);
  save_gold_tsv(result.gold, args.output + ".gold.tsv");
  std::printf("generated %zu + %zu documents (%llu + %llu tokens), %zu pseudowords\n",
              result.corpus.documents[0].size(), result.corpus.documents[1].size(),
              static_cast<unsigned long long>(result.corpus.token_counts[0]),
              static_cast<unsigned long long>(result.corpus.token_counts[1]),
              result.gold.size());
  std::printf("wrote %s.{bins.tsv,t1.txt,t2.txt,gold.tsv}\n", args.output.c_str());
  if (!args.benchmark) return;

  if (args.deterministic) args.config.train.threads = 1;
  args.config.min_count = static_cast<std::uint32_t>(args.min_count);
  const BenchmarkReport report = score_benchmark(result.corpus, result.gold, args.config);
  std::fputs(format_benchmark_report(report).c_str(), stdout);
  if (!args.report_file.empty()) {
    save_shift_tsv(report.records, args.report_file);
    std::printf("wrote %s\n", args.report_file.c_str());
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"detect short-term lexical meaning shift between time-binned corpora"};
  app.set_version_flag("--version",
                       std::string("semshift ") + std::string(semshift::kVersion) +
                           " (model format " + std::string(semshift::kModelMagic) + ")");
  app.require_subcommand(1);
  app.set_config("--config", "", "plain-text config file with per-subcommand sections");
  std::string stage = "semshift";

  IngestArgs ingest_args;
  auto* cmd_ingest = app.add_subcommand("ingest", "tokenize raw text into a time-binned corpus");
  auto* opt_jsonl = cmd_ingest->add_option("--jsonl", ingest_args.jsonl,
                                           "JSONL input, one record per line")
                        ->check(CLI::ExistingFile);
  auto* opt_text = cmd_ingest->add_option("--text", ingest_args.text,
                                          "plain-text input, one document per line")
                       ->check(CLI::ExistingFile);
  opt_jsonl->excludes(opt_text);
  cmd_ingest->add_option("--text-field", ingest_args.text_field, "JSON field holding the text");
  cmd_ingest->add_option("--time-field", ingest_args.time_field,
                         "JSON field holding the epoch timestamp");
  cmd_ingest->add_option("--bin", ingest_args.bin_specs,
                         "time bin as label:start:end (repeatable, half-open)");
  cmd_ingest->add_option("--bin-label", ingest_args.bin_label, "bin label for --text input");
  cmd_ingest->add_option("--output", ingest_args.output, "output corpus prefix")->required();
  cmd_ingest->callback([&] {
    stage = "ingest";
    if (ingest_args.jsonl.empty() && ingest_args.text.empty())
      throw CLI::ValidationError("ingest", "one of --jsonl or --text is required");
    run_ingest(ingest_args);
  });

  TrainArgs train_args;
  train_args.params.threads = default_threads();
  auto* cmd_train = app.add_subcommand("train", "train a skip-gram snapshot for one time bin");
  cmd_train->add_option("--corpus", train_args.corpus, "corpus prefix from ingest/synth")
      ->required();
  cmd_train->add_option("--bin", train_args.bin, "time bin label to train on")->required();
  cmd_train->add_option("--output", train_args.output, "model file to write")->required();
  cmd_train->add_option("--init-from", train_args.init_from,
                        "parent model to chain from (earlier bin)")
      ->check(CLI::ExistingFile);
  cmd_train->add_option("--min-count", train_args.min_count, "vocabulary frequency floor")
      ->check(CLI::PositiveNumber);
  cmd_train->add_option("--dim", train_args.params.dim, "embedding dimension")
      ->check(CLI::PositiveNumber);
  cmd_train->add_option("--window", train_args.params.window, "context window half-width")
      ->check(CLI::PositiveNumber);
  cmd_train->add_option("--epochs", train_args.params.epochs, "training epochs")
      ->check(CLI::PositiveNumber);
  cmd_train->add_option("--lr", train_args.params.lr_initial, "initial learning rate");
  cmd_train->add_option("--lr-final", train_args.params.lr_final, "final learning rate");
  cmd_train->add_option("--seed", train_args.params.seed, "random seed");
  cmd_train->add_option("--threads", train_args.params.threads, "training lanes")
      ->check(CLI::PositiveNumber);
  cmd_train->add_flag("--deterministic", train_args.deterministic,
                      "single lane for bit-reproducible output");
  cmd_train->add_flag("--subsample", train_args.params.subsample,
                      "subsample frequent words during training");
  cmd_train->add_option("--subsample-threshold", train_args.params.subsample_threshold,
                        "subsampling threshold");
  cmd_train->add_flag("--track-loss", train_args.params.track_loss,
                      "print average pair loss per epoch");
  cmd_train->add_option("--save-vocab", train_args.save_vocab, "also write the vocabulary TSV");
  cmd_train->add_option("--text-vectors", train_args.text_vectors,
                        "also export vectors as word2vec-style text");
  cmd_train->callback([&] {
    stage = "train";
    run_train(train_args);
  });

  ScoreArgs score_args;
  auto* cmd_score = app.add_subcommand("score", "rank words by cosine distance between snapshots");
  cmd_score->add_option("--model-t1", score_args.model_t1, "earlier snapshot")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_score->add_option("--model-t2", score_args.model_t2, "later snapshot")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_score->add_option("--output", score_args.output, "shift TSV to write")->required();
  cmd_score->add_option("--words", score_args.words_file,
                        "word list to score (default: all words shared by both models)")
      ->check(CLI::ExistingFile);
  cmd_score->callback([&] {
    stage = "score";
    run_score(score_args);
  });

  VariabilityArgs var_args;
  auto* cmd_var = app.add_subcommand("variability",
                                     "contextual variability of words in one bin");
  cmd_var->add_option("--corpus", var_args.corpus, "corpus prefix")->required();
  cmd_var->add_option("--bin", var_args.bin, "bin label (typically the later bin)")->required();
  cmd_var->add_option("--model", var_args.model, "embedding snapshot for context vectors")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_var->add_option("--words", var_args.words_file, "word list file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_var->add_option("--output", var_args.output, "variability TSV to write")->required();
  cmd_var->add_option("--window", var_args.window, "context window half-width")
      ->check(CLI::PositiveNumber);
  cmd_var->add_option("--max-contexts", var_args.max_contexts,
                      "subsample cap on contexts per word");
  cmd_var->add_option("--seed", var_args.seed, "subsample seed");
  cmd_var->callback([&] {
    stage = "variability";
    run_variability(var_args);
  });

  EvaluateArgs eval_args;
  auto* cmd_eval = app.add_subcommand("evaluate",
                                      "correlate detector scores with human judgments");
  cmd_eval->add_option("--scores", eval_args.scores, "shift TSV from score")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_eval->add_option("--judgments", eval_args.judgments,
                       "CSV with header annotator,word,judgment")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_eval->add_option("--output", eval_args.output, "per-word evaluation TSV to write");
  cmd_eval->add_option("--index-hi", eval_args.index_hi, "shift-index threshold for regions");
  cmd_eval->add_option("--cos-hi", eval_args.cos_hi, "cosine threshold for regions");
  cmd_eval->callback([&] {
    stage = "evaluate";
    run_evaluate(eval_args);
  });

  SynthArgs synth_args;
  synth_args.config.train.threads = default_threads();
  auto* cmd_synth = app.add_subcommand("synth",
                                       "generate a pseudoword benchmark corpus and score it");
  cmd_synth->add_option("--output", synth_args.output, "corpus prefix to write")->required();
  cmd_synth->add_option("--spec", synth_args.spec_file, "benchmark spec file (default built-in)")
      ->check(CLI::ExistingFile);
  cmd_synth->add_flag("--benchmark", synth_args.benchmark,
                      "run the full train/score/variability pipeline on the corpus");
  cmd_synth->add_option("--report", synth_args.report_file,
                        "write the per-pseudoword shift TSV here (with --benchmark)")
      ->needs("--benchmark");
  cmd_synth->add_option("--min-count", synth_args.min_count, "vocabulary frequency floor")
      ->check(CLI::PositiveNumber);
  cmd_synth->add_option("--dim", synth_args.config.train.dim, "embedding dimension")
      ->check(CLI::PositiveNumber);
  cmd_synth->add_option("--window", synth_args.config.train.window, "context window half-width")
      ->check(CLI::PositiveNumber);
  cmd_synth->add_option("--epochs", synth_args.config.train.epochs, "training epochs")
      ->check(CLI::PositiveNumber);
  cmd_synth->add_option("--seed", synth_args.config.train.seed, "training seed");
  cmd_synth->add_option("--threads", synth_args.config.train.threads, "training lanes")
      ->check(CLI::PositiveNumber);
  cmd_synth->add_flag("--deterministic", synth_args.deterministic,
                      "single lane for bit-reproducible training");
  cmd_synth->add_option("--max-contexts", synth_args.config.max_contexts,
                        "variability subsample cap");
  cmd_synth->add_option("--variability-window", synth_args.config.variability_window,
                        "variability window half-width")
      ->check(CLI::PositiveNumber);
  cmd_synth->add_option("--variability-seed", synth_args.config.variability_seed,
                        "variability subsample seed");
  cmd_synth->callback([&] {
    stage = "synth";
    run_synth(synth_args);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return 2;
  } catch (const semshift::numeric_error& e) {
    std::fprintf(stderr, "semshift %s: numeric failure: %s\n", stage.c_str(), e.what());
    return 4;
  } catch (const semshift::error& e) {
    std::fprintf(stderr, "semshift %s: %s\n", stage.c_str(), e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "semshift %s: %s\n", stage.c_str(), e.what());
    return 3;
  }
  return 0;
}
