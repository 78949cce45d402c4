// semshift/stats.hpp
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
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "semshift/common.hpp"
#include "semshift/shift.hpp"

namespace semshift {

/// Binary human judgments, (annotator, word) -> {0, 1}, sparse: not every
/// annotator has to judge every word.
class JudgmentTable {
 public:
  void add(std::string_view annotator, std::string_view word, int judgment) {
    if (judgment != 0 && judgment != 1)
      throw data_error("judgment must be 0 or 1 (word '" + std::string(word) + "')");
    const std::uint32_t a = intern(annotators_, annotator_ids_, annotator);
    const std::uint32_t w = intern(words_, word_ids_, word);
    if (matrix_.size() < words_.size()) matrix_.resize(words_.size());
    auto& row = matrix_[w];
    if (row.size() < annotators_.size()) row.resize(annotators_.size(), -1);
    if (row[a] != -1)
      throw data_error("duplicate judgment for annotator '" + std::string(annotator) +
                       "', word '" + std::string(word) + "'");
    row[a] = static_cast<std::int8_t>(judgment);
    ++n_judgments_;
  }

  const std::vector<std::string>& words() const { return words_; }
  const std::vector<std::string>& annotators() const { return annotators_; }
  std::size_t n_judgments() const { return n_judgments_; }

  /// Judgments recorded for one word, in annotator order.
  std::vector<std::uint8_t> judgments_for(std::uint32_t word_id) const {
    std::vector<std::uint8_t> out;
    if (word_id >= matrix_.size()) return out;
    for (std::int8_t v : matrix_[word_id])
      if (v != -1) out.push_back(static_cast<std::uint8_t>(v));
    return out;
  }

 private:
  static std::uint32_t intern(std::vector<std::string>& names,
                              std::unordered_map<std::string, std::uint32_t>& ids,
                              std::string_view name) {
    auto it = ids.find(std::string(name));
    if (it != ids.end()) return it->second;
    const auto id = static_cast<std::uint32_t>(names.size());
    names.emplace_back(name);
    ids.emplace(names.back(), id);
    return id;
  }

  std::vector<std::string> words_, annotators_;
  std::unordered_map<std::string, std::uint32_t> word_ids_, annotator_ids_;
  std::vector<std::vector<std::int8_t>> matrix_;  // [word][annotator], -1 = missing
  std::size_t n_judgments_ = 0;
};

/// CSV with header `annotator,word,judgment`; judgment in {0, 1}. Plain
/// comma-separated fields (no quoting), blank lines skipped.
inline JudgmentTable load_judgments_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open: " + path);
  JudgmentTable table;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty()) continue;
    std::array<std::string, 3> field;
    std::size_t n = 0, start = 0;
    for (std::size_t i = 0; i <= t.size(); ++i) {
      if (i == t.size() || t[i] == ',') {
        if (n >= 3)
          throw format_error(path + ":" + std::to_string(lineno) + ": expected 3 fields");
        field[n++] = trim(t.substr(start, i - start));
        start = i + 1;
      }
    }
    if (n != 3) throw format_error(path + ":" + std::to_string(lineno) + ": expected 3 fields");
    if (!header_seen) {
      if (field[0] != "annotator" || field[1] != "word" || field[2] != "judgment")
        throw format_error(path + ": first line must be the header 'annotator,word,judgment'");
      header_seen = true;
      continue;
    }
    if (field[2] != "0" && field[2] != "1")
      throw format_error(path + ":" + std::to_string(lineno) + ": judgment must be 0 or 1");
    table.add(field[0], field[1], field[2][0] - '0');
  }
  if (!header_seen) throw format_error(path + ": empty judgment file");
  return table;
}

/// Graded shift index: per word, the fraction of its judgments that are 1.
struct ShiftIndex {
  std::vector<std::string> words;  // table order
  std::unordered_map<std::string, double> value;
  std::unordered_map<std::string, std::uint32_t> n_judgments;

  double of(std::string_view word) const {
    auto it = value.find(std::string(word));
    if (it == value.end())
      throw data_error("no shift index for word: " + std::string(word));
    return it->second;
  }
};

inline ShiftIndex shift_index(const JudgmentTable& table) {
  ShiftIndex index;
  index.words.reserve(table.words().size());
  for (std::uint32_t w = 0; w < table.words().size(); ++w) {
    const auto js = table.judgments_for(w);
    if (js.empty())
      throw data_error("word has no judgments: " + table.words()[w]);
    const double sum = std::accumulate(js.begin(), js.end(), 0.0);
    const std::string& word = table.words()[w];
    index.words.push_back(word);
    index.value[word] = sum / static_cast<double>(js.size());
    index.n_judgments[word] = static_cast<std::uint32_t>(js.size());
  }
  return index;
}

namespace detail {

// Continued fraction for the regularized incomplete beta (modified Lentz).
inline double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 1e-14;
  constexpr double kTiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw numeric_error("incomplete beta did not converge");
}

/// Regularized incomplete beta I_x(a, b), accurate to ~1e-14.
inline double reg_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw numeric_error("incomplete beta needs a, b > 0");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

/// Two-tailed p of Student's t: P(|T| >= |t|) with df degrees of freedom.
inline double student_t_two_tailed(double t, double df) {
  if (df <= 0.0) throw numeric_error("degrees of freedom must be positive");
  if (std::isinf(t)) return 0.0;
  const double x = df / (df + t * t);
  return reg_incomplete_beta(df / 2.0, 0.5, x);
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

/// Midranks of values (1-based ranks, ties share the average rank).
inline std::vector<double> midranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double shared = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
    i = j + 1;
  }
  return ranks;
}

} // namespace detail

struct PearsonResult {
  double r = 0.0;
  double t = 0.0;
  double p = 1.0;
  std::size_t n = 0;
};

/// Product-moment correlation with a two-tailed significance level from
/// t = r sqrt((n-2)/(1-r^2)) against Student's t with n-2 degrees of freedom.
inline PearsonResult pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw data_error("pearson: length mismatch");
  const std::size_t n = x.size();
  if (n < 3) throw data_error("pearson: need at least 3 pairs");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw numeric_error("pearson: zero variance");
  PearsonResult res;
  res.n = n;
  res.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double df = static_cast<double>(n - 2);
  if (std::fabs(res.r) >= 1.0) {
    res.t = std::numeric_limits<double>::infinity() * (res.r > 0 ? 1.0 : -1.0);
    res.p = 0.0;
  } else {
    res.t = res.r * std::sqrt(df / (1.0 - res.r * res.r));
    res.p = detail::student_t_two_tailed(res.t, df);
  }
  return res;
}

struct AlphaResult {
  double alpha = 0.0;
  bool degenerate = false;  // only one label observed; alpha fixed at 1
};

/// Krippendorff's alpha for nominal binary data with missing judgments,
/// via the coincidence matrix over units (words) with >= 2 judgments.
inline AlphaResult krippendorff_alpha(const JudgmentTable& table) {
  double o01 = 0.0;        // off-diagonal coincidences (0,1) + (1,0) accumulate here
  double n0 = 0.0, n1 = 0.0;
  std::size_t usable_units = 0;
  for (std::uint32_t w = 0; w < table.words().size(); ++w) {
    const auto js = table.judgments_for(w);
    const std::size_t m = js.size();
    if (m < 2) continue;
    ++usable_units;
    std::size_t ones = 0;
    for (std::uint8_t v : js) ones += v;
    const std::size_t zeros = m - ones;
    // ordered within-unit pairs, each worth 1/(m-1); the label marginals
    // telescope to plain judgment counts
    n0 += static_cast<double>(zeros);
    n1 += static_cast<double>(ones);
    o01 += 2.0 * static_cast<double>(zeros * ones) / static_cast<double>(m - 1);
  }
  if (usable_units < 2)
    throw data_error("krippendorff_alpha: need at least 2 words with 2+ judgments");
  if (n0 == 0.0 || n1 == 0.0) return {1.0, true};
  const double n = n0 + n1;
  AlphaResult res;
  res.alpha = 1.0 - (n - 1.0) * o01 / (2.0 * n0 * n1);
  return res;
}

struct GroupStat {
  std::string label;
  double mean = 0.0;
  double sd = 0.0;  // population SD
  std::size_t n = 0;
};

/// Mean and population SD of the shift index per group label, sorted by label.
inline std::vector<GroupStat> group_stats(const ShiftIndex& index,
                                          const std::map<std::string, std::string>& groups) {
  if (index.words.empty()) throw data_error("group_stats: empty shift index");
  std::map<std::string, std::vector<double>> by_group;
  for (const auto& word : index.words) {
    auto it = groups.find(word);
    if (it == groups.end())
      throw data_error("group_stats: word has no group label: " + word);
    by_group[it->second].push_back(index.value.at(word));
  }
  std::vector<GroupStat> out;
  out.reserve(by_group.size());
  for (const auto& [label, values] : by_group) {
    GroupStat g;
    g.label = label;
    g.n = values.size();
    g.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(g.n);
    double ss = 0.0;
    for (double v : values) ss += (v - g.mean) * (v - g.mean);
    g.sd = std::sqrt(ss / static_cast<double>(g.n));
    out.push_back(std::move(g));
  }
  return out;
}

struct MannWhitneyResult {
  double u = 0.0;  // U statistic of the first sample
  double p = 1.0;  // one-sided P(U <= u): evidence the first sample is lower
  bool exact = false;
};

/// One-sided Wilcoxon rank-sum test of whether x tends to take lower values
/// than y. Exact distribution by counting rank-sum arrangements when both
/// samples are small and tie-free; normal approximation (tie-corrected, with
/// continuity correction) otherwise.
inline MannWhitneyResult mann_whitney_less(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size(), m = y.size();
  if (n == 0 || m == 0) throw data_error("mann_whitney_less: empty sample");
  std::vector<double> all;
  all.reserve(n + m);
  all.insert(all.end(), x.begin(), x.end());
  all.insert(all.end(), y.begin(), y.end());
  const std::vector<double> ranks = detail::midranks(all);
  double rank_sum_x = 0.0;
  for (std::size_t i = 0; i < n; ++i) rank_sum_x += ranks[i];
  MannWhitneyResult res;
  res.u = rank_sum_x - static_cast<double>(n) * (n + 1) / 2.0;

  bool ties = false;
  {
    std::vector<double> sorted(all);
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 1; i < sorted.size(); ++i)
      if (sorted[i] == sorted[i - 1]) ties = true;
  }

  if (!ties && n + m <= 40) {
    // c[i][j][u] counts interleavings of i x-values and j y-values with
    // exactly u (x above y) pairs: c(i,j,u) = c(i-1,j,u-j) + c(i,j-1,u)
    const std::size_t max_u = n * m;
    std::vector<std::vector<std::vector<double>>> c(
        n + 1, std::vector<std::vector<double>>(m + 1, std::vector<double>(max_u + 1, 0.0)));
    for (std::size_t j = 0; j <= m; ++j) c[0][j][0] = 1.0;
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t j = 0; j <= m; ++j)
        for (std::size_t u = 0; u <= max_u; ++u) {
          double v = u >= j ? c[i - 1][j][u - j] : 0.0;
          if (j > 0) v += c[i][j - 1][u];
          c[i][j][u] = v;
        }
    double below = 0.0, all_count = 0.0;
    const auto u_int = static_cast<std::size_t>(std::llround(res.u));
    for (std::size_t s = 0; s <= max_u; ++s) {
      all_count += c[n][m][s];
      if (s <= u_int) below += c[n][m][s];
    }
    res.p = below / all_count;
    res.exact = true;
    return res;
  }

  const double nd = static_cast<double>(n), md = static_cast<double>(m);
  const double mean_u = nd * md / 2.0;
  double tie_term = 0.0;
  {
    std::vector<double> sorted(all);
    std::sort(sorted.begin(), sorted.end());
    std::size_t i = 0;
    while (i < sorted.size()) {
      std::size_t j = i;
      while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
      const double t = static_cast<double>(j - i + 1);
      tie_term += t * t * t - t;
      i = j + 1;
    }
  }
  const double nt = nd + md;
  const double var_u = nd * md / 12.0 * ((nt + 1.0) - tie_term / (nt * (nt - 1.0)));
  if (var_u <= 0.0) throw numeric_error("mann_whitney_less: zero variance (all values tied)");
  const double z = (res.u + 0.5 - mean_u) / std::sqrt(var_u);
  res.p = detail::normal_cdf(z);
  return res;
}

/// Probability that a random positive scores above a random negative, with
/// ties worth 1/2 — the area under the ROC curve of the score ranking.
inline double ranking_auc(std::span<const double> positives, std::span<const double> negatives) {
  if (positives.empty() || negatives.empty())
    throw data_error("ranking_auc: both classes must be non-empty");
  std::vector<double> all;
  all.reserve(positives.size() + negatives.size());
  all.insert(all.end(), positives.begin(), positives.end());
  all.insert(all.end(), negatives.begin(), negatives.end());
  const std::vector<double> ranks = detail::midranks(all);
  double rank_sum_pos = 0.0;
  for (std::size_t i = 0; i < positives.size(); ++i) rank_sum_pos += ranks[i];
  const double np = static_cast<double>(positives.size());
  const double nn = static_cast<double>(negatives.size());
  return (rank_sum_pos - np * (np + 1.0) / 2.0) / (np * nn);
}

struct EvalRow {
  std::string word;
  double score = 0.0;  // detector score (cosine distance)
  double index = 0.0;  // human shift index
  Region region = Region::unflagged;
};

struct EvalReport {
  PearsonResult correlation;
  std::vector<EvalRow> rows;  // shared words, sorted
  std::size_t n_scores = 0;
  std::size_t n_index = 0;
};

/// Correlate detector scores with the human shift index over the words both
/// cover, with each word placed in its score-vs-index region.
inline EvalReport evaluate(const std::unordered_map<std::string, double>& scores,
                           const ShiftIndex& index, double index_hi = 0.5,
                           double cos_hi = 0.25) {
  std::vector<std::string> shared;
  for (const auto& word : index.words)
    if (scores.contains(word)) shared.push_back(word);
  std::sort(shared.begin(), shared.end());
  if (shared.size() < 3)
    throw data_error("evaluate: need at least 3 words shared between scores and judgments");

  EvalReport report;
  report.n_scores = scores.size();
  report.n_index = index.words.size();
  std::vector<double> xs, ys;
  std::vector<ShiftRecord> records;
  xs.reserve(shared.size());
  ys.reserve(shared.size());
  records.reserve(shared.size());
  for (const auto& word : shared) {
    xs.push_back(scores.at(word));
    ys.push_back(index.value.at(word));
    ShiftRecord rec;
    rec.word = word;
    rec.cosine = scores.at(word);
    records.push_back(std::move(rec));
  }
  report.correlation = pearson(xs, ys);
  records = classify_regions(std::move(records), index.value, index_hi, cos_hi);
  for (std::size_t i = 0; i < shared.size(); ++i)
    report.rows.push_back({shared[i], xs[i], ys[i], records[i].region});
  return report;
}

inline std::string format_eval_report(const EvalReport& report) {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "evaluation over %zu shared words (%zu scored, %zu judged)\n",
                report.rows.size(), report.n_scores, report.n_index);
  out << buf;
  std::snprintf(buf, sizeof buf, "  pearson r = %.4f  t = %.4f  p = %.4g  (n = %zu)\n",
                report.correlation.r, report.correlation.t, report.correlation.p,
                report.correlation.n);
  out << buf;
  std::size_t tp = 0, fp = 0, fn = 0;
  for (const auto& row : report.rows) {
    tp += row.region == Region::true_positive;
    fp += row.region == Region::false_positive_region;
    fn += row.region == Region::false_negative_region;
  }
  std::snprintf(buf, sizeof buf,
                "  regions: %zu true positive, %zu false-positive region, "
                "%zu false-negative region\n",
                tp, fp, fn);
  out << buf;
  return out.str();
}

/// TSV: word, score, shift_index, region.
inline void save_eval_tsv(const EvalReport& report, const std::string& path) {
  std::string out = "# word\tscore\tshift_index\tregion\n";
  char buf[64];
  for (const auto& row : report.rows) {
    out += row.word;
    std::snprintf(buf, sizeof buf, "\t%.6f\t%.6f\t", row.score, row.index);
    out += buf;
    out += region_name(row.region);
    out += '\n';
  }
  atomic_write_file(path, out);
}

} // namespace semshift
