// Copyright 2026 The histbias Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Bias measures: the word embedding association test (WEAT) with a
// permutation p-value, PMI between social groups and descriptor words, and
// lexicon-weighted group scores.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "histbias/embed.hpp"
#include "histbias/error.hpp"
#include "histbias/io.hpp"
#include "histbias/random.hpp"
#include "histbias/text.hpp"
#include "json.hpp"

namespace histbias {

struct WordSet {
  std::string name;
  std::vector<std::string> words;

  void Validate() const {
    if (words.empty()) {
      Fail(ErrorKind::kInvalidArgument, "word set '" + name + "' is empty");
    }
    std::set<std::string_view> seen;
    for (const auto& w : words) {
      if (w.empty()) {
        Fail(ErrorKind::kInvalidArgument, "word set '" + name + "' has an empty word");
      }
      if (!seen.insert(w).second) {
        Fail(ErrorKind::kInvalidArgument,
             "word set '" + name + "' repeats '" + w + "'");
      }
    }
  }
};

// Accepts one {name, words[]} object or an array of them. Words are
// lowercased.
inline std::vector<WordSet> ParseWordSets(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    Fail(ErrorKind::kParse, std::string("word sets: ") + e.what());
  }
  std::vector<WordSet> sets;
  auto read_one = [&](const nlohmann::json& o) {
    if (!o.is_object() || !o.contains("name") || !o["name"].is_string() ||
        !o.contains("words") || !o["words"].is_array()) {
      Fail(ErrorKind::kParse, "word set needs a string name and a words array");
    }
    WordSet s;
    s.name = o["name"].get<std::string>();
    for (const auto& w : o["words"]) {
      if (!w.is_string()) {
        Fail(ErrorKind::kParse, "word set '" + s.name + "' has a non-string word");
      }
      s.words.push_back(text::Lowercase(w.get<std::string>()));
    }
    s.Validate();
    sets.push_back(std::move(s));
  };
  if (j.is_array()) {
    for (const auto& o : j) read_one(o);
  } else {
    read_one(j);
  }
  std::set<std::string> names;
  for (const auto& s : sets) {
    if (!names.insert(s.name).second) {
      Fail(ErrorKind::kParse, "duplicate word set name '" + s.name + "'");
    }
  }
  return sets;
}

inline std::vector<WordSet> LoadWordSets(const std::filesystem::path& path) {
  return ParseWordSets(io::ReadFile(path));
}

// ---------------------------------------------------------------------------
// WEAT

namespace weat_detail {

struct Resolved {
  std::vector<std::size_t> ids;
  std::vector<std::string> dropped;  // out-of-vocabulary words
};

inline Resolved Resolve(const EmbeddingModel& model, const WordSet& set,
                        std::string_view role) {
  set.Validate();
  Resolved r;
  for (const auto& w : set.words) {
    const int id = model.vocab().Find(w);
    if (id < 0) {
      r.dropped.push_back(w);
    } else {
      r.ids.push_back(static_cast<std::size_t>(id));
    }
  }
  if (r.ids.empty()) {
    Fail(ErrorKind::kNotFound, "set '" + set.name + "' (" + std::string(role) +
                                   ") has no in-vocabulary words");
  }
  return r;
}

// mean_a cos(w, a) - mean_b cos(w, b) over resolved attribute ids.
inline double Association(const EmbeddingModel& model, std::size_t w,
                          const std::vector<std::size_t>& a,
                          const std::vector<std::size_t>& b) {
  const auto wv = model.vector(w);
  double sa = 0, sb = 0;
  for (auto i : a) sa += Cosine(wv, model.vector(i));
  for (auto i : b) sb += Cosine(wv, model.vector(i));
  return sa / static_cast<double>(a.size()) - sb / static_cast<double>(b.size());
}

}  // namespace weat_detail

// s(w, A, B). Out-of-vocabulary attribute words are ignored; the target
// word itself must be in the vocabulary.
inline double WeatWordAssoc(std::string_view word, const WordSet& a,
                            const WordSet& b, const EmbeddingModel& model) {
  const int id = model.vocab().Find(word);
  if (id < 0) {
    Fail(ErrorKind::kNotFound, "token '" + std::string(word) + "' not in vocabulary");
  }
  const auto ra = weat_detail::Resolve(model, a, "A");
  const auto rb = weat_detail::Resolve(model, b, "B");
  return weat_detail::Association(model, static_cast<std::size_t>(id), ra.ids,
                                  rb.ids);
}

struct WeatResult {
  double statistic = 0;
  double effect_size = std::numeric_limits<double>::quiet_NaN();
  bool effect_size_defined = false;  // false when every association is equal
  double p_value = std::numeric_limits<double>::quiet_NaN();  // NaN if not run
  int n_permutations = 0;
  // Out-of-vocabulary words per role: "X", "Y", "A", "B".
  std::map<std::string, std::vector<std::string>> dropped;
};

// Precomputed per-target associations for one (X, Y, A, B) over a model.
class WeatProblem {
 public:
  WeatProblem(const WordSet& x, const WordSet& y, const WordSet& a,
              const WordSet& b, const EmbeddingModel& model) {
    const auto rx = weat_detail::Resolve(model, x, "X");
    const auto ry = weat_detail::Resolve(model, y, "Y");
    const auto ra = weat_detail::Resolve(model, a, "A");
    const auto rb = weat_detail::Resolve(model, b, "B");
    dropped_["X"] = rx.dropped;
    dropped_["Y"] = ry.dropped;
    dropped_["A"] = ra.dropped;
    dropped_["B"] = rb.dropped;
    for (auto i : rx.ids) x_.push_back(weat_detail::Association(model, i, ra.ids, rb.ids));
    for (auto i : ry.ids) y_.push_back(weat_detail::Association(model, i, ra.ids, rb.ids));
  }

  const std::vector<double>& x_assoc() const { return x_; }
  const std::vector<double>& y_assoc() const { return y_; }
  const std::map<std::string, std::vector<std::string>>& dropped() const {
    return dropped_;
  }

  // sum_x s(x) - sum_y s(y)
  double Statistic() const {
    double sx = 0, sy = 0;
    for (double v : x_) sx += v;
    for (double v : y_) sy += v;
    return sx - sy;
  }

  // (mean_x s - mean_y s) / population std of s over X then Y. nullopt
  // when that std is zero up to rounding.
  std::optional<double> EffectSize() const {
    double sx = 0, sy = 0;
    for (double v : x_) sx += v;
    for (double v : y_) sy += v;
    const double n = static_cast<double>(x_.size() + y_.size());
    const double mean = (sx + sy) / n;
    double ss = 0;
    for (double v : x_) ss += (v - mean) * (v - mean);
    for (double v : y_) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / n);
    double magnitude = 1.0;
    for (double v : x_) magnitude = std::max(magnitude, std::abs(v));
    for (double v : y_) magnitude = std::max(magnitude, std::abs(v));
    if (!(sd > 1e-12 * magnitude)) return std::nullopt;
    const double diff = sx / static_cast<double>(x_.size()) -
                        sy / static_cast<double>(y_.size());
    return diff / sd;
  }

  // One-sided permutation p-value: random re-partitions of X u Y into
  // groups of the original sizes, p = (1 + #{stat' >= stat}) / (1 + n).
  // Ties are judged with a small relative tolerance so that summation-order
  // rounding does not hide permutations equal to the observed split.
  double PValue(int n_permutations, std::uint64_t seed) const {
    if (n_permutations < 1) {
      Fail(ErrorKind::kInvalidArgument, "n_permutations must be >= 1");
    }
    std::vector<double> all(x_);
    all.insert(all.end(), y_.begin(), y_.end());
    double total = 0, scale = 0;
    for (double v : all) {
      total += v;
      scale += std::abs(v);
    }
    const double observed = Statistic();
    const double tol = 1e-12 * std::max(1.0, scale);
    const std::size_t nx = x_.size();
    Rng rng(seed);
    std::vector<std::size_t> idx(all.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::int64_t extreme = 0;
    for (int p = 0; p < n_permutations; ++p) {
      // Partial Fisher-Yates: the first nx slots become X'.
      double sx = 0;
      for (std::size_t i = 0; i < nx; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.Uniform(idx.size() - i));
        std::swap(idx[i], idx[j]);
        sx += all[idx[i]];
      }
      const double stat = sx - (total - sx);
      if (stat >= observed - tol) ++extreme;
    }
    return static_cast<double>(1 + extreme) / static_cast<double>(1 + n_permutations);
  }

 private:
  std::vector<double> x_, y_;
  std::map<std::string, std::vector<std::string>> dropped_;
};

inline double WeatStatistic(const WordSet& x, const WordSet& y, const WordSet& a,
                            const WordSet& b, const EmbeddingModel& model) {
  return WeatProblem(x, y, a, b, model).Statistic();
}

// NaN when undefined (zero spread of associations).
inline double WeatEffectSize(const WordSet& x, const WordSet& y,
                             const WordSet& a, const WordSet& b,
                             const EmbeddingModel& model) {
  return WeatProblem(x, y, a, b, model)
      .EffectSize()
      .value_or(std::numeric_limits<double>::quiet_NaN());
}

inline double WeatPValue(const WordSet& x, const WordSet& y, const WordSet& a,
                         const WordSet& b, const EmbeddingModel& model,
                         int n_permutations, std::uint64_t seed) {
  if (n_permutations < 100) {
    Fail(ErrorKind::kInvalidArgument, "n_permutations must be >= 100");
  }
  return WeatProblem(x, y, a, b, model).PValue(n_permutations, seed);
}

struct WeatTest {
  std::string name;
  WordSet x, y, a, b;
};

// Statistic, effect size and, when n_permutations > 0, the p-value.
inline WeatResult RunWeat(const WeatTest& test, const EmbeddingModel& model,
                          int n_permutations, std::uint64_t seed) {
  if (n_permutations != 0 && n_permutations < 100) {
    Fail(ErrorKind::kInvalidArgument, "n_permutations must be 0 or >= 100");
  }
  const WeatProblem problem(test.x, test.y, test.a, test.b, model);
  WeatResult r;
  r.statistic = problem.Statistic();
  if (auto d = problem.EffectSize()) {
    r.effect_size = *d;
    r.effect_size_defined = true;
  }
  if (n_permutations > 0) {
    r.p_value = problem.PValue(n_permutations, seed);
    r.n_permutations = n_permutations;
  }
  r.dropped = problem.dropped();
  return r;
}

// Tests file: JSON array of {name, X, Y, A, B}, each role naming a set in
// `sets`.
inline std::vector<WeatTest> ParseWeatTests(std::string_view json_text,
                                            const std::vector<WordSet>& sets) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    Fail(ErrorKind::kParse, std::string("weat tests: ") + e.what());
  }
  if (!j.is_array()) Fail(ErrorKind::kParse, "weat tests: expected a JSON array");
  auto find = [&](const std::string& name) -> const WordSet& {
    for (const auto& s : sets) {
      if (s.name == name) return s;
    }
    Fail(ErrorKind::kNotFound, "weat tests: unknown word set '" + name + "'");
  };
  std::vector<WeatTest> tests;
  for (const auto& o : j) {
    for (const char* key : {"name", "X", "Y", "A", "B"}) {
      if (!o.is_object() || !o.contains(key) || !o[key].is_string()) {
        Fail(ErrorKind::kParse, std::string("weat tests: missing string '") + key + "'");
      }
    }
    tests.push_back({o["name"].get<std::string>(), find(o["X"].get<std::string>()),
                     find(o["Y"].get<std::string>()), find(o["A"].get<std::string>()),
                     find(o["B"].get<std::string>())});
  }
  return tests;
}

struct TemporalWeatRow {
  std::string period;
  std::string test;
  WeatResult result;
};

// One row per (period, test), periods in the given order.
inline std::vector<TemporalWeatRow> TemporalWeat(
    const std::vector<std::pair<std::string, const EmbeddingModel*>>& period_models,
    const std::vector<WeatTest>& tests, int n_permutations = 0,
    std::uint64_t seed = 1) {
  std::vector<TemporalWeatRow> rows;
  for (const auto& [period, model] : period_models) {
    for (const auto& test : tests) {
      try {
        rows.push_back({period, test.name, RunWeat(test, *model, n_permutations, seed)});
      } catch (const Error& e) {
        throw Error(e.kind(), "period '" + period + "', test '" + test.name +
                                  "': " + e.what());
      }
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// PMI over group x descriptor co-occurrence counts

inline constexpr std::string_view kFemale = "female";
inline constexpr std::string_view kMale = "male";
inline constexpr std::string_view kNonWhite = "non-white";
inline constexpr std::string_view kWhite = "white";

class CountTable {
 public:
  void Add(std::string_view group, std::string_view word, std::uint64_t n = 1) {
    if (n == 0) return;
    counts_[std::string(group)][std::string(word)] += n;
  }

  std::uint64_t Get(std::string_view group, std::string_view word) const {
    auto g = counts_.find(std::string(group));
    if (g == counts_.end()) return 0;
    auto w = g->second.find(std::string(word));
    return w == g->second.end() ? 0 : w->second;
  }

  std::uint64_t GroupTotal(std::string_view group) const {
    std::uint64_t t = 0;
    if (auto g = counts_.find(std::string(group)); g != counts_.end()) {
      for (const auto& [w, n] : g->second) t += n;
    }
    return t;
  }

  std::uint64_t WordTotal(std::string_view word) const {
    std::uint64_t t = 0;
    for (const auto& [g, row] : counts_) {
      if (auto w = row.find(std::string(word)); w != row.end()) t += w->second;
    }
    return t;
  }

  std::uint64_t Total() const {
    std::uint64_t t = 0;
    for (const auto& [g, row] : counts_) {
      for (const auto& [w, n] : row) t += n;
    }
    return t;
  }

  bool empty() const { return counts_.empty(); }

  std::set<std::string> Words() const {
    std::set<std::string> out;
    for (const auto& [g, row] : counts_) {
      for (const auto& [w, n] : row) out.insert(w);
    }
    return out;
  }

  // Rows restricted to `groups`.
  CountTable Restrict(const std::vector<std::string_view>& groups) const {
    CountTable t;
    for (auto g : groups) {
      if (auto it = counts_.find(std::string(g)); it != counts_.end()) {
        t.counts_[it->first] = it->second;
      }
    }
    return t;
  }

  const std::map<std::string, std::map<std::string, std::uint64_t>>& rows() const {
    return counts_;
  }

 private:
  std::map<std::string, std::map<std::string, std::uint64_t>> counts_;
};

// Natural-log PMI under the plug-in estimate p(g, w) = count(g, w) / N with
// row and column sums as marginals.
inline double Pmi(std::string_view group, std::string_view word,
                  const CountTable& table) {
  const std::uint64_t joint = table.Get(group, word);
  if (joint == 0) {
    Fail(ErrorKind::kInvalidArgument, "zero co-occurrence count for (" +
                                          std::string(group) + ", " +
                                          std::string(word) + ")");
  }
  const auto n = static_cast<double>(table.Total());
  const double p_joint = static_cast<double>(joint) / n;
  const double p_group = static_cast<double>(table.GroupTotal(group)) / n;
  const double p_word = static_cast<double>(table.WordTotal(word)) / n;
  return std::log(p_joint / (p_group * p_word));
}

struct PmiPoint {
  std::string word;
  double gender_axis = 0;  // PMI(female, w) - PMI(male, w)
  double race_axis = 0;    // PMI(non-white, w) - PMI(white, w)
  std::uint64_t count_f = 0, count_m = 0, count_nw = 0, count_w = 0;
};

struct PmiSkip {
  std::string word;
  std::uint64_t total = 0;
  std::string reason;  // "below_min_count" or "zero_group_count"
};

struct PmiPlane {
  std::vector<PmiPoint> points;  // sorted by word
  std::vector<PmiSkip> skipped;
};

// Places each descriptor on the gender/race plane using the sub-table of
// the four groups female, male, non-white and white. Words whose four-group
// total is below `min_count_per_word`, or with a zero count in any of the
// four groups, are reported as skipped.
inline PmiPlane ComputePmiPlane(const CountTable& counts, std::uint64_t min_count_per_word = 10) {
  const CountTable t = counts.Restrict({kFemale, kMale, kNonWhite, kWhite});
  PmiPlane plane;
  for (const auto& word : t.Words()) {
    PmiPoint p;
    p.word = word;
    p.count_f = t.Get(kFemale, word);
    p.count_m = t.Get(kMale, word);
    p.count_nw = t.Get(kNonWhite, word);
    p.count_w = t.Get(kWhite, word);
    const std::uint64_t total = p.count_f + p.count_m + p.count_nw + p.count_w;
    if (total < min_count_per_word) {
      plane.skipped.push_back({word, total, "below_min_count"});
      continue;
    }
    if (p.count_f == 0 || p.count_m == 0 || p.count_nw == 0 || p.count_w == 0) {
      plane.skipped.push_back({word, total, "zero_group_count"});
      continue;
    }
    p.gender_axis = Pmi(kFemale, word, t) - Pmi(kMale, word, t);
    p.race_axis = Pmi(kNonWhite, word, t) - Pmi(kWhite, word, t);
    plane.points.push_back(std::move(p));
  }
  return plane;
}

// ---------------------------------------------------------------------------
// Lexicon scores

struct Lexicon {
  std::string name;
  std::map<std::string, double> entries;
};

// TSV "word<TAB>value"; '#' starts a comment line.
inline Lexicon ReadLexicon(std::istream& in, std::string name) {
  Lexicon lex{std::move(name), {}};
  std::string line;
  std::size_t line_no = 0;
  while (io::ReadLine(in, line)) {
    ++line_no;
    const auto trimmed = text::Trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const std::string where = "lexicon line " + std::to_string(line_no) + ": ";
    auto fields = text::SplitFields(line, '\t');
    if (fields.size() != 2) Fail(ErrorKind::kParse, where + "expected two fields");
    const std::string word = text::Lowercase(text::Trim(fields[0]));
    const std::string value(text::Trim(fields[1]));
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (word.empty() || value.empty() || end != value.c_str() + value.size() ||
        !std::isfinite(v)) {
      Fail(ErrorKind::kParse, where + "bad entry");
    }
    if (!lex.entries.emplace(word, v).second) {
      Fail(ErrorKind::kParse, where + "duplicate word '" + word + "'");
    }
  }
  if (lex.entries.empty()) Fail(ErrorKind::kParse, "lexicon has no entries");
  return lex;
}

inline Lexicon LoadLexicon(const std::filesystem::path& path) {
  std::ifstream in = io::OpenForRead(path);
  return ReadLexicon(in, path.stem().string());
}

struct LexiconScore {
  double value = 0;
  std::uint64_t covered = 0;  // descriptor occurrences found in the lexicon
};

// sum_i a_i * count(w_i) / sum_i count(w_i) over lexicon words; descriptors
// outside the lexicon are ignored.
inline LexiconScore LexiconAssoc(const Lexicon& lexicon,
                                 const std::map<std::string, std::uint64_t>& descriptor_counts,
                                 std::string_view group = "") {
  double weighted = 0;
  std::uint64_t covered = 0;
  for (const auto& [word, n] : descriptor_counts) {
    auto it = lexicon.entries.find(word);
    if (it == lexicon.entries.end() || n == 0) continue;
    weighted += it->second * static_cast<double>(n);
    covered += n;
  }
  if (covered == 0) {
    Fail(ErrorKind::kInvalidArgument,
         "no descriptors of group '" + std::string(group) + "' occur in lexicon '" +
             lexicon.name + "'");
  }
  return {weighted / static_cast<double>(covered), covered};
}

inline LexiconScore LexiconAssoc(const Lexicon& lexicon,
                                 const std::vector<std::string>& descriptors,
                                 std::string_view group = "") {
  std::map<std::string, std::uint64_t> counts;
  for (const auto& d : descriptors) ++counts[d];
  return LexiconAssoc(lexicon, counts, group);
}

}  // namespace histbias
