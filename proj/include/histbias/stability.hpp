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

// Run-to-run stability of nearest-neighbour sets and robustness of an
// embedding space to known OCR misspellings.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <unordered_set>
#include <utility>
#include <vector>

#include "histbias/embed.hpp"
#include "histbias/error.hpp"
#include "histbias/io.hpp"
#include "histbias/text.hpp"
#include "histbias/tokenize.hpp"
#include "json.hpp"

namespace histbias {

template <typename Set>
double Jaccard(const Set& a, const Set& b) {
  if (a.empty() && b.empty()) {
    Fail(ErrorKind::kInvalidArgument, "jaccard of two empty sets");
  }
  std::size_t inter = 0;
  for (const auto& x : a) inter += b.count(x);
  return static_cast<double>(inter) /
         static_cast<double>(a.size() + b.size() - inter);
}

namespace stability_detail {

// Runs fn(i) for i in [0, n) on up to `threads` workers. Results must be
// written to per-index slots so the outcome does not depend on scheduling.
template <typename Fn>
void ParallelFor(std::size_t n, int threads, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (!failed.load()) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace stability_detail

// Mean pairwise Jaccard similarity of top-k neighbour sets, averaged first
// over unordered model pairs and then over the tokens every model knows.
inline double StabilityJaccard(const std::vector<const EmbeddingModel*>& models,
                               std::size_t k, int threads = 1) {
  if (models.size() < 2) {
    Fail(ErrorKind::kInvalidArgument, "stability needs at least two models");
  }
  if (k < 1) Fail(ErrorKind::kInvalidArgument, "k must be >= 1");
  for (const auto* m : models) {
    if (m->size() < 2) {
      Fail(ErrorKind::kInvalidArgument, "stability needs vocabularies of >= 2 tokens");
    }
  }
  std::vector<std::string> shared;
  for (const auto& tok : models[0]->vocab().tokens()) {
    bool everywhere = true;
    for (std::size_t m = 1; m < models.size() && everywhere; ++m) {
      everywhere = models[m]->vocab().Contains(tok);
    }
    if (everywhere) shared.push_back(tok);
  }
  if (shared.empty()) {
    Fail(ErrorKind::kInvalidArgument, "models share no vocabulary");
  }
  std::vector<NeighborIndex> indexes;
  for (const auto* m : models) indexes.emplace_back(*m);

  std::vector<double> per_token(shared.size());
  stability_detail::ParallelFor(shared.size(), threads, [&](std::size_t t) {
    std::vector<std::unordered_set<std::string>> sets;
    for (const auto& index : indexes) {
      const int id = index.model().vocab().Find(shared[t]);
      std::unordered_set<std::string> s;
      for (auto& n : index.Query(static_cast<std::size_t>(id), k, true)) {
        s.insert(std::move(n.token));
      }
      sets.push_back(std::move(s));
    }
    double sum = 0;
    std::size_t pairs = 0;
    for (std::size_t a = 0; a < sets.size(); ++a) {
      for (std::size_t b = a + 1; b < sets.size(); ++b) {
        sum += Jaccard(sets[a], sets[b]);
        ++pairs;
      }
    }
    per_token[t] = sum / static_cast<double>(pairs);
  });
  double total = 0;
  for (double x : per_token) total += x;
  return total / static_cast<double>(per_token.size());
}

inline double StabilityJaccard(const std::vector<EmbeddingModel>& models,
                               std::size_t k, int threads = 1) {
  std::vector<const EmbeddingModel*> ptrs;
  for (const auto& m : models) ptrs.push_back(&m);
  return StabilityJaccard(ptrs, k, threads);
}

// ---------------------------------------------------------------------------
// Misspelling compatibility

struct MisspellPair {
  std::string misspelt;
  std::string correct;

  friend bool operator==(const MisspellPair&, const MisspellPair&) = default;
};

// TSV "misspelt<TAB>correct"; '#' starts a comment line.
inline std::vector<MisspellPair> ReadMisspellPairs(std::istream& in,
                                                   bool lowercase = true) {
  std::vector<MisspellPair> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (io::ReadLine(in, line)) {
    ++line_no;
    const auto trimmed = text::Trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    auto fields = text::SplitFields(line, '\t');
    const std::string where = "pairs line " + std::to_string(line_no) + ": ";
    if (fields.size() != 2) Fail(ErrorKind::kParse, where + "expected two fields");
    MisspellPair p{std::string(text::Trim(fields[0])),
                   std::string(text::Trim(fields[1]))};
    if (lowercase) {
      p.misspelt = text::Lowercase(p.misspelt);
      p.correct = text::Lowercase(p.correct);
    }
    if (p.misspelt.empty() || p.correct.empty()) {
      Fail(ErrorKind::kParse, where + "empty word");
    }
    if (p.misspelt == p.correct) {
      Fail(ErrorKind::kParse, where + "misspelling equals its correction");
    }
    pairs.push_back(std::move(p));
  }
  return pairs;
}

inline std::vector<MisspellPair> LoadMisspellPairs(
    const std::filesystem::path& path, bool lowercase = true) {
  std::ifstream in = io::OpenForRead(path);
  return ReadMisspellPairs(in, lowercase);
}

struct MisspellingResult {
  double top_k_rate = 0;      // over all pairs; out-of-vocabulary counts as a miss
  double vocab_coverage = 0;  // fraction of misspellings the model can represent
  std::size_t pairs = 0;
  std::size_t covered = 0;
  std::size_t hits = 0;
};

// For word-level models a misspelling is covered when it is in the embedding
// vocabulary. When `bpe` is given, coverage instead means the tokenizer
// keeps the whole misspelling as a single symbol. A hit needs the
// misspelling in the embedding vocabulary and the correct word among its k
// nearest neighbours.
inline MisspellingResult MisspellingCompat(const EmbeddingModel& model,
                                           const std::vector<MisspellPair>& pairs,
                                           std::size_t k = 5,
                                           const BpeModel* bpe = nullptr) {
  if (pairs.empty()) Fail(ErrorKind::kInvalidArgument, "no misspelling pairs");
  if (k < 1) Fail(ErrorKind::kInvalidArgument, "k must be >= 1");
  std::optional<BpeEncoder> encoder;
  if (bpe) encoder.emplace(*bpe);
  const NeighborIndex index(model);
  MisspellingResult r;
  r.pairs = pairs.size();
  for (const auto& p : pairs) {
    const int id = model.vocab().Find(p.misspelt);
    const bool covered =
        encoder ? encoder->Segment(p.misspelt).size() == 1 : id >= 0;
    if (covered) ++r.covered;
    if (id < 0) continue;
    for (const auto& n : index.Query(static_cast<std::size_t>(id), k, true)) {
      if (n.token == p.correct) {
        ++r.hits;
        break;
      }
    }
  }
  r.top_k_rate = static_cast<double>(r.hits) / static_cast<double>(r.pairs);
  r.vocab_coverage = static_cast<double>(r.covered) / static_cast<double>(r.pairs);
  return r;
}

// ---------------------------------------------------------------------------
// Suite

struct StabilityReport {
  std::string tokenizer;  // label of the token streams, e.g. "word" or "bpe"
  TrainConfig config;
  int n_runs = 0;
  std::size_t k = 20;
  std::size_t misspelling_k = 5;
  double mean_jaccard_topk = 0;
  double misspelling_top5_rate = 0;      // mean over runs
  double misspelling_vocab_coverage = 0;  // mean over runs
};

struct StabilityOptions {
  std::size_t k = 20;
  std::size_t misspelling_k = 5;
  int threads = 1;
  std::string tokenizer = "word";
  const BpeModel* bpe = nullptr;
};

// Trains n_runs models per config (seeds config.seed, config.seed + 1, ...)
// and reports neighbour stability and misspelling compatibility. Each model
// is trained single-threaded; `threads` spreads runs over workers, so
// results do not depend on the thread count.
inline std::vector<StabilityReport> RunStabilitySuite(
    const std::vector<TokenStream>& streams, const std::vector<TrainConfig>& grid,
    int n_runs, const std::vector<MisspellPair>& pairs,
    const StabilityOptions& options = {}) {
  if (n_runs < 2) Fail(ErrorKind::kInvalidArgument, "n_runs must be >= 2");
  if (grid.empty()) Fail(ErrorKind::kInvalidArgument, "empty configuration grid");
  std::vector<StabilityReport> reports;
  for (const auto& config : grid) {
    config.Validate();
    std::vector<EmbeddingModel> models(static_cast<std::size_t>(n_runs));
    stability_detail::ParallelFor(models.size(), options.threads,
                                  [&](std::size_t r) {
                                    TrainConfig c = config;
                                    c.seed = config.seed + r;
                                    models[r] = TrainSgns(streams, c, 1);
                                  });
    StabilityReport rep;
    rep.tokenizer = options.tokenizer;
    rep.config = config;
    rep.n_runs = n_runs;
    rep.k = options.k;
    rep.misspelling_k = options.misspelling_k;
    rep.mean_jaccard_topk = StabilityJaccard(models, options.k, options.threads);
    if (!pairs.empty()) {
      double rate = 0, coverage = 0;
      for (const auto& m : models) {
        const auto r = MisspellingCompat(m, pairs, options.misspelling_k, options.bpe);
        rate += r.top_k_rate;
        coverage += r.vocab_coverage;
      }
      rep.misspelling_top5_rate = rate / n_runs;
      rep.misspelling_vocab_coverage = coverage / n_runs;
    }
    reports.push_back(std::move(rep));
  }
  return reports;
}

inline nlohmann::ordered_json TrainConfigToJson(const TrainConfig& c) {
  nlohmann::ordered_json j;
  j["dim"] = c.dim;
  j["min_count"] = c.min_count;
  j["window"] = c.window;
  j["negatives"] = c.negatives;
  j["epochs"] = c.epochs;
  j["initial_lr"] = c.initial_lr;
  j["subsample_threshold"] = c.subsample_threshold;
  j["seed"] = c.seed;
  return j;
}

// Reads the fields present in `j` over `base`.
inline TrainConfig TrainConfigFromJson(const nlohmann::json& j,
                                       TrainConfig base = {}) {
  if (!j.is_object()) Fail(ErrorKind::kParse, "config must be a JSON object");
  try {
    if (j.contains("dim")) base.dim = j["dim"].get<int>();
    if (j.contains("min_count")) base.min_count = j["min_count"].get<int>();
    if (j.contains("window")) base.window = j["window"].get<int>();
    if (j.contains("negatives")) base.negatives = j["negatives"].get<int>();
    if (j.contains("epochs")) base.epochs = j["epochs"].get<int>();
    if (j.contains("initial_lr")) base.initial_lr = j["initial_lr"].get<double>();
    if (j.contains("subsample_threshold")) {
      base.subsample_threshold = j["subsample_threshold"].get<double>();
    }
    if (j.contains("seed")) base.seed = j["seed"].get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorKind::kParse, std::string("config: ") + e.what());
  }
  base.Validate();
  return base;
}

inline nlohmann::ordered_json StabilityReportToJson(const StabilityReport& r) {
  nlohmann::ordered_json j;
  j["tokenizer"] = r.tokenizer;
  j["config"] = TrainConfigToJson(r.config);
  j["n_runs"] = r.n_runs;
  j["k"] = r.k;
  j["misspelling_k"] = r.misspelling_k;
  j["mean_jaccard_topk"] = r.mean_jaccard_topk;
  j["misspelling_top5_rate"] = r.misspelling_top5_rate;
  j["misspelling_vocab_coverage"] = r.misspelling_vocab_coverage;
  return j;
}

}  // namespace histbias
