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

// Skip-gram negative-sampling word embeddings: vocabulary construction,
// training, cosine queries and the word2vec text vector format.

#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <istream>
#include <map>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "histbias/error.hpp"
#include "histbias/io.hpp"
#include "histbias/random.hpp"
#include "histbias/tokenize.hpp"

namespace histbias {

// Unset fields follow the usual word2vec/gensim defaults; dim and min_count
// default to the configuration picked for the downstream bias analysis.
struct TrainConfig {
  int dim = 100;
  int min_count = 20;
  int window = 5;
  int negatives = 5;
  int epochs = 5;
  double initial_lr = 0.025;
  double subsample_threshold = 1e-3;
  std::uint64_t seed = 1;

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;

  void Validate() const {
    auto require = [](bool ok, const char* what) {
      if (!ok) Fail(ErrorKind::kInvalidArgument, what);
    };
    require(dim >= 1 && dim <= 4096, "dim must be in [1, 4096]");
    require(min_count >= 1, "min_count must be >= 1");
    require(window >= 1, "window must be >= 1");
    require(negatives >= 1, "negatives must be >= 1");
    require(epochs >= 1, "epochs must be >= 1");
    require(initial_lr > 0 && std::isfinite(initial_lr),
            "initial_lr must be > 0");
    require(subsample_threshold >= 0 && std::isfinite(subsample_threshold),
            "subsample_threshold must be >= 0");
  }
};

class Vocabulary {
 public:
  Vocabulary() = default;

  void Add(std::string token, std::uint64_t count) {
    const int id = static_cast<int>(tokens_.size());
    if (!index_.emplace(token, id).second) {
      Fail(ErrorKind::kInvalidArgument, "duplicate vocabulary token '" + token + "'");
    }
    tokens_.push_back(std::move(token));
    counts_.push_back(count);
  }

  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }
  const std::string& token(std::size_t i) const { return tokens_[i]; }
  std::uint64_t count(std::size_t i) const { return counts_[i]; }
  const std::vector<std::string>& tokens() const { return tokens_; }

  // -1 when absent.
  int Find(std::string_view token) const {
    auto it = index_.find(std::string(token));
    return it == index_.end() ? -1 : it->second;
  }
  bool Contains(std::string_view token) const { return Find(token) >= 0; }

 private:
  std::vector<std::string> tokens_;
  std::vector<std::uint64_t> counts_;
  std::unordered_map<std::string, int> index_;
};

// Tokens with frequency >= min_count, ordered by descending frequency and
// then lexicographically.
inline Vocabulary BuildVocab(const std::vector<TokenStream>& streams,
                             int min_count) {
  if (streams.empty()) Fail(ErrorKind::kInvalidArgument, "no token streams");
  if (min_count < 1) Fail(ErrorKind::kInvalidArgument, "min_count must be >= 1");
  std::unordered_map<std::string, std::uint64_t> freq;
  for (const auto& s : streams) {
    for (const auto& t : s.tokens) ++freq[t];
  }
  std::vector<std::pair<std::string, std::uint64_t>> kept;
  for (auto& [tok, n] : freq) {
    if (n >= static_cast<std::uint64_t>(min_count)) kept.emplace_back(tok, n);
  }
  if (kept.empty()) {
    Fail(ErrorKind::kInvalidArgument,
         "empty vocabulary at min_count " + std::to_string(min_count));
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  Vocabulary vocab;
  for (auto& [tok, n] : kept) vocab.Add(std::move(tok), n);
  return vocab;
}

// Input ("word") vectors only; output vectors are discarded after training.
class EmbeddingModel {
 public:
  EmbeddingModel() = default;
  EmbeddingModel(Vocabulary vocab, int dim, std::vector<double> vectors,
                 TrainConfig config = {})
      : vocab_(std::move(vocab)),
        dim_(dim),
        vectors_(std::move(vectors)),
        config_(config) {
    if (dim_ < 1) Fail(ErrorKind::kInvalidArgument, "dim must be >= 1");
    if (vectors_.size() != vocab_.size() * static_cast<std::size_t>(dim_)) {
      Fail(ErrorKind::kInvalidArgument, "vector matrix does not match vocabulary");
    }
  }

  const Vocabulary& vocab() const { return vocab_; }
  int dim() const { return dim_; }
  std::size_t size() const { return vocab_.size(); }
  const TrainConfig& config() const { return config_; }
  const std::vector<double>& data() const { return vectors_; }

  std::span<const double> vector(std::size_t i) const {
    return {vectors_.data() + i * static_cast<std::size_t>(dim_),
            static_cast<std::size_t>(dim_)};
  }

  // Throws kNotFound naming the token.
  std::span<const double> vector(std::string_view token) const {
    const int id = vocab_.Find(token);
    if (id < 0) {
      Fail(ErrorKind::kNotFound,
           "token '" + std::string(token) + "' not in vocabulary");
    }
    return vector(static_cast<std::size_t>(id));
  }

  // Mean SGNS loss per (positive or negative) example, one entry per epoch.
  const std::vector<double>& epoch_loss() const { return epoch_loss_; }
  void set_epoch_loss(std::vector<double> loss) { epoch_loss_ = std::move(loss); }

  // Copy with every vector multiplied by `factor`.
  EmbeddingModel Scaled(double factor) const {
    EmbeddingModel copy = *this;
    for (auto& v : copy.vectors_) v *= factor;
    return copy;
  }

 private:
  Vocabulary vocab_;
  int dim_ = 0;
  std::vector<double> vectors_;
  TrainConfig config_;
  std::vector<double> epoch_loss_;
};

// ---------------------------------------------------------------------------
// Cosine similarity

inline double Norm(std::span<const double> v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double Dot(std::span<const double> u, std::span<const double> v) {
  double s = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    s += u[i] * v[i];
  }
  return s;
}

inline double Cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    Fail(ErrorKind::kInvalidArgument, "cosine of vectors with different sizes");
  }
  const double nu = Norm(u);
  const double nv = Norm(v);
  if (nu == 0 || nv == 0) {
    Fail(ErrorKind::kInvalidArgument, "cosine of a zero vector");
  }
  const double c = Dot(u, v) / (nu * nv);
  return std::clamp(c, -1.0, 1.0);
}

inline double Cosine(const std::vector<double>& u,
                     const std::vector<double>& v) {
  return Cosine(std::span<const double>(u), std::span<const double>(v));
}

struct Neighbor {
  std::string token;
  double cosine = 0;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

// Batched nearest-neighbour queries over one model; caches vector norms.
class NeighborIndex {
 public:
  explicit NeighborIndex(const EmbeddingModel& model) : model_(&model) {
    norms_.resize(model.size());
    for (std::size_t i = 0; i < model.size(); ++i) {
      norms_[i] = Norm(model.vector(i));
    }
  }

  const EmbeddingModel& model() const { return *model_; }

  // The k highest-cosine tokens, descending, ties broken by token. Zero
  // vectors are never returned.
  std::vector<Neighbor> Query(std::size_t id, std::size_t k,
                              bool exclude_self) const {
    const auto q = model_->vector(id);
    const double nq = norms_[id];
    if (nq == 0) {
      Fail(ErrorKind::kInvalidArgument,
           "token '" + model_->vocab().token(id) + "' has a zero vector");
    }
    std::vector<std::pair<double, std::uint32_t>> scored;
    scored.reserve(model_->size());
    for (std::size_t i = 0; i < model_->size(); ++i) {
      if ((exclude_self && i == id) || norms_[i] == 0) continue;
      const double c =
          std::clamp(Dot(q, model_->vector(i)) / (nq * norms_[i]), -1.0, 1.0);
      scored.emplace_back(c, static_cast<std::uint32_t>(i));
    }
    const auto& vocab = model_->vocab();
    auto better = [&](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return vocab.token(a.second) < vocab.token(b.second);
    };
    const std::size_t n = std::min(k, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(n),
                      scored.end(), better);
    std::vector<Neighbor> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back({vocab.token(scored[i].second), scored[i].first});
    }
    return out;
  }

 private:
  const EmbeddingModel* model_;
  std::vector<double> norms_;
};

inline std::vector<Neighbor> TopKNeighbors(const EmbeddingModel& model,
                                           std::string_view token,
                                           std::size_t k,
                                           bool exclude_self = true) {
  if (k < 1) Fail(ErrorKind::kInvalidArgument, "k must be >= 1");
  const int id = model.vocab().Find(token);
  if (id < 0) {
    Fail(ErrorKind::kNotFound,
         "token '" + std::string(token) + "' not in vocabulary");
  }
  return NeighborIndex(model).Query(static_cast<std::size_t>(id), k,
                                    exclude_self);
}

// ---------------------------------------------------------------------------
// Training

namespace sgns_detail {

// Walker alias table for the unigram^0.75 noise distribution.
class AliasSampler {
 public:
  explicit AliasSampler(const std::vector<double>& weights) {
    const std::size_t n = weights.size();
    prob_.assign(n, 0.0);
    alias_.assign(n, 0);
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    std::vector<double> scaled(n);
    std::vector<std::uint32_t> small, large;
    for (std::size_t i = 0; i < n; ++i) {
      scaled[i] = weights[i] * static_cast<double>(n) / total;
      (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
    }
    while (!small.empty() && !large.empty()) {
      const auto s = small.back();
      small.pop_back();
      const auto l = large.back();
      prob_[s] = scaled[s];
      alias_[s] = l;
      scaled[l] = (scaled[l] + scaled[s]) - 1.0;
      if (scaled[l] < 1.0) {
        large.pop_back();
        small.push_back(l);
      }
    }
    for (auto i : large) prob_[i] = 1.0;
    for (auto i : small) prob_[i] = 1.0;
  }

  std::uint32_t Sample(Rng& rng) const {
    const auto i = static_cast<std::uint32_t>(rng.Uniform(prob_.size()));
    return rng.NextDouble() < prob_[i] ? i : alias_[i];
  }

 private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

// Tabulated logistic function and log-sigmoid on [-kMaxExp, kMaxExp].
class SigmoidTable {
 public:
  static constexpr float kMaxExp = 6.0f;
  static constexpr int kSize = 1024;

  SigmoidTable() {
    for (int i = 0; i <= kSize; ++i) {
      const double x = (2.0 * i / kSize - 1.0) * kMaxExp;
      sigmoid_[i] = static_cast<float>(1.0 / (1.0 + std::exp(-x)));
      log_sigmoid_[i] = static_cast<float>(-std::log1p(std::exp(-x)));
    }
  }

  int Index(float x) const {
    if (x <= -kMaxExp) return 0;
    if (x >= kMaxExp) return kSize;
    return static_cast<int>((x + kMaxExp) * (kSize / (2 * kMaxExp)) + 0.5f);
  }
  float Sigmoid(int idx) const { return sigmoid_[idx]; }
  float LogSigmoid(int idx) const { return log_sigmoid_[idx]; }

 private:
  std::array<float, kSize + 1> sigmoid_;
  std::array<float, kSize + 1> log_sigmoid_;
};

// Dot product with eight independent partial sums so the compiler can
// vectorize it without reassociating a single accumulator.
inline float DotF(const float* a, const float* b, std::size_t n) {
  float acc[8] = {0, 0, 0, 0, 0, 0, 0, 0};
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    for (std::size_t j = 0; j < 8; ++j) acc[j] += a[i + j] * b[i + j];
  }
  float f = 0;
  for (; i < n; ++i) f += a[i] * b[i];
  for (float x : acc) f += x;
  return f;
}

struct Shared {
  const TrainConfig* config;
  const std::vector<std::vector<std::uint32_t>>* sentences;
  const std::vector<float>* keep_prob;
  const AliasSampler* noise;
  const SigmoidTable* sigmoid;
  float* syn0;
  float* syn1;
  std::uint64_t total_words;  // epochs * corpus words
  std::atomic<std::uint64_t>* processed;
};

struct WorkerResult {
  double loss = 0;
  std::uint64_t examples = 0;
};

// One epoch over sentences [begin, end). Updates are lock-free when several
// workers share the matrices.
inline WorkerResult TrainRange(const Shared& sh, std::size_t begin,
                               std::size_t end, Rng& rng) {
  const TrainConfig& cfg = *sh.config;
  const int dim = cfg.dim;
  const auto dimz = static_cast<std::size_t>(dim);
  const float lr0 = static_cast<float>(cfg.initial_lr);
  const float lr_floor = lr0 * 1e-4f;
  std::vector<float> grad(dimz);
  std::vector<std::uint32_t> kept;
  WorkerResult result;
  std::uint64_t local = 0;
  float lr = lr0;

  auto update_lr = [&]() {
    const std::uint64_t done =
        sh.processed->fetch_add(local, std::memory_order_relaxed) + local;
    local = 0;
    const double frac =
        1.0 - static_cast<double>(done) / static_cast<double>(sh.total_words + 1);
    lr = std::max(lr_floor, static_cast<float>(lr0 * frac));
  };

  for (std::size_t s = begin; s < end; ++s) {
    const auto& sentence = (*sh.sentences)[s];
    kept.clear();
    for (auto w : sentence) {
      ++local;
      if ((*sh.keep_prob)[w] < 1.0f &&
          static_cast<float>(rng.NextDouble()) >= (*sh.keep_prob)[w]) {
        continue;
      }
      kept.push_back(w);
    }
    for (std::size_t pos = 0; pos < kept.size(); ++pos) {
      if (local >= 1000) update_lr();
      const std::uint32_t center = kept[pos];
      const int reduced = static_cast<int>(rng.Uniform(cfg.window));
      const int span = cfg.window - reduced;
      const std::size_t lo = pos >= static_cast<std::size_t>(span) ? pos - span : 0;
      const std::size_t hi = std::min(kept.size() - 1, pos + span);
      for (std::size_t c = lo; c <= hi; ++c) {
        if (c == pos) continue;
        // The context word's input vector predicts the centre word.
        float* in = sh.syn0 + kept[c] * dimz;
        std::fill(grad.begin(), grad.end(), 0.0f);
        for (int d = 0; d <= cfg.negatives; ++d) {
          std::uint32_t target;
          float label;
          if (d == 0) {
            target = center;
            label = 1.0f;
          } else {
            target = sh.noise->Sample(rng);
            if (target == center) continue;
            label = 0.0f;
          }
          float* out = sh.syn1 + target * dimz;
          const float f = DotF(in, out, dimz);
          const int idx = sh.sigmoid->Index(f);
          const float g = (label - sh.sigmoid->Sigmoid(idx)) * lr;
          result.loss -= label > 0 ? sh.sigmoid->LogSigmoid(idx)
                                   : sh.sigmoid->LogSigmoid(
                                         SigmoidTable::kSize - idx);
          ++result.examples;
          for (std::size_t i = 0; i < dimz; ++i) grad[i] += g * out[i];
          for (std::size_t i = 0; i < dimz; ++i) out[i] += g * in[i];
        }
        for (std::size_t i = 0; i < dimz; ++i) in[i] += grad[i];
      }
    }
  }
  update_lr();
  return result;
}

}  // namespace sgns_detail

// Skip-gram with negative sampling. Windows are shrunk uniformly per centre
// word, noise words follow unigram^0.75, frequent words are subsampled with
// the word2vec keep probability, and the learning rate decays linearly to a
// floor of initial_lr * 1e-4. With threads == 1 the result is a pure
// function of (streams, config); with more threads, workers share the
// matrices without locks and results vary run to run.
inline EmbeddingModel TrainSgns(const std::vector<TokenStream>& streams,
                                const TrainConfig& config, int threads = 1) {
  config.Validate();
  if (threads < 1) Fail(ErrorKind::kInvalidArgument, "threads must be >= 1");
  Vocabulary vocab = BuildVocab(streams, config.min_count);
  const std::size_t v = vocab.size();
  const auto dimz = static_cast<std::size_t>(config.dim);

  std::vector<std::vector<std::uint32_t>> sentences;
  sentences.reserve(streams.size());
  std::uint64_t corpus_words = 0;
  for (const auto& s : streams) {
    std::vector<std::uint32_t> ids;
    ids.reserve(s.tokens.size());
    for (const auto& t : s.tokens) {
      const int id = vocab.Find(t);
      if (id >= 0) ids.push_back(static_cast<std::uint32_t>(id));
    }
    corpus_words += ids.size();
    if (!ids.empty()) sentences.push_back(std::move(ids));
  }

  std::vector<float> keep_prob(v, 1.0f);
  if (config.subsample_threshold > 0) {
    const double threshold_count =
        config.subsample_threshold * static_cast<double>(corpus_words);
    for (std::size_t i = 0; i < v; ++i) {
      const auto cn = static_cast<double>(vocab.count(i));
      const double p = (std::sqrt(cn / threshold_count) + 1.0) * threshold_count / cn;
      keep_prob[i] = static_cast<float>(std::min(1.0, p));
    }
  }
  std::vector<double> noise_weights(v);
  for (std::size_t i = 0; i < v; ++i) {
    noise_weights[i] = std::pow(static_cast<double>(vocab.count(i)), 0.75);
  }
  const sgns_detail::AliasSampler noise(noise_weights);
  const sgns_detail::SigmoidTable sigmoid;

  Rng init_rng(config.seed);
  std::vector<float> syn0(v * dimz);
  for (auto& x : syn0) {
    x = static_cast<float>((init_rng.NextDouble() - 0.5) / config.dim);
  }
  std::vector<float> syn1(v * dimz, 0.0f);

  std::atomic<std::uint64_t> processed{0};
  sgns_detail::Shared shared{&config,     &sentences,  &keep_prob,
                             &noise,      &sigmoid,    syn0.data(),
                             syn1.data(), corpus_words * config.epochs,
                             &processed};

  // Worker w trains sentences [bounds[w], bounds[w+1]), split by word count.
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(threads, sentences.size()));
  std::vector<std::size_t> bounds{0};
  {
    std::uint64_t acc = 0;
    for (std::size_t s = 0; s < sentences.size() && bounds.size() < workers; ++s) {
      acc += sentences[s].size();
      if (acc * workers >= corpus_words * bounds.size()) bounds.push_back(s + 1);
    }
    while (bounds.size() <= workers) bounds.push_back(sentences.size());
    bounds.back() = sentences.size();
  }
  std::vector<Rng> rngs;
  for (std::size_t w = 0; w < workers; ++w) {
    rngs.emplace_back(config.seed * 0x9E3779B97F4A7C15ULL + 0x632BE59BD9B4E019ULL + w);
  }

  std::vector<double> epoch_loss;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::vector<sgns_detail::WorkerResult> results(workers);
    if (workers == 1) {
      results[0] = sgns_detail::TrainRange(shared, 0, sentences.size(), rngs[0]);
    } else {
      std::vector<std::thread> pool;
      for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          results[w] = sgns_detail::TrainRange(shared, bounds[w], bounds[w + 1],
                                               rngs[w]);
        });
      }
      for (auto& t : pool) t.join();
    }
    double loss = 0;
    std::uint64_t examples = 0;
    for (const auto& r : results) {
      loss += r.loss;
      examples += r.examples;
    }
    epoch_loss.push_back(examples ? loss / static_cast<double>(examples) : 0.0);
  }

  EmbeddingModel model(std::move(vocab), config.dim,
                       std::vector<double>(syn0.begin(), syn0.end()), config);
  model.set_epoch_loss(std::move(epoch_loss));
  return model;
}

// ---------------------------------------------------------------------------
// word2vec text format: "<n> <dim>" then "<token> <v1> ... <vdim>".

inline std::string VectorsToText(const EmbeddingModel& model) {
  std::string out = std::to_string(model.size()) + " " +
                    std::to_string(model.dim()) + "\n";
  for (std::size_t i = 0; i < model.size(); ++i) {
    out += model.vocab().token(i);
    for (double x : model.vector(i)) {
      out += ' ';
      out += io::FormatNumber(x);
    }
    out += '\n';
  }
  return out;
}

inline void SaveVectors(const EmbeddingModel& model,
                        const std::filesystem::path& path) {
  io::AtomicWrite(path, VectorsToText(model));
}

// Loaded models carry no counts (all zero) and a default config apart from
// dim.
inline EmbeddingModel ReadVectors(std::istream& in) {
  std::string line;
  if (!io::ReadLine(in, line)) Fail(ErrorKind::kParse, "vectors: empty file");
  std::istringstream header(line);
  long long n = -1, dim = -1;
  std::string extra;
  if (!(header >> n >> dim) || (header >> extra)) {
    Fail(ErrorKind::kParse, "vectors: bad header '" + line + "'");
  }
  if (n <= 0) Fail(ErrorKind::kParse, "vectors: header declares no vectors");
  if (dim < 1 || dim > 4096) Fail(ErrorKind::kParse, "vectors: bad dimension");
  Vocabulary vocab;
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(n * dim));
  for (long long row = 0; row < n; ++row) {
    if (!io::ReadLine(in, line)) {
      Fail(ErrorKind::kParse, "vectors: header declares " + std::to_string(n) +
                                  " rows, found " + std::to_string(row));
    }
    const std::string where = "vectors line " + std::to_string(row + 2) + ": ";
    const char* p = line.data();
    const char* end = p + line.size();
    while (p < end && *p == ' ') ++p;
    const char* tok_begin = p;
    while (p < end && *p != ' ') ++p;
    std::string token(tok_begin, p);
    if (token.empty()) Fail(ErrorKind::kParse, where + "missing token");
    long long cols = 0;
    while (true) {
      while (p < end && *p == ' ') ++p;
      if (p >= end) break;
      char* num_end = nullptr;
      const double x = std::strtod(p, &num_end);
      if (num_end == p || (num_end < end && *num_end != ' ')) {
        Fail(ErrorKind::kParse, where + "bad number");
      }
      if (!std::isfinite(x)) Fail(ErrorKind::kParse, where + "non-finite value");
      data.push_back(x);
      ++cols;
      p = num_end;
    }
    if (cols != dim) {
      Fail(ErrorKind::kParse, where + "expected " + std::to_string(dim) +
                                  " values, found " + std::to_string(cols));
    }
    if (vocab.Contains(token)) {
      Fail(ErrorKind::kParse, where + "duplicate token '" + token + "'");
    }
    vocab.Add(std::move(token), 0);
  }
  while (io::ReadLine(in, line)) {
    if (!line.empty()) {
      Fail(ErrorKind::kParse, "vectors: more rows than the header declares");
    }
  }
  TrainConfig cfg;
  cfg.dim = static_cast<int>(dim);
  cfg.min_count = 1;
  return EmbeddingModel(std::move(vocab), static_cast<int>(dim), std::move(data),
                        cfg);
}

inline EmbeddingModel LoadVectors(const std::filesystem::path& path) {
  std::ifstream in = io::OpenForRead(path);
  return ReadVectors(in);
}

}  // namespace histbias
