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

#include <algorithm>
#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "histbias/embed.hpp"
#include "support/synthetic.hpp"
#include "unit/test_util.hpp"

namespace histbias {
namespace {

std::vector<TokenStream> Streams(const std::map<std::string, int>& counts) {
  TokenStream s{"d", {}};
  for (const auto& [tok, n] : counts) {
    for (int i = 0; i < n; ++i) s.tokens.push_back(tok);
  }
  return {s};
}

TEST(BuildVocab, ThresholdFilter) {
  const auto v = BuildVocab(Streams({{"a", 5}, {"b", 2}}), 3);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v.token(0), "a");
  EXPECT_EQ(v.count(0), 5u);
  EXPECT_FALSE(v.Contains("b"));
}

TEST(BuildVocab, MinCountOneKeepsAll) {
  const auto v = BuildVocab(Streams({{"a", 5}, {"b", 2}, {"c", 1}}), 1);
  EXPECT_EQ(v.size(), 3u);
}

TEST(BuildVocab, OrdersByFrequencyThenToken) {
  const auto v = BuildVocab(Streams({{"x", 7}, {"y", 7}, {"z", 9}}), 1);
  EXPECT_EQ(v.tokens(), (std::vector<std::string>{"z", "x", "y"}));
  EXPECT_EQ(v.Find("x"), 1);
  EXPECT_EQ(v.Find("missing"), -1);
}

TEST(BuildVocab, EmptyAfterFilterIsAnError) {
  EXPECT_HB_ERROR(BuildVocab(Streams({{"a", 1}}), 5), kInvalidArgument);
  EXPECT_HB_ERROR(BuildVocab({}, 1), kInvalidArgument);
}

// ---------------------------------------------------------------------------

TEST(Cosine, HandValues) {
  EXPECT_DOUBLE_EQ(Cosine(std::vector<double>{3, 4}, std::vector<double>{3, 4}), 1.0);
  EXPECT_DOUBLE_EQ(Cosine(std::vector<double>{1, 0}, std::vector<double>{0, 1}), 0.0);
  EXPECT_NEAR(Cosine(std::vector<double>{1, 1}, std::vector<double>{1, 0}),
              std::sqrt(2.0) / 2, 1e-15);
}

TEST(Cosine, ZeroVectorAndLengthMismatchAreErrors) {
  EXPECT_HB_ERROR(Cosine(std::vector<double>{0, 0}, std::vector<double>{1, 0}),
                  kInvalidArgument);
  EXPECT_HB_ERROR(Cosine(std::vector<double>{1, 0}, std::vector<double>{1, 0, 0}),
                  kInvalidArgument);
}

TEST(Cosine, SymmetricScaleInvariantAndBounded) {
  Rng rng(8);
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> u(7), v(7);
    for (auto& x : u) x = rng.Normal();
    for (auto& x : v) x = rng.Normal();
    const double alpha = 0.01 + 100 * rng.NextDouble();
    std::vector<double> au = u;
    for (auto& x : au) x *= alpha;
    const double c = Cosine(u, v);
    EXPECT_LE(std::abs(c), 1.0);
    EXPECT_NEAR(c, Cosine(v, u), 1e-15);
    EXPECT_NEAR(c, Cosine(au, v), 1e-12);
  }
}

// ---------------------------------------------------------------------------

EmbeddingModel HandModel(const std::vector<std::pair<std::string, std::vector<double>>>& rows) {
  Vocabulary vocab;
  std::vector<double> data;
  for (const auto& [tok, vec] : rows) {
    vocab.Add(tok, 1);
    data.insert(data.end(), vec.begin(), vec.end());
  }
  return EmbeddingModel(std::move(vocab), static_cast<int>(rows[0].second.size()),
                        std::move(data));
}

TEST(TopKNeighbors, TwoWordVocab) {
  const auto m = HandModel({{"a", {1, 0}}, {"b", {0, 1}}});
  const auto n = TopKNeighbors(m, "a", 1, true);
  ASSERT_EQ(n.size(), 1u);
  EXPECT_EQ(n[0].token, "b");
  const auto self = TopKNeighbors(m, "a", 1, false);
  EXPECT_EQ(self[0].token, "a");
  EXPECT_DOUBLE_EQ(self[0].cosine, 1.0);
}

TEST(TopKNeighbors, TiesBreakLexicographically) {
  const auto m = HandModel({{"q", {1, 0}}, {"zeta", {0, 1}}, {"alpha", {0, 1}}, {"mid", {-1, 0}}});
  const auto n = TopKNeighbors(m, "q", 3, true);
  ASSERT_EQ(n.size(), 3u);
  EXPECT_EQ(n[0].token, "alpha");
  EXPECT_EQ(n[1].token, "zeta");
  EXPECT_EQ(n[2].token, "mid");
}

TEST(TopKNeighbors, KLargerThanVocabReturnsAll) {
  const auto m = HandModel({{"a", {1, 0}}, {"b", {0, 1}}, {"c", {1, 1}}});
  EXPECT_EQ(TopKNeighbors(m, "a", 10, true).size(), 2u);
}

TEST(TopKNeighbors, ErrorsNameTheToken) {
  const auto m = HandModel({{"a", {1, 0}}, {"b", {0, 1}}});
  try {
    TopKNeighbors(m, "houfe", 1, true);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNotFound);
    EXPECT_NE(std::string(e.what()).find("houfe"), std::string::npos);
  }
  EXPECT_HB_ERROR(TopKNeighbors(m, "a", 0, true), kInvalidArgument);
}

// Exhaustive oracle: score every other token, sort by (-cosine, token).
std::vector<Neighbor> BruteForce(const EmbeddingModel& m, const std::string& q,
                                 std::size_t k) {
  std::vector<Neighbor> all;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m.vocab().token(i) == q) continue;
    all.push_back({m.vocab().token(i), Cosine(m.vector(q), m.vector(i))});
  }
  std::sort(all.begin(), all.end(), [](const Neighbor& a, const Neighbor& b) {
    return a.cosine != b.cosine ? a.cosine > b.cosine : a.token < b.token;
  });
  all.resize(std::min(k, all.size()));
  return all;
}

TEST(TopKNeighbors, MatchesExhaustiveScan) {
  Rng rng(12);
  for (std::size_t n : {50u, 1000u}) {
    const auto m = testing::GaussianModel(rng, n, 16);
    for (int q = 0; q < 20; ++q) {
      const std::string tok = "w" + std::to_string(rng.Uniform(n));
      const auto got = TopKNeighbors(m, tok, 10, true);
      const auto want = BruteForce(m, tok, 10);
      ASSERT_EQ(got.size(), want.size());
      for (std::size_t i = 0; i < got.size(); ++i) {
        EXPECT_EQ(got[i].token, want[i].token);
        EXPECT_NEAR(got[i].cosine, want[i].cosine, 1e-12);
      }
    }
  }
}

// ---------------------------------------------------------------------------

// Tokens c0..c9 only co-occur with each other, likewise d0..d9.
std::vector<TokenStream> TwoTopicCorpus(std::uint64_t seed, int sentences = 3000) {
  Rng rng(seed);
  std::vector<TokenStream> out;
  for (int s = 0; s < sentences; ++s) {
    const char topic = rng.Uniform(2) ? 'c' : 'd';
    TokenStream t{"s" + std::to_string(s), {}};
    for (int i = 0; i < 10; ++i) {
      t.tokens.push_back(std::string(1, topic) + std::to_string(rng.Uniform(10)));
    }
    out.push_back(std::move(t));
  }
  return out;
}

TrainConfig SmallConfig(std::uint64_t seed) {
  TrainConfig c;
  c.dim = 20;
  c.min_count = 1;
  c.seed = seed;
  return c;
}

TEST(TrainSgns, SeparatesTwoTopics) {
  const auto m = TrainSgns(TwoTopicCorpus(1), SmallConfig(1));
  double within = 0, cross = 0;
  int nw = 0, nc = 0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = i + 1; j < m.size(); ++j) {
      const double c = Cosine(m.vector(i), m.vector(j));
      if (m.vocab().token(i)[0] == m.vocab().token(j)[0]) {
        within += c;
        ++nw;
      } else {
        cross += c;
        ++nc;
      }
    }
  }
  EXPECT_GT(within / nw, cross / nc);
}

TEST(TrainSgns, LossFallsForNearlyEverySeed) {
  int falling = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto m = TrainSgns(TwoTopicCorpus(seed, 1000), SmallConfig(seed));
    ASSERT_EQ(m.epoch_loss().size(), 5u);
    if (m.epoch_loss().back() < m.epoch_loss().front()) ++falling;
  }
  EXPECT_GE(falling, 9);
}

TEST(TrainSgns, SingleThreadIsBitwiseDeterministic) {
  const auto corpus = TwoTopicCorpus(3, 500);
  const auto a = TrainSgns(corpus, SmallConfig(7), 1);
  const auto b = TrainSgns(corpus, SmallConfig(7), 1);
  EXPECT_EQ(a.vocab().tokens(), b.vocab().tokens());
  EXPECT_EQ(a.data(), b.data());
  const auto c = TrainSgns(corpus, SmallConfig(8), 1);
  EXPECT_NE(a.data(), c.data());
}

TEST(TrainSgns, MultiThreadedRunProducesFiniteVectors) {
  const auto m = TrainSgns(TwoTopicCorpus(4, 500), SmallConfig(4), 3);
  bool nonzero = false;
  for (double x : m.data()) {
    ASSERT_TRUE(std::isfinite(x));
    nonzero |= x != 0;
  }
  EXPECT_TRUE(nonzero);
}

TEST(TrainSgns, VocabRespectsMinCount) {
  auto corpus = TwoTopicCorpus(5, 300);
  corpus.push_back({"rare", {"hapax"}});
  auto cfg = SmallConfig(1);
  cfg.min_count = 2;
  const auto m = TrainSgns(corpus, cfg);
  EXPECT_FALSE(m.vocab().Contains("hapax"));
  for (std::size_t i = 0; i < m.size(); ++i) EXPECT_GE(m.vocab().count(i), 2u);
}

TEST(TrainSgns, ConfigValidation) {
  const auto corpus = TwoTopicCorpus(1, 10);
  for (auto mutate : std::vector<void (*)(TrainConfig&)>{
           [](TrainConfig& c) { c.epochs = 0; }, [](TrainConfig& c) { c.dim = 0; },
           [](TrainConfig& c) { c.dim = 5000; }, [](TrainConfig& c) { c.window = 0; },
           [](TrainConfig& c) { c.negatives = 0; }, [](TrainConfig& c) { c.min_count = 0; },
           [](TrainConfig& c) { c.initial_lr = 0; },
           [](TrainConfig& c) { c.subsample_threshold = -1; }}) {
    auto cfg = SmallConfig(1);
    mutate(cfg);
    EXPECT_HB_ERROR(TrainSgns(corpus, cfg), kInvalidArgument);
  }
  auto cfg = SmallConfig(1);
  cfg.min_count = 1000000;
  EXPECT_HB_ERROR(TrainSgns(corpus, cfg), kInvalidArgument);
  EXPECT_HB_ERROR(TrainSgns(corpus, SmallConfig(1), 0), kInvalidArgument);
}

TEST(TrainSgns, DefaultsFollowCommonWord2vecSettings) {
  const TrainConfig c;
  EXPECT_EQ(c.window, 5);
  EXPECT_EQ(c.negatives, 5);
  EXPECT_EQ(c.epochs, 5);
  EXPECT_DOUBLE_EQ(c.initial_lr, 0.025);
  EXPECT_DOUBLE_EQ(c.subsample_threshold, 1e-3);
}

TEST(AliasSampler, MatchesWeights) {
  const std::vector<double> w{1, 2, 3, 4};
  const sgns_detail::AliasSampler s(w);
  Rng rng(1);
  std::vector<int> hits(4, 0);
  const int n = 200000;
  for (int i = 0; i < n; ++i) ++hits[s.Sample(rng)];
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(hits[i] / double(n), w[i] / 10.0, 0.005);
}

// ---------------------------------------------------------------------------

TEST(VectorFile, RoundTripKeepsCosines) {
  Rng rng(21);
  const auto m = testing::GaussianModel(rng, 40, 9);
  std::istringstream in(VectorsToText(m));
  const auto back = ReadVectors(in);
  ASSERT_EQ(back.size(), m.size());
  ASSERT_EQ(back.dim(), m.dim());
  for (std::size_t i = 0; i < m.size(); ++i) {
    EXPECT_EQ(back.vocab().token(i), m.vocab().token(i));
    for (std::size_t j = 0; j < m.size(); j += 7) {
      EXPECT_NEAR(Cosine(back.vector(i), back.vector(j)), Cosine(m.vector(i), m.vector(j)),
                  1e-6);
    }
  }
  const auto path = testing::ScratchDir() / "m.vec";
  SaveVectors(m, path);
  EXPECT_EQ(VectorsToText(LoadVectors(path)), VectorsToText(m));
}

TEST(VectorFile, HeaderIsCountAndDim) {
  const auto m = HandModel({{"a", {1, 0}}, {"b", {0, 1}}});
  EXPECT_EQ(VectorsToText(m), "2 2\na 1 0\nb 0 1\n");
}

TEST(VectorFile, RejectsMalformed) {
  for (const char* bad : {"2 2\na 1 0\nb 0\n", "0 2\n", "1 2\na 1 0\nb 0 1\n",
                          "2 2\na 1 0\n", "x y\n", "2 2\na 1 0\na 0 1\n", "1 2\na 1 q\n", ""}) {
    std::istringstream in(bad);
    EXPECT_HB_ERROR(ReadVectors(in), kParse);
  }
}

TEST(VectorFile, LoadsShippedHandFixture) {
  const auto m = LoadVectors(testing::DataPath("fixtures/hand_model.vec"));
  EXPECT_EQ(m.size(), 4u);
  EXPECT_EQ(m.dim(), 2);
  EXPECT_DOUBLE_EQ(Cosine(m.vector("x"), m.vector("a")), 1.0);
}

TEST(EmbeddingModel, ScaledKeepsCosines) {
  Rng rng(2);
  const auto m = testing::GaussianModel(rng, 10, 4);
  const auto s = m.Scaled(3.7);
  EXPECT_NEAR(Cosine(s.vector(0), s.vector(1)), Cosine(m.vector(0), m.vector(1)), 1e-12);
  EXPECT_DOUBLE_EQ(s.vector(0)[0], 3.7 * m.vector(0)[0]);
}

}  // namespace
}  // namespace histbias
