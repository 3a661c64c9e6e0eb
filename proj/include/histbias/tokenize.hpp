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

// Word tokenization and word-internal byte-pair encoding.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "histbias/error.hpp"
#include "histbias/io.hpp"
#include "histbias/text.hpp"

namespace histbias {

struct TokenStream {
  std::string doc_id;
  std::vector<std::string> tokens;
};

// Splits on Unicode whitespace and peels leading/trailing punctuation off
// each chunk, one token per punctuation character. Internal punctuation
// ("o'clock", "e.g") stays inside the word.
inline std::vector<std::string> TokenizeWords(std::string_view input,
                                              bool lowercase = true) {
  std::vector<std::string> tokens;
  auto emit = [&](std::string_view tok) {
    tokens.push_back(lowercase ? text::Lowercase(tok) : std::string(tok));
  };
  std::size_t i = 0;
  while (i < input.size()) {
    while (i < input.size()) {
      const auto d = text::DecodeAt(input, i);
      if (!text::IsSpace(d.cp)) break;
      i += d.length;
    }
    const std::size_t begin = i;
    while (i < input.size()) {
      const auto d = text::DecodeAt(input, i);
      if (text::IsSpace(d.cp)) break;
      i += d.length;
    }
    std::string_view chunk = input.substr(begin, i - begin);
    if (chunk.empty()) continue;

    std::size_t lo = 0;
    while (lo < chunk.size()) {
      const auto d = text::DecodeAt(chunk, lo);
      if (!text::IsPunct(d.cp)) break;
      emit(chunk.substr(lo, d.length));
      lo += d.length;
    }
    if (lo == chunk.size()) continue;
    std::size_t hi = chunk.size();
    std::vector<std::string_view> trailing;
    while (hi > lo) {
      const std::size_t p = text::PrevStart(chunk, hi);
      if (!text::IsPunct(text::DecodeAt(chunk, p).cp)) break;
      trailing.push_back(chunk.substr(p, hi - p));
      hi = p;
    }
    emit(chunk.substr(lo, hi - lo));
    for (auto it = trailing.rbegin(); it != trailing.rend(); ++it) emit(*it);
  }
  return tokens;
}

// ---------------------------------------------------------------------------
// Byte-pair encoding

struct BpeModel {
  std::vector<std::pair<std::string, std::string>> merges;  // in merge order
  std::set<std::string> vocab;     // base alphabet plus merged symbols
  std::size_t alphabet_size = 0;
  std::size_t target_vocab_size = 0;
};

namespace bpe_detail {

inline std::uint64_t PairKey(int left, int right) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(left)) << 32) |
         static_cast<std::uint32_t>(right);
}

// Incremental pair-count bookkeeping over the distinct words of a corpus.
class Trainer {
 public:
  explicit Trainer(const std::vector<TokenStream>& corpus) {
    std::map<std::string, std::int64_t> word_freq;
    for (const auto& stream : corpus) {
      for (const auto& tok : stream.tokens) {
        if (!tok.empty()) ++word_freq[tok];
      }
    }
    if (word_freq.empty()) {
      Fail(ErrorKind::kInvalidArgument, "cannot train BPE on an empty corpus");
    }
    words_.reserve(word_freq.size());
    for (const auto& [word, freq] : word_freq) {
      Word w;
      w.freq = freq;
      for (std::size_t i = 0; i < word.size();) {
        const auto d = text::DecodeAt(word, i);
        w.symbols.push_back(Intern(word.substr(i, d.length)));
        i += d.length;
      }
      words_.push_back(std::move(w));
    }
    alphabet_size_ = symbols_.size();
    for (std::size_t wi = 0; wi < words_.size(); ++wi) {
      AddPairs(static_cast<int>(wi), +1);
    }
    for (auto& [key, delta] : pending_) Commit(key, delta);
    pending_.clear();
  }

  std::size_t alphabet_size() const { return alphabet_size_; }

  // Performs one merge of the most frequent pair; false when no pair occurs
  // at least twice.
  bool MergeBest(std::pair<std::string, std::string>* merged,
                 bool* new_symbol) {
    if (queue_.empty()) return false;
    const Entry best = *queue_.begin();
    if (best.count < 2) return false;
    const std::string joined = symbols_[best.left] + symbols_[best.right];
    const std::size_t before = symbols_.size();
    const int target = Intern(joined);
    *new_symbol = symbols_.size() > before;
    *merged = {symbols_[best.left], symbols_[best.right]};

    const std::uint64_t key = PairKey(best.left, best.right);
    std::vector<int> affected = std::move(where_[key]);
    where_.erase(key);
    std::sort(affected.begin(), affected.end());
    affected.erase(std::unique(affected.begin(), affected.end()),
                   affected.end());
    for (int wi : affected) {
      Word& w = words_[wi];
      if (!Contains(w.symbols, best.left, best.right)) continue;
      AddPairs(wi, -1);
      std::vector<int> out;
      out.reserve(w.symbols.size());
      for (std::size_t i = 0; i < w.symbols.size();) {
        if (i + 1 < w.symbols.size() && w.symbols[i] == best.left &&
            w.symbols[i + 1] == best.right) {
          out.push_back(target);
          i += 2;
        } else {
          out.push_back(w.symbols[i]);
          ++i;
        }
      }
      w.symbols = std::move(out);
      AddPairs(wi, +1);
    }
    for (auto& [k, delta] : pending_) Commit(k, delta);
    pending_.clear();
    return true;
  }

  std::int64_t TotalSymbols() const {
    std::int64_t total = 0;
    for (const auto& w : words_) {
      total += w.freq * static_cast<std::int64_t>(w.symbols.size());
    }
    return total;
  }

 private:
  struct Word {
    std::vector<int> symbols;
    std::int64_t freq = 0;
  };

  struct Entry {
    std::int64_t count;
    int left;
    int right;
  };

  struct EntryLess {
    const std::vector<std::string>* symbols;
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.count != b.count) return a.count > b.count;
      const auto& sa = *symbols;
      if (a.left != b.left) {
        if (sa[a.left] != sa[b.left]) return sa[a.left] < sa[b.left];
        return a.left < b.left;
      }
      if (a.right != b.right) {
        if (sa[a.right] != sa[b.right]) return sa[a.right] < sa[b.right];
        return a.right < b.right;
      }
      return false;
    }
  };

  static bool Contains(const std::vector<int>& s, int l, int r) {
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      if (s[i] == l && s[i + 1] == r) return true;
    }
    return false;
  }

  int Intern(std::string_view sym) {
    auto it = ids_.find(std::string(sym));
    if (it != ids_.end()) return it->second;
    const int id = static_cast<int>(symbols_.size());
    symbols_.emplace_back(sym);
    ids_.emplace(std::string(sym), id);
    return id;
  }

  void AddPairs(int wi, int sign) {
    const Word& w = words_[wi];
    for (std::size_t i = 0; i + 1 < w.symbols.size(); ++i) {
      const std::uint64_t key = PairKey(w.symbols[i], w.symbols[i + 1]);
      pending_[key] += sign * w.freq;
      if (sign > 0) where_[key].push_back(wi);
    }
  }

  void Commit(std::uint64_t key, std::int64_t delta) {
    if (delta == 0) return;
    const int left = static_cast<int>(key >> 32);
    const int right = static_cast<int>(key & 0xffffffffu);
    auto it = counts_.find(key);
    std::int64_t old = it == counts_.end() ? 0 : it->second;
    if (old > 0) queue_.erase(Entry{old, left, right});
    const std::int64_t now = old + delta;
    if (now > 0) {
      counts_[key] = now;
      queue_.insert(Entry{now, left, right});
    } else if (it != counts_.end()) {
      counts_.erase(it);
      where_.erase(key);
    }
  }

  std::vector<Word> words_;
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, int> ids_;
  std::size_t alphabet_size_ = 0;
  std::unordered_map<std::uint64_t, std::int64_t> counts_;
  std::unordered_map<std::uint64_t, std::vector<int>> where_;
  std::map<std::uint64_t, std::int64_t> pending_;
  std::set<Entry, EntryLess> queue_{EntryLess{&symbols_}};
};

}  // namespace bpe_detail

// Greedy most-frequent-pair merging within words. Ties go to the
// lexicographically smallest (left, right). Stops once the vocabulary
// (alphabet plus merged symbols) reaches `target_vocab_size` or no pair
// occurs at least twice. A target at or below the alphabet size yields no
// merges.
inline BpeModel TrainBpe(const std::vector<TokenStream>& corpus,
                         std::size_t target_vocab_size) {
  bpe_detail::Trainer trainer(corpus);
  BpeModel model;
  model.target_vocab_size = target_vocab_size;
  model.alphabet_size = trainer.alphabet_size();
  for (const auto& stream : corpus) {
    for (const auto& tok : stream.tokens) {
      for (auto& cp : text::SplitCodePoints(tok)) model.vocab.insert(cp);
    }
  }
  std::pair<std::string, std::string> merged;
  bool new_symbol = false;
  while (model.vocab.size() < target_vocab_size &&
         trainer.MergeBest(&merged, &new_symbol)) {
    model.vocab.insert(merged.first + merged.second);
    model.merges.push_back(std::move(merged));
  }
  return model;
}

// Segments words by replaying the merge table. Applying the lowest-ranked
// pair present at each step is equivalent to replaying merges in order,
// since a merged symbol only ever forms pairs of higher rank.
class BpeEncoder {
 public:
  explicit BpeEncoder(const BpeModel& model) {
    ranks_.reserve(model.merges.size());
    for (std::size_t i = 0; i < model.merges.size(); ++i) {
      ranks_.emplace(Key(model.merges[i].first, model.merges[i].second),
                     static_cast<int>(i));
    }
  }

  std::vector<std::string> Segment(std::string_view word) const {
    std::vector<std::string> symbols = text::SplitCodePoints(word);
    while (symbols.size() > 1) {
      int best_rank = -1;
      std::size_t best_at = 0;
      for (std::size_t i = 0; i + 1 < symbols.size(); ++i) {
        auto it = ranks_.find(Key(symbols[i], symbols[i + 1]));
        if (it != ranks_.end() && (best_rank < 0 || it->second < best_rank)) {
          best_rank = it->second;
          best_at = i;
        }
      }
      if (best_rank < 0) break;
      const std::string left = symbols[best_at];
      const std::string right = symbols[best_at + 1];
      std::vector<std::string> out;
      out.reserve(symbols.size());
      for (std::size_t i = 0; i < symbols.size();) {
        if (i + 1 < symbols.size() && symbols[i] == left &&
            symbols[i + 1] == right) {
          out.push_back(left + right);
          i += 2;
        } else {
          out.push_back(std::move(symbols[i]));
          ++i;
        }
      }
      symbols = std::move(out);
    }
    return symbols;
  }

 private:
  static std::string Key(const std::string& l, const std::string& r) {
    std::string k;
    k.reserve(l.size() + r.size() + 1);
    k += l;
    k += '\x1f';
    k += r;
    return k;
  }

  std::unordered_map<std::string, int> ranks_;
};

inline std::vector<std::string> TokenizeBpe(std::string_view input,
                                            const BpeModel& model,
                                            bool lowercase = true) {
  BpeEncoder encoder(model);
  std::vector<std::string> out;
  for (const auto& word : TokenizeWords(input, lowercase)) {
    for (auto& piece : encoder.Segment(word)) out.push_back(std::move(piece));
  }
  return out;
}

// Re-segments already word-tokenized streams, memoizing per distinct word.
inline std::vector<TokenStream> ApplyBpe(const std::vector<TokenStream>& streams,
                                         const BpeModel& model) {
  BpeEncoder encoder(model);
  std::unordered_map<std::string, std::vector<std::string>> cache;
  std::vector<TokenStream> out;
  out.reserve(streams.size());
  for (const auto& s : streams) {
    TokenStream t{s.doc_id, {}};
    t.tokens.reserve(s.tokens.size());
    for (const auto& word : s.tokens) {
      auto it = cache.find(word);
      if (it == cache.end()) it = cache.emplace(word, encoder.Segment(word)).first;
      t.tokens.insert(t.tokens.end(), it->second.begin(), it->second.end());
    }
    out.push_back(std::move(t));
  }
  return out;
}

// Model file: "bpe v1 <n_merges>" then one "left<TAB>right" per line.
inline std::string BpeModelToText(const BpeModel& model) {
  std::string out = "bpe v1 " + std::to_string(model.merges.size()) + "\n";
  for (const auto& [l, r] : model.merges) {
    out += l;
    out += '\t';
    out += r;
    out += '\n';
  }
  return out;
}

inline void SaveBpeModel(const BpeModel& model,
                         const std::filesystem::path& path) {
  io::AtomicWrite(path, BpeModelToText(model));
}

// The alphabet is not stored; the loaded vocabulary holds the symbols that
// appear in the merge table.
inline BpeModel ReadBpeModel(std::istream& in) {
  std::string line;
  if (!io::ReadLine(in, line)) Fail(ErrorKind::kParse, "bpe: empty model file");
  std::istringstream header(line);
  std::string magic, version;
  long long n = -1;
  header >> magic >> version >> n;
  if (magic != "bpe" || version != "v1" || n < 0) {
    Fail(ErrorKind::kParse, "bpe: bad header '" + line + "'");
  }
  BpeModel model;
  for (long long i = 0; i < n; ++i) {
    if (!io::ReadLine(in, line)) {
      Fail(ErrorKind::kParse, "bpe: expected " + std::to_string(n) +
                                  " merges, found " + std::to_string(i));
    }
    auto fields = text::SplitFields(line, '\t');
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      Fail(ErrorKind::kParse, "bpe: bad merge on line " + std::to_string(i + 2));
    }
    model.merges.emplace_back(fields[0], fields[1]);
  }
  std::set<std::string> merged;
  for (const auto& [l, r] : model.merges) merged.insert(l + r);
  for (const auto& [l, r] : model.merges) {
    for (const auto* s : {&l, &r}) {
      model.vocab.insert(*s);
      if (!merged.count(*s)) {
        for (auto& cp : text::SplitCodePoints(*s)) model.vocab.insert(cp);
      }
    }
    model.vocab.insert(l + r);
  }
  std::size_t alphabet = 0;
  for (const auto& s : model.vocab) {
    if (text::DecodeAt(s, 0).length == s.size()) ++alphabet;
  }
  model.alphabet_size = alphabet;
  model.target_vocab_size = model.vocab.size();
  return model;
}

inline BpeModel LoadBpeModel(const std::filesystem::path& path) {
  std::ifstream in = io::OpenForRead(path);
  return ReadBpeModel(in);
}

}  // namespace histbias
