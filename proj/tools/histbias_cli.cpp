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

// histbias: command-line driver for the cleaning, splitting, training and
// bias-measurement pipeline.
//
// Every command writes its outputs atomically and leaves a
// "<out>.manifest.json" sidecar recording the command, its settings, input
// digests and output paths. Errors go to stderr as one tab-separated line
// "error<TAB><kind><TAB><message>"; a missing input exits with 2, any other
// failure with 1.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "histbias/histbias.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

#ifndef HISTBIAS_DATA_DIR
#define HISTBIAS_DATA_DIR "data"
#endif
#ifndef HISTBIAS_VERSION
#define HISTBIAS_VERSION "0.0.0"
#endif

constexpr int kExitMissingInput = 2;
constexpr int kExitFailure = 1;

std::string DataFile(const char* name) {
  return (fs::path(HISTBIAS_DATA_DIR) / name).string();
}

// Raised for inputs that do not exist; mapped to exit status 2.
struct MissingInput {
  std::string path;
};

class Manifest {
 public:
  explicit Manifest(std::string command) { j_["command"] = std::move(command); }

  ordered_json& config() { return j_["config"]; }

  // Records the digest of a file input (or of every file in a directory).
  void Input(const std::string& role, const std::string& path) {
    if (fs::is_directory(path)) {
      std::vector<fs::path> files;
      for (const auto& e : fs::directory_iterator(path)) {
        if (e.is_regular_file()) files.push_back(e.path());
      }
      std::sort(files.begin(), files.end());
      for (const auto& f : files) Input(role, f.string());
      return;
    }
    const std::string data = histbias::io::ReadFile(path);
    ordered_json in;
    in["role"] = role;
    in["path"] = path;
    in["fnv1a64"] = histbias::io::HexDigest(histbias::io::Fnv1a64(data));
    in["bytes"] = data.size();
    j_["inputs"].push_back(std::move(in));
  }

  void Seed(std::uint64_t s) { j_["seeds"].push_back(s); }

  void Output(const std::string& path) { j_["outputs"].push_back(path); }

  void Write(const std::string& out) {
    j_["tool"] = "histbias";
    j_["version"] = HISTBIAS_VERSION;
    std::string base = out;
    while (base.size() > 1 && base.back() == '/') base.pop_back();
    histbias::io::AtomicWrite(base + ".manifest.json", j_.dump(2) + "\n");
  }

 private:
  ordered_json j_;
};

void RequireInput(const std::string& path) {
  if (!fs::exists(path)) throw MissingInput{path};
}

void RequireFormat(const std::string& format) {
  if (format != "csv" && format != "json") {
    histbias::Fail(histbias::ErrorKind::kInvalidArgument,
                   "--format must be csv or json");
  }
}

std::string JoinCsv(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += histbias::io::CsvField(fields[i]);
  }
  return line + "\n";
}

// JSON numbers cannot be NaN; undefined quantities are written as null.
ordered_json Number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::stod(histbias::io::FormatNumber(v));
}

std::vector<histbias::TokenStream> Tokenize(const std::vector<histbias::Document>& docs) {
  std::vector<histbias::TokenStream> streams;
  streams.reserve(docs.size());
  for (const auto& d : docs) streams.push_back({d.id, histbias::TokenizeWords(d.text)});
  return streams;
}

// Word streams, or BPE streams when `tokenizer` is "bpe" (the trained
// merges are returned through `bpe`).
std::vector<histbias::TokenStream> TokenStreams(const std::vector<histbias::Document>& docs,
                                                const std::string& tokenizer,
                                                std::size_t bpe_vocab_size,
                                                histbias::BpeModel* bpe) {
  auto words = Tokenize(docs);
  if (tokenizer == "word") return words;
  if (tokenizer != "bpe") {
    histbias::Fail(histbias::ErrorKind::kInvalidArgument,
                   "--tokenizer must be word or bpe");
  }
  *bpe = histbias::TrainBpe(words, bpe_vocab_size);
  return histbias::ApplyBpe(words, *bpe);
}

// ---------------------------------------------------------------------------

struct CommonOptions {
  std::string in;
  std::string out;
  std::string format = "csv";
  std::uint64_t seed = 1;
  int threads = 1;
};

struct TrainOptions {
  histbias::TrainConfig config;
  std::string tokenizer = "word";
  std::size_t bpe_vocab_size = 30000;
};

void AddTrainFlags(CLI::App* cmd, TrainOptions& t) {
  cmd->add_option("--dim", t.config.dim, "Vector dimension")->capture_default_str();
  cmd->add_option("--min-count", t.config.min_count, "Minimum token frequency")
      ->capture_default_str();
  cmd->add_option("--window", t.config.window, "Context window")->capture_default_str();
  cmd->add_option("--negatives", t.config.negatives, "Negative samples")
      ->capture_default_str();
  cmd->add_option("--epochs", t.config.epochs, "Training epochs")->capture_default_str();
  cmd->add_option("--lr", t.config.initial_lr, "Initial learning rate")
      ->capture_default_str();
  cmd->add_option("--subsample", t.config.subsample_threshold,
                  "Frequent-token subsampling threshold")
      ->capture_default_str();
  cmd->add_option("--tokenizer", t.tokenizer, "word or bpe")->capture_default_str();
  cmd->add_option("--bpe-vocab-size", t.bpe_vocab_size, "BPE vocabulary size")
      ->capture_default_str();
}

ordered_json TrainJson(const TrainOptions& t) {
  ordered_json j = histbias::TrainConfigToJson(t.config);
  j["tokenizer"] = t.tokenizer;
  if (t.tokenizer == "bpe") j["bpe_vocab_size"] = t.bpe_vocab_size;
  return j;
}

// ---------------------------------------------------------------------------

void CmdClean(const CommonOptions& c, const std::string& rules_path) {
  RequireInput(c.in);
  RequireInput(rules_path);
  auto docs = histbias::LoadCorpus(c.in);
  const histbias::Cleaner cleaner(histbias::LoadCleanupRules(rules_path));
  for (auto& d : docs) d.text = cleaner(d.text);
  histbias::io::AtomicWrite(c.out, histbias::CorpusToJsonl(docs));

  Manifest m("clean");
  m.config()["rules"] = cleaner.rules().size();
  m.Input("corpus", c.in);
  m.Input("rules", rules_path);
  m.Output(c.out);
  m.Write(c.out);
}

void CmdSplit(const CommonOptions& c, const std::string& periods_path) {
  RequireInput(c.in);
  RequireInput(periods_path);
  const auto docs = histbias::LoadCorpus(c.in);
  const auto periods = histbias::LoadPeriods(periods_path);
  const auto buckets = histbias::SplitPeriods(docs, periods);

  Manifest m("split");
  for (const auto& p : periods) {
    ordered_json pj;
    pj["name"] = p.name;
    pj["start_year"] = p.start_year;
    pj["end_year"] = p.end_year;
    m.config()["periods"].push_back(pj);
  }
  m.Input("corpus", c.in);
  m.Input("periods", periods_path);
  for (const auto& [name, bucket] : buckets) {
    const std::string path = (fs::path(c.out) / (name + ".jsonl")).string();
    histbias::io::AtomicWrite(path, histbias::CorpusToJsonl(bucket));
    m.Output(path);
    m.config()["documents"][name] = bucket.size();
  }
  m.Write(c.out);
}

void CmdTrain(const CommonOptions& c, TrainOptions t) {
  RequireInput(c.in);
  t.config.seed = c.seed;
  t.config.Validate();
  const auto docs = histbias::LoadCorpus(c.in);
  histbias::BpeModel bpe;
  const auto streams = TokenStreams(docs, t.tokenizer, t.bpe_vocab_size, &bpe);
  const auto model = histbias::TrainSgns(streams, t.config, c.threads);

  Manifest m("train");
  m.config() = TrainJson(t);
  m.config()["threads"] = c.threads;
  m.config()["vocab_size"] = model.size();
  for (double l : model.epoch_loss()) m.config()["epoch_loss"].push_back(Number(l));
  m.Input("corpus", c.in);
  m.Seed(c.seed);
  if (t.tokenizer == "bpe") {
    const std::string bpe_path = c.out + ".bpe";
    histbias::SaveBpeModel(bpe, bpe_path);
    m.Output(bpe_path);
  }
  histbias::SaveVectors(model, c.out);
  m.Output(c.out);
  m.Write(c.out);
}

void CmdStability(const CommonOptions& c, TrainOptions t, const std::string& grid_path,
                  const std::string& pairs_path, int runs, std::size_t k) {
  RequireInput(c.in);
  RequireInput(pairs_path);
  RequireFormat(c.format);
  t.config.seed = c.seed;
  std::vector<histbias::TrainConfig> grid;
  if (!grid_path.empty()) {
    RequireInput(grid_path);
    nlohmann::json g;
    try {
      g = nlohmann::json::parse(histbias::io::ReadFile(grid_path));
    } catch (const nlohmann::json::parse_error& e) {
      histbias::Fail(histbias::ErrorKind::kParse, std::string("grid: ") + e.what());
    }
    if (!g.is_array()) histbias::Fail(histbias::ErrorKind::kParse, "grid: expected an array");
    for (const auto& item : g) grid.push_back(histbias::TrainConfigFromJson(item, t.config));
  } else {
    // The comparison grid: dim {100, 300} x min_count {20, 100}.
    for (int dim : {100, 300}) {
      for (int mc : {20, 100}) {
        auto cfg = t.config;
        cfg.dim = dim;
        cfg.min_count = mc;
        grid.push_back(cfg);
      }
    }
  }

  const auto docs = histbias::LoadCorpus(c.in);
  histbias::BpeModel bpe;
  const auto streams = TokenStreams(docs, t.tokenizer, t.bpe_vocab_size, &bpe);
  const auto pairs = histbias::LoadMisspellPairs(pairs_path);
  histbias::StabilityOptions opts;
  opts.k = k;
  opts.threads = c.threads;
  opts.tokenizer = t.tokenizer;
  if (t.tokenizer == "bpe") opts.bpe = &bpe;
  const auto reports = histbias::RunStabilitySuite(streams, grid, runs, pairs, opts);

  std::string body;
  if (c.format == "json") {
    ordered_json arr = ordered_json::array();
    for (const auto& r : reports) arr.push_back(histbias::StabilityReportToJson(r));
    body = arr.dump(2) + "\n";
  } else {
    body = JoinCsv({"tokenizer", "dim", "min_count", "seed", "n_runs", "k",
                    "mean_jaccard_topk", "misspelling_top5_rate",
                    "misspelling_vocab_coverage"});
    for (const auto& r : reports) {
      using histbias::io::FormatNumber;
      body += JoinCsv({r.tokenizer, std::to_string(r.config.dim),
                       std::to_string(r.config.min_count), std::to_string(r.config.seed),
                       std::to_string(r.n_runs), std::to_string(r.k),
                       FormatNumber(r.mean_jaccard_topk),
                       FormatNumber(r.misspelling_top5_rate),
                       FormatNumber(r.misspelling_vocab_coverage)});
    }
  }
  histbias::io::AtomicWrite(c.out, body);

  Manifest m("stability");
  m.config() = TrainJson(t);
  m.config()["runs"] = runs;
  m.config()["k"] = k;
  m.config()["threads"] = c.threads;
  for (const auto& g : grid) m.config()["grid"].push_back(histbias::TrainConfigToJson(g));
  m.Input("corpus", c.in);
  m.Input("pairs", pairs_path);
  if (!grid_path.empty()) m.Input("grid", grid_path);
  for (const auto& g : grid) {
    for (int r = 0; r < runs; ++r) m.Seed(g.seed + static_cast<std::uint64_t>(r));
  }
  m.Output(c.out);
  m.Write(c.out);
}

ordered_json WeatJson(const histbias::WeatResult& r) {
  ordered_json j;
  j["statistic"] = Number(r.statistic);
  j["effect_size"] = Number(r.effect_size);
  j["p_value"] = Number(r.p_value);
  j["n_permutations"] = r.n_permutations;
  ordered_json dropped = ordered_json::object();
  for (const auto& [role, words] : r.dropped) dropped[role] = words;
  j["dropped"] = dropped;
  return j;
}

std::vector<std::string> WeatCsvRow(const std::string& period, const std::string& test,
                                    const histbias::WeatResult& r) {
  using histbias::io::FormatNumber;
  std::size_t dropped = 0;
  for (const auto& [role, words] : r.dropped) dropped += words.size();
  return {period, test, FormatNumber(r.statistic), FormatNumber(r.effect_size),
          FormatNumber(r.p_value), std::to_string(r.n_permutations),
          std::to_string(dropped)};
}

// Period models from a directory of "<period>.vec" files. The order follows
// `periods_path` when given, otherwise file names.
std::vector<std::pair<std::string, fs::path>> PeriodVectorFiles(
    const std::string& dir, const std::string& periods_path) {
  std::vector<std::pair<std::string, fs::path>> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".vec") {
      files.emplace_back(e.path().stem().string(), e.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (!periods_path.empty()) {
    std::map<std::string, std::size_t> rank;
    const auto periods = histbias::LoadPeriods(periods_path);
    for (std::size_t i = 0; i < periods.size(); ++i) rank[periods[i].name] = i;
    std::stable_sort(files.begin(), files.end(), [&](const auto& a, const auto& b) {
      auto ra = rank.count(a.first) ? rank[a.first] : rank.size();
      auto rb = rank.count(b.first) ? rank[b.first] : rank.size();
      return ra < rb;
    });
  }
  if (files.empty()) {
    histbias::Fail(histbias::ErrorKind::kNotFound, "no .vec files in '" + dir + "'");
  }
  return files;
}

void CmdWeat(const CommonOptions& c, const std::string& vectors, const std::string& sets_path,
             const std::string& tests_path, int permutations,
             const std::string& periods_path) {
  RequireInput(vectors);
  RequireInput(sets_path);
  RequireInput(tests_path);
  if (!periods_path.empty()) RequireInput(periods_path);
  RequireFormat(c.format);
  const auto sets = histbias::LoadWordSets(sets_path);
  const auto tests = histbias::ParseWeatTests(histbias::io::ReadFile(tests_path), sets);
  const bool temporal = fs::is_directory(vectors);

  std::vector<histbias::TemporalWeatRow> rows;
  if (temporal) {
    std::vector<histbias::EmbeddingModel> models;
    const auto files = PeriodVectorFiles(vectors, periods_path);
    models.reserve(files.size());
    std::vector<std::pair<std::string, const histbias::EmbeddingModel*>> period_models;
    for (const auto& [name, path] : files) {
      models.push_back(histbias::LoadVectors(path));
      period_models.emplace_back(name, &models.back());
    }
    rows = histbias::TemporalWeat(period_models, tests, permutations, c.seed);
  } else {
    const auto model = histbias::LoadVectors(vectors);
    for (const auto& t : tests) {
      rows.push_back({"", t.name, histbias::RunWeat(t, model, permutations, c.seed)});
    }
  }

  std::string body;
  if (c.format == "json") {
    ordered_json arr = ordered_json::array();
    for (const auto& r : rows) {
      ordered_json j;
      if (temporal) j["period"] = r.period;
      j["test"] = r.test;
      j.update(WeatJson(r.result));
      arr.push_back(std::move(j));
    }
    body = arr.dump(2) + "\n";
  } else {
    body = JoinCsv({"period", "test", "statistic", "effect_size", "p_value",
                    "n_permutations", "dropped_words"});
    for (const auto& r : rows) body += JoinCsv(WeatCsvRow(r.period, r.test, r.result));
  }
  histbias::io::AtomicWrite(c.out, body);

  Manifest m("weat");
  m.config()["permutations"] = permutations;
  m.config()["temporal"] = temporal;
  m.config()["effect_size_std"] = "population";
  m.Input("vectors", vectors);
  m.Input("sets", sets_path);
  m.Input("tests", tests_path);
  if (!periods_path.empty()) m.Input("periods", periods_path);
  m.Seed(c.seed);
  m.Output(c.out);
  m.Write(c.out);
}

struct EntityInputs {
  std::vector<histbias::EntityRecord> entities;
  std::vector<histbias::GroupAssignment> groups;
};

EntityInputs LoadClassified(const std::string& entities_path,
                            const std::string& keywords_path) {
  RequireInput(entities_path);
  RequireInput(keywords_path);
  EntityInputs in;
  in.entities = histbias::LoadEntities(entities_path);
  const histbias::EntityClassifier classifier(histbias::LoadWordSets(keywords_path));
  in.groups = histbias::ClassifyEntities(in.entities, classifier);
  return in;
}

void CmdPmi(const CommonOptions& c, const std::string& keywords_path, std::uint64_t min_count) {
  RequireFormat(c.format);
  const auto in = LoadClassified(c.in, keywords_path);
  const auto table = histbias::DescriptorCounts(in.entities, in.groups);
  const auto plane = histbias::ComputePmiPlane(table, min_count);

  std::string body;
  using histbias::io::FormatNumber;
  if (c.format == "json") {
    ordered_json j;
    j["log_base"] = "e";
    j["min_count_per_word"] = min_count;
    j["points"] = ordered_json::array();
    for (const auto& p : plane.points) {
      ordered_json pj;
      pj["word"] = p.word;
      pj["gender_axis"] = Number(p.gender_axis);
      pj["race_axis"] = Number(p.race_axis);
      pj["count_f"] = p.count_f;
      pj["count_m"] = p.count_m;
      pj["count_nw"] = p.count_nw;
      pj["count_w"] = p.count_w;
      j["points"].push_back(std::move(pj));
    }
    j["skipped"] = ordered_json::array();
    for (const auto& s : plane.skipped) {
      j["skipped"].push_back({{"word", s.word}, {"total", s.total}, {"reason", s.reason}});
    }
    body = j.dump(2) + "\n";
  } else {
    body = JoinCsv({"word", "gender_axis", "race_axis", "count_f", "count_m", "count_nw",
                    "count_w"});
    for (const auto& p : plane.points) {
      body += JoinCsv({p.word, FormatNumber(p.gender_axis), FormatNumber(p.race_axis),
                       std::to_string(p.count_f), std::to_string(p.count_m),
                       std::to_string(p.count_nw), std::to_string(p.count_w)});
    }
  }
  histbias::io::AtomicWrite(c.out, body);

  Manifest m("pmi");
  m.config()["min_count_per_word"] = min_count;
  m.config()["log_base"] = "e";
  m.config()["points"] = plane.points.size();
  m.config()["skipped"] = plane.skipped.size();
  for (const auto& [g, n] : histbias::GroupSizes(in.groups)) m.config()["group_sizes"][g] = n;
  m.Input("entities", c.in);
  m.Input("keywords", keywords_path);
  m.Output(c.out);
  m.Write(c.out);
}

void CmdLexicon(const CommonOptions& c, const std::string& keywords_path,
                const std::string& lexicon_path) {
  RequireFormat(c.format);
  RequireInput(lexicon_path);
  const auto in = LoadClassified(c.in, keywords_path);
  const auto lexicon = histbias::LoadLexicon(lexicon_path);
  const auto table = histbias::DescriptorCounts(in.entities, in.groups);

  // Groups whose descriptors miss the lexicon entirely get no score; they
  // are still listed so every group appears in the report.
  struct Row {
    std::string group;
    std::optional<histbias::LexiconScore> score;
  };
  std::vector<Row> rows;
  for (const auto& [group, size] : histbias::GroupSizes(in.groups)) {
    if (group == "unclassified") continue;
    Row r{group, std::nullopt};
    const auto counts = histbias::GroupDescriptors(table, group);
    for (const auto& [w, n] : counts) {
      if (lexicon.entries.count(w)) {
        r.score = histbias::LexiconAssoc(lexicon, counts, group);
        break;
      }
    }
    rows.push_back(std::move(r));
  }

  std::string body;
  using histbias::io::FormatNumber;
  if (c.format == "json") {
    ordered_json arr = ordered_json::array();
    for (const auto& r : rows) {
      ordered_json j;
      j["group"] = r.group;
      j["lexicon"] = lexicon.name;
      j["value"] = r.score ? Number(r.score->value) : ordered_json(nullptr);
      j["covered"] = r.score ? r.score->covered : 0;
      arr.push_back(std::move(j));
    }
    body = arr.dump(2) + "\n";
  } else {
    body = JoinCsv({"group", "lexicon", "value", "covered"});
    for (const auto& r : rows) {
      body += JoinCsv({r.group, lexicon.name,
                       r.score ? FormatNumber(r.score->value) : std::string("nan"),
                       std::to_string(r.score ? r.score->covered : 0)});
    }
  }
  histbias::io::AtomicWrite(c.out, body);

  Manifest m("lexicon");
  m.config()["lexicon"] = lexicon.name;
  m.Input("entities", c.in);
  m.Input("keywords", keywords_path);
  m.Input("lexicon", lexicon_path);
  m.Output(c.out);
  m.Write(c.out);
}

int ReportError(const std::string& kind, std::string message) {
  std::replace(message.begin(), message.end(), '\n', ' ');
  std::replace(message.begin(), message.end(), '\t', ' ');
  std::cerr << "error\t" << kind << "\t" << message << "\n";
  return kind == "missing_input" ? kExitMissingInput : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bias measurement toolkit for historical text corpora"};
  app.set_version_flag("--version", HISTBIAS_VERSION);
  app.require_subcommand(1);

  CommonOptions common;
  TrainOptions train;
  std::string rules = DataFile("cleanup_rules.jsonl");
  std::string periods = DataFile("periods.json");
  std::string weat_periods;
  std::string grid, pairs = DataFile("misspellings.tsv");
  std::string vectors, sets = DataFile("weat_sets.json"), tests = DataFile("weat_tests.json");
  std::string keywords = DataFile("classification_keywords.json");
  std::string lexicon;
  int runs = 5;
  std::size_t k = 20;
  int permutations = 10000;
  std::uint64_t min_word_count = 10;

  auto add_io = [&](CLI::App* cmd, const char* in_help) {
    cmd->add_option("--in", common.in, in_help)->required();
    cmd->add_option("--out", common.out, "Output path")->required();
  };
  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", common.format, "csv or json")->capture_default_str();
  };

  auto* clean = app.add_subcommand("clean", "Apply OCR cleanup rules to a corpus");
  add_io(clean, "Corpus JSONL");
  clean->add_option("--rules", rules, "Cleanup rules JSONL")->capture_default_str();

  auto* split = app.add_subcommand("split", "Split a corpus into period files");
  add_io(split, "Corpus JSONL");
  split->add_option("--periods", periods, "Periods JSON")->capture_default_str();

  auto* trn = app.add_subcommand("train", "Train skip-gram embeddings");
  add_io(trn, "Corpus JSONL");
  AddTrainFlags(trn, train);
  trn->add_option("--seed", common.seed, "Random seed")->capture_default_str();
  trn->add_option("--threads", common.threads, "Worker threads")->capture_default_str();

  auto* stab = app.add_subcommand("stability", "Embedding stability suite");
  add_io(stab, "Corpus JSONL");
  add_format(stab);
  AddTrainFlags(stab, train);
  stab->add_option("--grid", grid, "JSON file holding an array of config overrides");
  stab->add_option("--pairs", pairs, "Misspelling pairs TSV")->capture_default_str();
  stab->add_option("--runs", runs, "Runs per configuration")->capture_default_str();
  stab->add_option("--k", k, "Neighbours for the Jaccard score")->capture_default_str();
  stab->add_option("--seed", common.seed, "Base seed")->capture_default_str();
  stab->add_option("--threads", common.threads, "Worker threads")->capture_default_str();

  auto* weat = app.add_subcommand("weat", "WEAT over one model or a directory of period models");
  weat->add_option("--vectors,--in", vectors, "Vector file or directory of <period>.vec")
      ->required();
  weat->add_option("--out", common.out, "Output path")->required();
  add_format(weat);
  weat->add_option("--sets", sets, "Word sets JSON")->capture_default_str();
  weat->add_option("--tests", tests, "WEAT tests JSON")->capture_default_str();
  weat->add_option("--periods", weat_periods, "Periods JSON giving the period order");
  weat->add_option("--permutations", permutations, "Permutations (0 skips the p-value)")
      ->capture_default_str();
  weat->add_option("--seed", common.seed, "Permutation seed")->capture_default_str();

  auto* pmi = app.add_subcommand("pmi", "PMI gender/race plane of entity descriptors");
  add_io(pmi, "Entities JSONL");
  add_format(pmi);
  pmi->add_option("--keywords", keywords, "Classification keyword sets JSON")
      ->capture_default_str();
  pmi->add_option("--min-word-count", min_word_count, "Minimum four-group count per word")
      ->capture_default_str();

  auto* lex = app.add_subcommand("lexicon", "Lexicon scores of group descriptors");
  add_io(lex, "Entities JSONL");
  add_format(lex);
  lex->add_option("--keywords", keywords, "Classification keyword sets JSON")
      ->capture_default_str();
  lex->add_option("--lexicon", lexicon, "Lexicon TSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return ReportError("usage", e.what());
  }

  try {
    if (*clean) CmdClean(common, rules);
    if (*split) CmdSplit(common, periods);
    if (*trn) CmdTrain(common, train);
    if (*stab) CmdStability(common, train, grid, pairs, runs, k);
    if (*weat) CmdWeat(common, vectors, sets, tests, permutations, weat_periods);
    if (*pmi) CmdPmi(common, keywords, min_word_count);
    if (*lex) CmdLexicon(common, keywords, lexicon);
  } catch (const MissingInput& m) {
    return ReportError("missing_input", "no such file '" + m.path + "'");
  } catch (const histbias::Error& e) {
    return ReportError(std::string(histbias::ErrorKindName(e.kind())), e.what());
  } catch (const std::exception& e) {
    return ReportError("internal", e.what());
  }
  return 0;
}
