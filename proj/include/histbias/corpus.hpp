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

// Corpus ingestion: JSONL documents, rule-based OCR cleanup and splitting
// into historical periods.

#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <regex>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "histbias/error.hpp"
#include "histbias/io.hpp"
#include "histbias/text.hpp"
#include "json.hpp"

namespace histbias {

// ISO-8601 calendar date with the precision it was written in: "1791",
// "1791-03" and "1791-03-01" are all accepted and written back unchanged.
struct Date {
  int year = 0;
  int month = 0;  // 0 when absent
  int day = 0;    // 0 when absent

  friend bool operator==(const Date&, const Date&) = default;

  std::string ToString() const {
    char buf[16];
    if (month == 0) {
      std::snprintf(buf, sizeof buf, "%04d", year);
    } else if (day == 0) {
      std::snprintf(buf, sizeof buf, "%04d-%02d", year, month);
    } else {
      std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    }
    return buf;
  }

  static std::optional<Date> Parse(std::string_view s) {
    auto number = [](std::string_view part, int& out) {
      if (part.empty()) return false;
      for (char c : part) {
        if (c < '0' || c > '9') return false;
      }
      auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), out);
      return ec == std::errc() && p == part.data() + part.size();
    };
    Date d;
    if (s.size() != 4 && s.size() != 7 && s.size() != 10) return std::nullopt;
    if (!number(s.substr(0, 4), d.year)) return std::nullopt;
    if (s.size() >= 7) {
      if (s[4] != '-' || !number(s.substr(5, 2), d.month)) return std::nullopt;
      if (d.month < 1 || d.month > 12) return std::nullopt;
    }
    if (s.size() == 10) {
      if (s[7] != '-' || !number(s.substr(8, 2), d.day)) return std::nullopt;
      static constexpr int kDays[] = {31, 29, 31, 30, 31, 30,
                                      31, 31, 30, 31, 30, 31};
      const bool leap =
          (d.year % 4 == 0 && d.year % 100 != 0) || d.year % 400 == 0;
      int max_day = kDays[d.month - 1];
      if (d.month == 2 && !leap) max_day = 28;
      if (d.day < 1 || d.day > max_day) return std::nullopt;
    }
    return d;
  }
};

struct Document {
  std::string id;
  std::string text;
  std::optional<Date> date;
  std::optional<std::string> source;

  friend bool operator==(const Document&, const Document&) = default;
};

// ---------------------------------------------------------------------------
// JSONL corpus files

inline Document ParseDocumentLine(std::string_view line, std::size_t line_no) {
  auto fail = [&](const std::string& what) -> Document {
    Fail(ErrorKind::kParse, "line " + std::to_string(line_no) + ": " + what);
  };
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error&) {
    return fail("malformed JSON");
  }
  if (!j.is_object()) return fail("record is not an object");
  auto it_id = j.find("id");
  auto it_text = j.find("text");
  if (it_id == j.end() || !it_id->is_string()) {
    return fail("missing string field \"id\"");
  }
  if (it_text == j.end() || !it_text->is_string()) {
    return fail("missing string field \"text\"");
  }
  Document doc;
  doc.id = it_id->get<std::string>();
  doc.text = it_text->get<std::string>();
  if (doc.id.empty()) return fail("empty id");
  if (text::Trim(doc.text).empty()) return fail("empty text");
  if (auto it = j.find("date"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) return fail("\"date\" must be a string");
    doc.date = Date::Parse(it->get<std::string>());
    if (!doc.date) return fail("invalid date '" + it->get<std::string>() + "'");
  }
  if (auto it = j.find("source"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) return fail("\"source\" must be a string");
    doc.source = it->get<std::string>();
  }
  return doc;
}

inline std::vector<Document> ReadCorpus(std::istream& in) {
  std::vector<Document> docs;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (io::ReadLine(in, line)) {
    ++line_no;
    if (text::Trim(line).empty()) continue;
    Document doc = ParseDocumentLine(line, line_no);
    if (!seen.insert(doc.id).second) {
      Fail(ErrorKind::kParse, "line " + std::to_string(line_no) +
                                  ": duplicate id '" + doc.id + "'");
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

inline std::vector<Document> LoadCorpus(const std::filesystem::path& path) {
  std::ifstream in = io::OpenForRead(path);
  return ReadCorpus(in);
}

inline std::string DocumentToJson(const Document& doc) {
  nlohmann::ordered_json j;
  j["id"] = doc.id;
  j["text"] = doc.text;
  if (doc.date) j["date"] = doc.date->ToString();
  if (doc.source) j["source"] = *doc.source;
  return j.dump();
}

inline std::string CorpusToJsonl(const std::vector<Document>& docs) {
  std::string out;
  for (const auto& doc : docs) {
    out += DocumentToJson(doc);
    out += '\n';
  }
  return out;
}

inline void SaveCorpus(const std::vector<Document>& docs,
                       const std::filesystem::path& path) {
  io::AtomicWrite(path, CorpusToJsonl(docs));
}

// ---------------------------------------------------------------------------
// OCR cleanup

enum class RuleScope {
  kAnywhere,      // match anywhere in the text
  kWordInternal,  // every matched character is a word character
  kWholeWord,     // the match is exactly one word
};

inline std::optional<RuleScope> ParseRuleScope(std::string_view s) {
  if (s == "anywhere") return RuleScope::kAnywhere;
  if (s == "word-internal") return RuleScope::kWordInternal;
  if (s == "whole-word") return RuleScope::kWholeWord;
  return std::nullopt;
}

inline const char* RuleScopeName(RuleScope s) {
  switch (s) {
    case RuleScope::kAnywhere:     return "anywhere";
    case RuleScope::kWordInternal: return "word-internal";
    case RuleScope::kWholeWord:    return "whole-word";
  }
  return "anywhere";
}

// A literal or ECMAScript-regex rewrite. Regex replacements may reference
// capture groups as $1, $2, ...
struct CleanupRule {
  std::string pattern;
  std::string replacement;
  RuleScope scope = RuleScope::kAnywhere;
  bool regex = false;
};

// A rule list compiled once and applied many times. Rules run in order; each
// one is re-applied until the text stops changing (bounded by kMaxPasses)
// before the next rule starts.
class Cleaner {
 public:
  static constexpr int kMaxPasses = 64;

  explicit Cleaner(std::vector<CleanupRule> rules) : rules_(std::move(rules)) {
    compiled_.reserve(rules_.size());
    for (const auto& rule : rules_) {
      if (rule.pattern.empty()) {
        Fail(ErrorKind::kInvalidArgument, "cleanup rule with empty pattern");
      }
      if (rule.regex) {
        try {
          compiled_.emplace_back(rule.pattern, std::regex::ECMAScript);
        } catch (const std::regex_error&) {
          Fail(ErrorKind::kInvalidArgument,
               "invalid cleanup regex '" + rule.pattern + "'");
        }
      } else {
        compiled_.emplace_back();
      }
    }
  }

  const std::vector<CleanupRule>& rules() const { return rules_; }

  std::string operator()(std::string_view input) const {
    std::string current(input);
    for (std::size_t r = 0; r < rules_.size(); ++r) {
      for (int pass = 0; pass < kMaxPasses; ++pass) {
        std::string next = ApplyOnce(r, current);
        if (next == current) break;
        current = std::move(next);
      }
    }
    return current;
  }

 private:
  static bool WordCharBefore(std::string_view s, std::size_t pos) {
    if (pos == 0) return false;
    return text::IsWordChar(text::DecodeAt(s, text::PrevStart(s, pos)).cp);
  }

  static bool WordCharAt(std::string_view s, std::size_t pos) {
    if (pos >= s.size()) return false;
    return text::IsWordChar(text::DecodeAt(s, pos).cp);
  }

  static bool AllWordChars(std::string_view s) {
    for (std::size_t i = 0; i < s.size();) {
      const auto d = text::DecodeAt(s, i);
      if (!text::IsWordChar(d.cp)) return false;
      i += d.length;
    }
    return true;
  }

  static bool ScopeAllows(RuleScope scope, std::string_view s,
                          std::size_t begin, std::size_t end) {
    switch (scope) {
      case RuleScope::kAnywhere:
        return true;
      case RuleScope::kWordInternal:
        return end > begin && AllWordChars(s.substr(begin, end - begin));
      case RuleScope::kWholeWord:
        return end > begin && AllWordChars(s.substr(begin, end - begin)) &&
               !WordCharBefore(s, begin) && !WordCharAt(s, end);
    }
    return false;
  }

  std::string ApplyOnce(std::size_t r, const std::string& s) const {
    const CleanupRule& rule = rules_[r];
    std::string out;
    out.reserve(s.size());
    std::size_t copied = 0;
    if (!rule.regex) {
      std::size_t pos = 0;
      while ((pos = s.find(rule.pattern, pos)) != std::string::npos) {
        const std::size_t end = pos + rule.pattern.size();
        if (ScopeAllows(rule.scope, s, pos, end)) {
          out.append(s, copied, pos - copied);
          out += rule.replacement;
          copied = pos = end;
        } else {
          pos += text::DecodeAt(s, pos).length;
        }
      }
    } else {
      for (auto it = std::sregex_iterator(s.begin(), s.end(), compiled_[r]);
           it != std::sregex_iterator(); ++it) {
        const auto& m = *it;
        const auto begin = static_cast<std::size_t>(m.position(0));
        const std::size_t end = begin + static_cast<std::size_t>(m.length(0));
        if (end == begin || !ScopeAllows(rule.scope, s, begin, end)) continue;
        out.append(s, copied, begin - copied);
        out += m.format(rule.replacement);
        copied = end;
      }
    }
    out.append(s, copied, std::string::npos);
    return out;
  }

  std::vector<CleanupRule> rules_;
  std::vector<std::regex> compiled_;
};

inline std::string CleanOcr(std::string_view input,
                            const std::vector<CleanupRule>& rules) {
  return Cleaner(rules)(input);
}

// Rules file: JSONL {pattern, replacement, scope[, regex]}.
inline std::vector<CleanupRule> ReadCleanupRules(std::istream& in) {
  std::vector<CleanupRule> rules;
  std::string line;
  std::size_t line_no = 0;
  while (io::ReadLine(in, line)) {
    ++line_no;
    if (text::Trim(line).empty()) continue;
    const std::string where = "rules line " + std::to_string(line_no) + ": ";
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error&) {
      Fail(ErrorKind::kParse, where + "malformed JSON");
    }
    if (!j.is_object() || !j.contains("pattern") || !j["pattern"].is_string() ||
        !j.contains("replacement") || !j["replacement"].is_string()) {
      Fail(ErrorKind::kParse, where + "expected string pattern and replacement");
    }
    CleanupRule rule;
    rule.pattern = j["pattern"].get<std::string>();
    rule.replacement = j["replacement"].get<std::string>();
    if (auto it = j.find("scope"); it != j.end()) {
      if (!it->is_string()) Fail(ErrorKind::kParse, where + "scope must be a string");
      auto scope = ParseRuleScope(it->get<std::string>());
      if (!scope) {
        Fail(ErrorKind::kParse,
             where + "unknown scope '" + it->get<std::string>() + "'");
      }
      rule.scope = *scope;
    }
    if (auto it = j.find("regex"); it != j.end()) {
      if (!it->is_boolean()) Fail(ErrorKind::kParse, where + "regex must be a boolean");
      rule.regex = it->get<bool>();
    }
    if (rule.pattern.empty()) Fail(ErrorKind::kParse, where + "empty pattern");
    rules.push_back(std::move(rule));
  }
  return rules;
}

inline std::vector<CleanupRule> LoadCleanupRules(
    const std::filesystem::path& path) {
  std::ifstream in = io::OpenForRead(path);
  return ReadCleanupRules(in);
}

// ---------------------------------------------------------------------------
// Period splitting

struct PeriodSpec {
  std::string name;
  int start_year = 0;  // inclusive
  int end_year = 0;    // inclusive
};

inline constexpr std::string_view kUndatedBucket = "undated";

inline void ValidatePeriods(const std::vector<PeriodSpec>& periods) {
  for (std::size_t i = 0; i < periods.size(); ++i) {
    const auto& p = periods[i];
    if (p.name.empty()) Fail(ErrorKind::kInvalidArgument, "period with empty name");
    if (p.name == kUndatedBucket) {
      Fail(ErrorKind::kInvalidArgument, "period name 'undated' is reserved");
    }
    if (p.start_year > p.end_year) {
      Fail(ErrorKind::kInvalidArgument,
           "period '" + p.name + "' starts after it ends");
    }
    if (i > 0 && periods[i - 1].end_year >= p.start_year) {
      Fail(ErrorKind::kInvalidArgument,
           "periods '" + periods[i - 1].name + "' and '" + p.name +
               "' overlap or are out of order");
    }
  }
}

// Every document lands in exactly one bucket. Undated documents and those
// dated outside every period go to "undated". Buckets keep input order.
inline std::map<std::string, std::vector<Document>> SplitPeriods(
    const std::vector<Document>& docs, const std::vector<PeriodSpec>& periods) {
  ValidatePeriods(periods);
  std::map<std::string, std::vector<Document>> buckets;
  for (const auto& p : periods) buckets[p.name];
  buckets[std::string(kUndatedBucket)];
  for (const auto& doc : docs) {
    const PeriodSpec* hit = nullptr;
    if (doc.date) {
      const int year = doc.date->year;
      auto it = std::lower_bound(
          periods.begin(), periods.end(), year,
          [](const PeriodSpec& p, int y) { return p.end_year < y; });
      if (it != periods.end() && it->start_year <= year) hit = &*it;
    }
    buckets[hit ? hit->name : std::string(kUndatedBucket)].push_back(doc);
  }
  return buckets;
}

// Periods file: JSON array of {name, start_year, end_year}.
inline std::vector<PeriodSpec> ParsePeriods(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    Fail(ErrorKind::kParse, std::string("periods: ") + e.what());
  }
  if (!j.is_array()) Fail(ErrorKind::kParse, "periods: expected a JSON array");
  std::vector<PeriodSpec> periods;
  for (const auto& item : j) {
    if (!item.is_object() || !item.contains("name") ||
        !item.contains("start_year") || !item.contains("end_year") ||
        !item["name"].is_string() || !item["start_year"].is_number_integer() ||
        !item["end_year"].is_number_integer()) {
      Fail(ErrorKind::kParse,
           "periods: each entry needs name, start_year, end_year");
    }
    periods.push_back({item["name"].get<std::string>(),
                       item["start_year"].get<int>(),
                       item["end_year"].get<int>()});
  }
  ValidatePeriods(periods);
  return periods;
}

inline std::vector<PeriodSpec> LoadPeriods(const std::filesystem::path& path) {
  return ParsePeriods(io::ReadFile(path));
}

}  // namespace histbias
