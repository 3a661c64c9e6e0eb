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

// Keyword classification of pre-extracted entities into gender, race and
// intersectional groups, and per-group descriptor tallies.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "histbias/assoc.hpp"
#include "histbias/error.hpp"
#include "histbias/io.hpp"
#include "histbias/text.hpp"
#include "histbias/tokenize.hpp"
#include "json.hpp"

namespace histbias {

struct EntityRecord {
  std::string id;
  std::vector<std::string> references;
  std::vector<std::string> descriptors;
};

inline std::vector<EntityRecord> ReadEntities(std::istream& in) {
  std::vector<EntityRecord> out;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (io::ReadLine(in, line)) {
    ++line_no;
    if (text::Trim(line).empty()) continue;
    const std::string where = "entities line " + std::to_string(line_no) + ": ";
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error&) {
      Fail(ErrorKind::kParse, where + "malformed JSON");
    }
    if (!j.is_object() || !j.contains("id") || !j["id"].is_string() ||
        !j.contains("references") || !j["references"].is_array()) {
      Fail(ErrorKind::kParse, where + "needs string id and references array");
    }
    EntityRecord e;
    e.id = j["id"].get<std::string>();
    for (const auto& r : j["references"]) {
      if (!r.is_string()) Fail(ErrorKind::kParse, where + "non-string reference");
      e.references.push_back(r.get<std::string>());
    }
    if (e.references.empty()) Fail(ErrorKind::kParse, where + "no references");
    if (auto it = j.find("descriptors"); it != j.end()) {
      if (!it->is_array()) Fail(ErrorKind::kParse, where + "descriptors must be an array");
      for (const auto& d : *it) {
        if (!d.is_string()) Fail(ErrorKind::kParse, where + "non-string descriptor");
        e.descriptors.push_back(d.get<std::string>());
      }
    }
    if (!seen.insert(e.id).second) {
      Fail(ErrorKind::kParse, where + "duplicate id '" + e.id + "'");
    }
    out.push_back(std::move(e));
  }
  return out;
}

inline std::vector<EntityRecord> LoadEntities(const std::filesystem::path& path) {
  std::ifstream in = io::OpenForRead(path);
  return ReadEntities(in);
}

enum class Gender { kFemale, kMale, kUnclassified };
enum class Race { kWhite, kNonWhite };

inline std::string_view GenderName(Gender g) {
  switch (g) {
    case Gender::kFemale: return kFemale;
    case Gender::kMale:   return kMale;
    case Gender::kUnclassified: return "unclassified";
  }
  return "unclassified";
}

inline std::string_view RaceName(Race r) {
  return r == Race::kNonWhite ? kNonWhite : kWhite;
}

struct GroupAssignment {
  Gender gender = Gender::kUnclassified;
  Race race = Race::kWhite;

  // "<race>-<gender>", e.g. "non-white-female"; nullopt when the gender is
  // unclassified.
  std::optional<std::string> Intersection() const {
    if (gender == Gender::kUnclassified) return std::nullopt;
    return std::string(RaceName(race)) + "-" + std::string(GenderName(gender));
  }

  friend bool operator==(const GroupAssignment&, const GroupAssignment&) = default;
};

// Matches reference tokens against the female, male and non-white keyword
// sets. Keywords are normalized with the word tokenizer; one that splits
// into several tokens ("females'") matches as a contiguous token run.
class EntityClassifier {
 public:
  explicit EntityClassifier(const std::map<std::string, WordSet>& keyword_sets) {
    for (auto group : {kFemale, kMale, kNonWhite}) {
      auto it = keyword_sets.find(std::string(group));
      if (it == keyword_sets.end()) {
        Fail(ErrorKind::kInvalidArgument,
             "missing keyword set '" + std::string(group) + "'");
      }
      Keywords& k = group == kFemale ? female_ : group == kMale ? male_ : non_white_;
      for (const auto& w : it->second.words) {
        auto toks = TokenizeWords(w, true);
        if (toks.size() == 1) {
          k.single.insert(toks[0]);
        } else if (!toks.empty()) {
          k.runs.push_back(std::move(toks));
        }
      }
    }
  }

  explicit EntityClassifier(const std::vector<WordSet>& sets)
      : EntityClassifier(ByName(sets)) {}

  // Gender is female or male when exactly one of those keyword sets
  // matches, otherwise unclassified. Race is non-white when the non-white
  // set matches and white otherwise.
  GroupAssignment Classify(const EntityRecord& e) const {
    std::vector<std::vector<std::string>> refs;
    refs.reserve(e.references.size());
    for (const auto& r : e.references) refs.push_back(TokenizeWords(r, true));
    const bool f = Matches(female_, refs);
    const bool m = Matches(male_, refs);
    GroupAssignment a;
    a.gender = f == m ? Gender::kUnclassified : f ? Gender::kFemale : Gender::kMale;
    a.race = Matches(non_white_, refs) ? Race::kNonWhite : Race::kWhite;
    return a;
  }

 private:
  struct Keywords {
    std::unordered_set<std::string> single;
    std::vector<std::vector<std::string>> runs;
  };

  static std::map<std::string, WordSet> ByName(const std::vector<WordSet>& sets) {
    std::map<std::string, WordSet> out;
    for (const auto& s : sets) out[s.name] = s;
    return out;
  }

  static bool Matches(const Keywords& k,
                      const std::vector<std::vector<std::string>>& refs) {
    for (const auto& toks : refs) {
      for (std::size_t i = 0; i < toks.size(); ++i) {
        if (k.single.count(toks[i])) return true;
        for (const auto& run : k.runs) {
          if (i + run.size() <= toks.size() &&
              std::equal(run.begin(), run.end(), toks.begin() + static_cast<std::ptrdiff_t>(i))) {
            return true;
          }
        }
      }
    }
    return false;
  }

  Keywords female_, male_, non_white_;
};

inline GroupAssignment ClassifyEntity(const EntityRecord& e,
                                      const std::map<std::string, WordSet>& keyword_sets) {
  return EntityClassifier(keyword_sets).Classify(e);
}

inline std::vector<GroupAssignment> ClassifyEntities(
    const std::vector<EntityRecord>& entities, const EntityClassifier& classifier) {
  std::vector<GroupAssignment> out;
  out.reserve(entities.size());
  for (const auto& e : entities) out.push_back(classifier.Classify(e));
  return out;
}

// Every group an entity belongs to: its race, plus its gender and the
// race-gender intersection when the gender is classified.
inline std::vector<std::string> GroupsOf(const GroupAssignment& a) {
  std::vector<std::string> groups;
  if (a.gender != Gender::kUnclassified) groups.emplace_back(GenderName(a.gender));
  groups.emplace_back(RaceName(a.race));
  if (auto x = a.Intersection()) groups.push_back(*x);
  return groups;
}

// count(group, d) = occurrences of lowercased descriptor d over the
// entities of that group.
inline CountTable DescriptorCounts(const std::vector<EntityRecord>& entities,
                                   const std::vector<GroupAssignment>& assignments) {
  if (entities.size() != assignments.size()) {
    Fail(ErrorKind::kInvalidArgument, "entities and assignments differ in length");
  }
  CountTable table;
  for (std::size_t i = 0; i < entities.size(); ++i) {
    const auto groups = GroupsOf(assignments[i]);
    for (const auto& d : entities[i].descriptors) {
      const std::string word = text::Lowercase(d);
      if (word.empty()) continue;
      for (const auto& g : groups) table.Add(g, word);
    }
  }
  return table;
}

// Descriptor multiset of one group, as word -> count.
inline std::map<std::string, std::uint64_t> GroupDescriptors(const CountTable& table,
                                                             std::string_view group) {
  auto it = table.rows().find(std::string(group));
  if (it == table.rows().end()) return {};
  return it->second;
}

// Entity counts for female, male, unclassified, white, non-white and each
// observed intersection.
inline std::map<std::string, std::uint64_t> GroupSizes(
    const std::vector<GroupAssignment>& assignments) {
  std::map<std::string, std::uint64_t> sizes;
  for (auto name : {kFemale, kMale, std::string_view("unclassified"), kWhite, kNonWhite}) {
    sizes[std::string(name)] = 0;
  }
  for (const auto& a : assignments) {
    ++sizes[std::string(GenderName(a.gender))];
    ++sizes[std::string(RaceName(a.race))];
    if (auto x = a.Intersection()) ++sizes[*x];
  }
  return sizes;
}

}  // namespace histbias
