// Copyright 2026 The ontoembed Authors.
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

// Ontology data model: vocabularies, the three triple kinds with their
// train/valid/test splits, concept texts, and the on-disk dataset layout.

#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ontoembed/common.hpp"

namespace ontoembed {

// Dense zero-based name <-> id map.
class IdMap {
 public:
  IdMap() = default;
  explicit IdMap(std::vector<std::string> names) {
    for (auto& name : names) add(std::move(name));
  }

  Index add(std::string name) {
    const auto id = static_cast<Index>(names_.size());
    auto [it, inserted] = ids_.emplace(name, id);
    if (!inserted) throw data_error("duplicate name '" + name + "'");
    names_.push_back(std::move(name));
    return id;
  }

  std::size_t size() const { return names_.size(); }
  const std::string& name(Index id) const { return names_.at(id); }
  std::optional<Index> find(std::string_view name) const {
    auto it = ids_.find(std::string(name));
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }
  const std::vector<std::string>& names() const { return names_; }

  friend bool operator==(const IdMap& a, const IdMap& b) {
    return a.names_ == b.names_;
  }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, Index> ids_;
};

// InstanceOf and SubClassOf are structural and never appear in `relations`.
struct Vocabulary {
  IdMap instances;
  IdMap concepts;
  IdMap relations;

  friend bool operator==(const Vocabulary&, const Vocabulary&) = default;
};

struct RelationalTriple {
  Index head = 0;
  Index relation = 0;
  Index tail = 0;
  friend bool operator==(const RelationalTriple&,
                         const RelationalTriple&) = default;
};

struct InstanceOfTriple {
  Index instance = 0;
  Index concept_id = 0;
  friend bool operator==(const InstanceOfTriple&,
                         const InstanceOfTriple&) = default;
};

struct SubClassOfTriple {
  Index sub = 0;
  Index sup = 0;
  friend bool operator==(const SubClassOfTriple&,
                         const SubClassOfTriple&) = default;
};

enum class TripleKind { kRelational, kInstanceOf, kSubClassOf };

inline std::string_view to_string(TripleKind kind) {
  switch (kind) {
    case TripleKind::kRelational:
      return "relational";
    case TripleKind::kInstanceOf:
      return "instanceOf";
    case TripleKind::kSubClassOf:
      return "subClassOf";
  }
  return "unknown";
}

template <class T>
struct Labeled {
  T triple;
  bool label = true;
  friend bool operator==(const Labeled&, const Labeled&) = default;
};

// Train is all-positive. `*_labeled` is false when the file on disk had no
// label column; such a split holds positives only until negatives are
// generated for it.
template <class T>
struct TripleSplits {
  std::vector<T> train;
  std::vector<Labeled<T>> valid;
  std::vector<Labeled<T>> test;
  bool valid_labeled = true;
  bool test_labeled = true;

  friend bool operator==(const TripleSplits&, const TripleSplits&) = default;
};

struct ConceptText {
  Index concept_id = 0;
  std::string name;  // raw, as stored on disk
  std::string description;
  friend bool operator==(const ConceptText&, const ConceptText&) = default;
};

struct Dataset {
  Vocabulary vocab;
  TripleSplits<RelationalTriple> relational;
  TripleSplits<InstanceOfTriple> instance_of;
  TripleSplits<SubClassOfTriple> sub_class_of;
  std::vector<ConceptText> concept_texts;
  // Non-fatal issues found while loading (dropped duplicates etc).
  std::vector<std::string> warnings;

  std::size_t num_instances() const { return vocab.instances.size(); }
  std::size_t num_concepts() const { return vocab.concepts.size(); }
  std::size_t num_relations() const { return vocab.relations.size(); }
};

// Expected split sizes. Valid/test counts refer to positive triples.
struct DatasetStats {
  std::size_t instances = 0;
  std::size_t concepts = 0;
  std::size_t relations = 0;
  std::size_t train_relational = 0;
  std::size_t train_instance_of = 0;
  std::size_t train_sub_class_of = 0;
  std::size_t valid_relational = 0;
  std::size_t test_relational = 0;
  std::size_t valid_instance_of = 0;
  std::size_t test_instance_of = 0;
  std::size_t valid_sub_class_of = 0;
  std::size_t test_sub_class_of = 0;
};

// Published sizes of the benchmark datasets.
inline std::optional<DatasetStats> known_stats(std::string_view name) {
  if (name == "YAGO39K") {
    return DatasetStats{39374, 46110, 39,   354997, 442836, 30181,
                        9341,  9364,  5000, 5000,   1000,   1000};
  }
  if (name == "M-YAGO39K") {
    return DatasetStats{39374, 46110, 39,   354997, 442836, 30181,
                        9341,  9364,  8650, 8650,   1187,   1187};
  }
  if (name == "DB99K-242") {
    return DatasetStats{99744, 242,   298,  592654, 89744, 111,
                        32925, 32925, 4987, 4987,   13,    13};
  }
  return std::nullopt;
}

namespace detail {

inline std::string trim(std::string_view s) {
  const auto is_space = [](char ch) {
    return ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n';
  };
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && is_space(s[begin])) ++begin;
  while (end > begin && is_space(s[end - 1])) --end;
  return std::string(s.substr(begin, end - begin));
}

inline std::vector<std::string_view> split_fields(std::string_view line,
                                                  char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    fields.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

// Whitespace-separated tokens (runs of spaces/tabs collapse).
inline std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' ||
                               line[i] == '\r'))
      ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' &&
           line[j] != '\r')
      ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

class LineReader {
 public:
  explicit LineReader(const std::filesystem::path& path)
      : path_(path), in_(path) {
    if (!std::filesystem::exists(path)) {
      throw data_error("missing file: " + path.string());
    }
    if (!in_) throw io_error("cannot open " + path.string());
  }

  bool next(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw data_error(path_.filename().string() + ":" +
                     std::to_string(line_no_) + ": " + what);
  }

  std::size_t parse_count(std::string_view token) const {
    std::size_t value = 0;
    const auto* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (ec != std::errc() || ptr != end) {
      fail("expected a non-negative integer, got '" + std::string(token) +
           "'");
    }
    return value;
  }

  Index parse_id(std::string_view token, std::size_t bound,
                 std::string_view what) const {
    const auto value = parse_count(token);
    if (value >= bound) {
      fail(std::string(what) + " id " + std::to_string(value) +
           " out of range (size " + std::to_string(bound) + ")");
    }
    return static_cast<Index>(value);
  }

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  std::size_t line_no_ = 0;
};

inline IdMap read_id_map(const std::filesystem::path& path) {
  LineReader reader(path);
  std::string line;
  if (!reader.next(line)) reader.fail("empty file, expected a count line");
  const auto count = reader.parse_count(trim(line));
  std::vector<std::optional<std::string>> by_id(count);
  std::unordered_set<std::string> seen;
  std::size_t rows = 0;
  while (reader.next(line)) {
    if (trim(line).empty()) continue;
    const auto tab = line.rfind('\t');
    if (tab == std::string::npos) reader.fail("expected 'name<TAB>id'");
    std::string name = line.substr(0, tab);
    const auto id = reader.parse_id(trim(std::string_view(line).substr(tab + 1)),
                                    count, "entry");
    if (by_id[id]) reader.fail("duplicate id " + std::to_string(id));
    if (!seen.insert(name).second) reader.fail("duplicate name '" + name + "'");
    by_id[id] = std::move(name);
    ++rows;
  }
  if (rows != count) {
    reader.fail("header declares " + std::to_string(count) + " entries, found " +
                std::to_string(rows));
  }
  IdMap map;
  for (auto& name : by_id) map.add(std::move(*name));
  return map;
}

inline void write_id_map(const std::filesystem::path& path, const IdMap& map) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write " + path.string());
  out << map.size() << '\n';
  for (Index id = 0; id < map.size(); ++id) {
    out << map.name(id) << '\t' << id << '\n';
  }
}

// Parses "a b [c] [label]" rows. `width` is the number of id columns.
// Returns rows of ids plus the label column (if any). Within one file all
// rows must agree on whether a label is present.
struct RawRows {
  std::vector<std::array<Index, 3>> ids;
  std::vector<bool> labels;
  bool labeled = false;
};

inline RawRows read_rows(const std::filesystem::path& path,
                         std::span<const std::size_t> bounds,
                         std::span<const std::string_view> names,
                         bool allow_label) {
  LineReader reader(path);
  RawRows rows;
  std::optional<bool> labeled;
  std::string line;
  const std::size_t width = bounds.size();
  while (reader.next(line)) {
    const auto fields = tokens(line);
    if (fields.empty()) continue;
    const bool has_label = fields.size() == width + 1;
    if (fields.size() != width && !(allow_label && has_label)) {
      reader.fail("expected " + std::to_string(width) +
                  (allow_label ? " or " + std::to_string(width + 1) : "") +
                  " fields, got " + std::to_string(fields.size()));
    }
    if (labeled && *labeled != has_label) {
      reader.fail("label column present on some rows but not others");
    }
    labeled = has_label;
    std::array<Index, 3> ids{};
    for (std::size_t k = 0; k < width; ++k) {
      ids[k] = reader.parse_id(fields[k], bounds[k], names[k]);
    }
    rows.ids.push_back(ids);
    if (has_label) {
      const auto label = fields[width];
      if (label != "0" && label != "1") {
        reader.fail("label must be 0 or 1, got '" + std::string(label) + "'");
      }
      rows.labels.push_back(label == "1");
    } else {
      rows.labels.push_back(true);
    }
  }
  rows.labeled = labeled.value_or(allow_label);
  return rows;
}

template <class T>
T make_triple(const std::array<Index, 3>& ids);

template <>
inline RelationalTriple make_triple(const std::array<Index, 3>& ids) {
  // File column order is "head tail relation".
  return RelationalTriple{ids[0], ids[2], ids[1]};
}
template <>
inline InstanceOfTriple make_triple(const std::array<Index, 3>& ids) {
  return InstanceOfTriple{ids[0], ids[1]};
}
template <>
inline SubClassOfTriple make_triple(const std::array<Index, 3>& ids) {
  return SubClassOfTriple{ids[0], ids[1]};
}

inline void write_fields(std::ostream& out, const RelationalTriple& t) {
  out << t.head << ' ' << t.tail << ' ' << t.relation;
}
inline void write_fields(std::ostream& out, const InstanceOfTriple& t) {
  out << t.instance << ' ' << t.concept_id;
}
inline void write_fields(std::ostream& out, const SubClassOfTriple& t) {
  out << t.sub << ' ' << t.sup;
}

}  // namespace detail

// Packs triples of every kind into one integer key for hashing.
struct TripleKey {
  std::size_t num_instances = 0;
  std::size_t num_concepts = 0;
  std::size_t num_relations = 0;

  std::uint64_t operator()(const RelationalTriple& t) const {
    return (static_cast<std::uint64_t>(t.head) * num_relations + t.relation) *
               num_instances +
           t.tail;
  }
  std::uint64_t operator()(const InstanceOfTriple& t) const {
    return static_cast<std::uint64_t>(t.instance) * num_concepts + t.concept_id;
  }
  std::uint64_t operator()(const SubClassOfTriple& t) const {
    return static_cast<std::uint64_t>(t.sub) * num_concepts + t.sup;
  }
};

// Membership over train + valid-positive + test-positive triples, per kind.
class TruthIndex {
 public:
  TruthIndex() = default;
  explicit TruthIndex(const Dataset& dataset)
      : key_{dataset.num_instances(), dataset.num_concepts(),
             dataset.num_relations()} {
    add_all(dataset.relational, relational_);
    add_all(dataset.instance_of, instance_of_);
    add_all(dataset.sub_class_of, sub_class_of_);
  }

  bool contains(const RelationalTriple& t) const {
    return relational_.contains(key_(t));
  }
  bool contains(const InstanceOfTriple& t) const {
    return instance_of_.contains(key_(t));
  }
  bool contains(const SubClassOfTriple& t) const {
    return sub_class_of_.contains(key_(t));
  }

  std::size_t size(TripleKind kind) const {
    switch (kind) {
      case TripleKind::kRelational:
        return relational_.size();
      case TripleKind::kInstanceOf:
        return instance_of_.size();
      case TripleKind::kSubClassOf:
        return sub_class_of_.size();
    }
    return 0;
  }

 private:
  template <class T>
  void add_all(const TripleSplits<T>& splits,
               std::unordered_set<std::uint64_t>& set) {
    for (const auto& t : splits.train) set.insert(key_(t));
    for (const auto& lt : splits.valid)
      if (lt.label) set.insert(key_(lt.triple));
    for (const auto& lt : splits.test)
      if (lt.label) set.insert(key_(lt.triple));
  }

  TripleKey key_;
  std::unordered_set<std::uint64_t> relational_;
  std::unordered_set<std::uint64_t> instance_of_;
  std::unordered_set<std::uint64_t> sub_class_of_;
};

inline TruthIndex build_truth_index(const Dataset& dataset) {
  return TruthIndex(dataset);
}

// Turns a raw concept name into encoder input text: strips one matched
// outer "<...>" pair, maps each underscore to a space, trims.
inline std::string preprocess_concept_name(std::string_view raw) {
  std::string text = detail::trim(raw);
  if (text.size() >= 2 && text.front() == '<' && text.back() == '>') {
    text = text.substr(1, text.size() - 2);
  }
  std::replace(text.begin(), text.end(), '_', ' ');
  text = detail::trim(text);
  if (text.empty()) {
    throw data_error("empty concept text for '" + std::string(raw) + "'");
  }
  return text;
}

namespace detail {

template <class T>
std::vector<T> positives(const std::vector<Labeled<T>>& rows) {
  std::vector<T> out;
  for (const auto& row : rows)
    if (row.label) out.push_back(row.triple);
  return out;
}

template <class T>
void load_splits(const std::filesystem::path& dir, std::string_view stem,
                 std::span<const std::size_t> bounds,
                 std::span<const std::string_view> names,
                 const TripleKey& key, TripleSplits<T>& splits,
                 std::vector<std::string>& warnings) {
  const auto file = [&](std::string_view split) {
    return dir / (std::string(stem) + "_" + std::string(split) + ".txt");
  };
  const auto train_rows = read_rows(file("train"), bounds, names, false);
  std::unordered_set<std::uint64_t> seen;
  std::size_t duplicates = 0;
  std::size_t reflexive = 0;
  for (const auto& ids : train_rows.ids) {
    const T t = make_triple<T>(ids);
    if constexpr (std::is_same_v<T, SubClassOfTriple>) {
      if (t.sub == t.sup) {
        ++reflexive;
        continue;
      }
    }
    if (!seen.insert(key(t)).second) {
      ++duplicates;
      continue;
    }
    splits.train.push_back(t);
  }
  if (duplicates > 0) {
    warnings.push_back(std::string(stem) + "_train: dropped " +
                       std::to_string(duplicates) + " duplicate triples");
  }
  if (reflexive > 0) {
    warnings.push_back(std::string(stem) + "_train: rejected " +
                       std::to_string(reflexive) + " reflexive triples");
  }

  const auto load_labeled = [&](std::string_view split,
                                std::vector<Labeled<T>>& out, bool& labeled) {
    const auto rows = read_rows(file(split), bounds, names, true);
    labeled = rows.labeled;
    for (std::size_t k = 0; k < rows.ids.size(); ++k) {
      out.push_back(Labeled<T>{make_triple<T>(rows.ids[k]), rows.labels[k]});
    }
  };
  load_labeled("valid", splits.valid, splits.valid_labeled);
  load_labeled("test", splits.test, splits.test_labeled);

  // A positive may live in exactly one split.
  std::unordered_set<std::uint64_t> valid_pos;
  for (const auto& t : positives(splits.valid)) {
    if (seen.contains(key(t))) {
      throw data_error(std::string(stem) +
                       ": positive triple appears in both train and valid");
    }
    valid_pos.insert(key(t));
  }
  for (const auto& t : positives(splits.test)) {
    if (seen.contains(key(t)) || valid_pos.contains(key(t))) {
      throw data_error(std::string(stem) +
                       ": test positive also appears in train or valid");
    }
  }
}

template <class T>
void save_splits(const std::filesystem::path& dir, std::string_view stem,
                 const TripleSplits<T>& splits) {
  const auto open = [&](std::string_view split) {
    const auto path =
        dir / (std::string(stem) + "_" + std::string(split) + ".txt");
    std::ofstream out(path);
    if (!out) throw io_error("cannot write " + path.string());
    return out;
  };
  {
    auto out = open("train");
    for (const auto& t : splits.train) {
      write_fields(out, t);
      out << '\n';
    }
  }
  const auto write_labeled = [&](std::string_view split,
                                 const std::vector<Labeled<T>>& rows,
                                 bool labeled) {
    auto out = open(split);
    for (const auto& row : rows) {
      write_fields(out, row.triple);
      if (labeled) out << ' ' << (row.label ? 1 : 0);
      out << '\n';
    }
  };
  write_labeled("valid", splits.valid, splits.valid_labeled);
  write_labeled("test", splits.test, splits.test_labeled);
}

inline void check_count(std::string_view what, std::size_t expected,
                        std::size_t actual) {
  if (expected != actual) {
    throw data_error("split-count mismatch for " + std::string(what) +
                     ": expected " + std::to_string(expected) + ", found " +
                     std::to_string(actual));
  }
}

template <class T>
std::size_t count_positives(const std::vector<Labeled<T>>& rows) {
  return static_cast<std::size_t>(std::count_if(
      rows.begin(), rows.end(), [](const auto& r) { return r.label; }));
}

}  // namespace detail

inline void check_stats(const Dataset& d, const DatasetStats& s) {
  using detail::check_count;
  using detail::count_positives;
  check_count("instances", s.instances, d.num_instances());
  check_count("concepts", s.concepts, d.num_concepts());
  check_count("relations", s.relations, d.num_relations());
  check_count("train relational", s.train_relational, d.relational.train.size());
  check_count("train instanceOf", s.train_instance_of,
              d.instance_of.train.size());
  check_count("train subClassOf", s.train_sub_class_of,
              d.sub_class_of.train.size());
  check_count("valid relational", s.valid_relational,
              count_positives(d.relational.valid));
  check_count("test relational", s.test_relational,
              count_positives(d.relational.test));
  check_count("valid instanceOf", s.valid_instance_of,
              count_positives(d.instance_of.valid));
  check_count("test instanceOf", s.test_instance_of,
              count_positives(d.instance_of.test));
  check_count("valid subClassOf", s.valid_sub_class_of,
              count_positives(d.sub_class_of.valid));
  check_count("test subClassOf", s.test_sub_class_of,
              count_positives(d.sub_class_of.test));
}

// Reads "key = value" lines naming DatasetStats fields.
inline DatasetStats read_stats_file(const std::filesystem::path& path) {
  detail::LineReader reader(path);
  DatasetStats stats;
  const std::pair<std::string_view, std::size_t DatasetStats::*> fields[] = {
      {"instances", &DatasetStats::instances},
      {"concepts", &DatasetStats::concepts},
      {"relations", &DatasetStats::relations},
      {"train_relational", &DatasetStats::train_relational},
      {"train_instance_of", &DatasetStats::train_instance_of},
      {"train_sub_class_of", &DatasetStats::train_sub_class_of},
      {"valid_relational", &DatasetStats::valid_relational},
      {"test_relational", &DatasetStats::test_relational},
      {"valid_instance_of", &DatasetStats::valid_instance_of},
      {"test_instance_of", &DatasetStats::test_instance_of},
      {"valid_sub_class_of", &DatasetStats::valid_sub_class_of},
      {"test_sub_class_of", &DatasetStats::test_sub_class_of},
  };
  std::string line;
  while (reader.next(line)) {
    const auto body = detail::trim(line.substr(0, line.find('#')));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) reader.fail("expected 'key = value'");
    const auto k = detail::trim(std::string_view(body).substr(0, eq));
    const auto v = detail::trim(std::string_view(body).substr(eq + 1));
    bool matched = false;
    for (const auto& [name, member] : fields) {
      if (name == k) {
        stats.*member = reader.parse_count(v);
        matched = true;
      }
    }
    if (!matched) reader.fail("unknown statistics key '" + k + "'");
  }
  return stats;
}

inline Dataset load_dataset(const std::filesystem::path& dir,
                            const std::optional<DatasetStats>& expect_stats =
                                std::nullopt) {
  if (!std::filesystem::is_directory(dir)) {
    throw data_error("missing file: dataset directory " + dir.string());
  }
  Dataset d;
  d.vocab.instances = detail::read_id_map(dir / "instance2id.txt");
  d.vocab.concepts = detail::read_id_map(dir / "concept2id.txt");
  d.vocab.relations = detail::read_id_map(dir / "relation2id.txt");
  const TripleKey key{d.num_instances(), d.num_concepts(), d.num_relations()};

  {
    const std::array<std::size_t, 3> bounds{d.num_instances(), d.num_instances(),
                                            d.num_relations()};
    const std::array<std::string_view, 3> names{"instance", "instance",
                                                "relation"};
    detail::load_splits(dir, "triple2id", bounds, names, key, d.relational,
                        d.warnings);
  }
  {
    const std::array<std::size_t, 2> bounds{d.num_instances(), d.num_concepts()};
    const std::array<std::string_view, 2> names{"instance", "concept"};
    detail::load_splits(dir, "instanceOf2id", bounds, names, key, d.instance_of,
                        d.warnings);
  }
  {
    const std::array<std::size_t, 2> bounds{d.num_concepts(), d.num_concepts()};
    const std::array<std::string_view, 2> names{"concept", "concept"};
    detail::load_splits(dir, "subClassOf2id", bounds, names, key,
                        d.sub_class_of, d.warnings);
  }

  const auto text_path = dir / "concept_text.txt";
  if (std::filesystem::exists(text_path)) {
    detail::LineReader reader(text_path);
    std::string line;
    while (reader.next(line)) {
      if (line.empty()) continue;
      const auto fields = detail::split_fields(line, '\t');
      if (fields.size() != 2 && fields.size() != 3) {
        reader.fail("expected 'concept_id<TAB>name<TAB>description'");
      }
      ConceptText text;
      text.concept_id = reader.parse_id(fields[0], d.num_concepts(), "concept");
      text.name = std::string(fields[1]);
      if (fields.size() == 3) text.description = std::string(fields[2]);
      try {
        preprocess_concept_name(text.name);
      } catch (const Error& e) {
        reader.fail(e.what());
      }
      d.concept_texts.push_back(std::move(text));
    }
  }

  if (expect_stats) check_stats(d, *expect_stats);
  return d;
}

namespace detail {

// Keeps ceil(fraction * n) rows chosen uniformly, in their original order.
template <class Row>
std::vector<Row> sample_rows(const std::vector<Row>& rows, double fraction, Rng& rng) {
  const std::size_t n = rows.size();
  const auto keep = std::min<std::size_t>(
      n, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n))));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t k = 0; k < keep; ++k) {
    std::swap(order[k], order[k + uniform_index(rng, n - k)]);
  }
  order.resize(keep);
  std::sort(order.begin(), order.end());
  std::vector<Row> out;
  out.reserve(keep);
  for (const auto k : order) out.push_back(rows[k]);
  return out;
}

template <class T>
TripleSplits<T> sample_splits(const TripleSplits<T>& s, double fraction, Rng& rng) {
  TripleSplits<T> out = s;
  out.train = sample_rows(s.train, fraction, rng);
  out.valid = sample_rows(s.valid, fraction, rng);
  out.test = sample_rows(s.test, fraction, rng);
  return out;
}

}  // namespace detail

// A reduced copy for quick end-to-end runs: every split keeps a `fraction`
// of its rows; the vocabularies are unchanged so ids stay valid.
inline Dataset subsample_dataset(const Dataset& d, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw usage_error("subsample fraction must be in (0, 1]");
  }
  auto rng = make_rng(seed, streams::kSubsample);
  Dataset out;
  out.vocab = d.vocab;
  out.concept_texts = d.concept_texts;
  out.relational = detail::sample_splits(d.relational, fraction, rng);
  out.instance_of = detail::sample_splits(d.instance_of, fraction, rng);
  out.sub_class_of = detail::sample_splits(d.sub_class_of, fraction, rng);
  return out;
}

inline void save_dataset(const Dataset& d, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  detail::write_id_map(dir / "instance2id.txt", d.vocab.instances);
  detail::write_id_map(dir / "concept2id.txt", d.vocab.concepts);
  detail::write_id_map(dir / "relation2id.txt", d.vocab.relations);
  detail::save_splits(dir, "triple2id", d.relational);
  detail::save_splits(dir, "instanceOf2id", d.instance_of);
  detail::save_splits(dir, "subClassOf2id", d.sub_class_of);
  if (!d.concept_texts.empty()) {
    std::ofstream out(dir / "concept_text.txt");
    if (!out) throw io_error("cannot write concept_text.txt");
    for (const auto& t : d.concept_texts) {
      out << t.concept_id << '\t' << t.name << '\t' << t.description << '\n';
    }
  }
}

}  // namespace ontoembed
