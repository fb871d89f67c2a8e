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

#include "ontoembed/ontology.hpp"

#include <set>
#include <tuple>

#include <gtest/gtest.h>

#include "ontoembed/synthetic.hpp"
#include "test_util.hpp"

namespace ontoembed {
namespace {

using testutil::TempDir;
using testutil::write_file;

TEST(LoadDatasetTest, ToyDirectory) {
  TempDir dir("toy");
  testutil::write_toy_dataset(dir.path());
  const Dataset d = load_dataset(dir.path());
  EXPECT_EQ(d.num_instances(), 3u);
  EXPECT_EQ(d.num_concepts(), 2u);
  EXPECT_EQ(d.num_relations(), 1u);
  ASSERT_EQ(d.relational.train.size(), 1u);
  // Column order on disk is "head tail relation".
  EXPECT_EQ(d.relational.train[0], (RelationalTriple{0, 0, 2}));
  ASSERT_EQ(d.relational.valid.size(), 2u);
  EXPECT_TRUE(d.relational.valid[0].label);
  EXPECT_FALSE(d.relational.valid[1].label);
  EXPECT_EQ(d.instance_of.train[0], (InstanceOfTriple{2, 0}));
  EXPECT_EQ(d.sub_class_of.train[0], (SubClassOfTriple{0, 1}));
  ASSERT_EQ(d.concept_texts.size(), 2u);
  EXPECT_EQ(d.concept_texts[0].description, "An animal kept at home.");
  EXPECT_EQ(d.vocab.concepts.find("<wordnet_animal>"), Index{1});
}

TEST(LoadDatasetTest, RoundTripIsByteIdentical) {
  TempDir a("rt_a"), b("rt_b");
  testutil::write_toy_dataset(a.path());
  const Dataset first = load_dataset(a.path());
  save_dataset(first, b.path());
  for (const auto& entry : std::filesystem::directory_iterator(a.path())) {
    const auto name = entry.path().filename().string();
    EXPECT_EQ(testutil::read_file(entry.path()),
              testutil::read_file(b.path() / name))
        << name;
  }
  const Dataset second = load_dataset(b.path());
  EXPECT_EQ(first.vocab, second.vocab);
  EXPECT_EQ(first.relational, second.relational);
  EXPECT_EQ(first.instance_of, second.instance_of);
  EXPECT_EQ(first.sub_class_of, second.sub_class_of);
  EXPECT_EQ(first.concept_texts, second.concept_texts);
}

TEST(LoadDatasetTest, SyntheticRoundTrip) {
  TempDir a("syn_a"), b("syn_b");
  const auto syn = make_synthetic_ontology({});
  save_dataset(syn.dataset, a.path());
  const Dataset loaded = load_dataset(a.path());
  EXPECT_EQ(loaded.vocab, syn.dataset.vocab);
  EXPECT_EQ(loaded.relational, syn.dataset.relational);
  EXPECT_EQ(loaded.instance_of, syn.dataset.instance_of);
  EXPECT_EQ(loaded.sub_class_of, syn.dataset.sub_class_of);
  EXPECT_EQ(loaded.concept_texts, syn.dataset.concept_texts);
  save_dataset(loaded, b.path());
  const Dataset again = load_dataset(b.path());
  EXPECT_EQ(again.relational, loaded.relational);
  EXPECT_EQ(again.instance_of, loaded.instance_of);
}

TEST(LoadDatasetTest, EmptyDirectoryIsMissingFile) {
  TempDir dir("empty");
  try {
    load_dataset(dir.path());
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kData);
    EXPECT_NE(std::string(e.what()).find("missing file"), std::string::npos);
  }
}

TEST(LoadDatasetTest, MalformedLineReportsFileAndLine) {
  TempDir dir("malformed");
  testutil::write_toy_dataset(dir.path());
  write_file(dir / "triple2id_train.txt", "0 2 0\n0 x 0\n");
  try {
    load_dataset(dir.path());
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("triple2id_train.txt:2"),
              std::string::npos)
        << e.what();
  }
}

TEST(LoadDatasetTest, IdOutOfRange) {
  TempDir dir("range");
  testutil::write_toy_dataset(dir.path());
  write_file(dir / "instanceOf2id_train.txt", "2 5\n");
  EXPECT_THROW(load_dataset(dir.path()), Error);
}

TEST(LoadDatasetTest, DuplicateVocabularyId) {
  TempDir dir("dup");
  testutil::write_toy_dataset(dir.path());
  write_file(dir / "instance2id.txt", "3\nalice\t0\nbob\t0\nfido\t2\n");
  try {
    load_dataset(dir.path());
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("duplicate id"), std::string::npos);
  }
}

TEST(LoadDatasetTest, MixedLabelColumnsRejected) {
  TempDir dir("mixed");
  testutil::write_toy_dataset(dir.path());
  write_file(dir / "subClassOf2id_valid.txt", "1 0 0\n0 1\n");
  EXPECT_THROW(load_dataset(dir.path()), Error);
}

TEST(LoadDatasetTest, ReflexiveAndDuplicateTrainTriplesDropped) {
  TempDir dir("reflexive");
  testutil::write_toy_dataset(dir.path());
  write_file(dir / "subClassOf2id_train.txt", "0 1\n1 1\n0 1\n");
  const Dataset d = load_dataset(dir.path());
  ASSERT_EQ(d.sub_class_of.train.size(), 1u);
  EXPECT_EQ(d.warnings.size(), 2u);
}

TEST(LoadDatasetTest, PositiveInTwoSplitsRejected) {
  TempDir dir("overlap");
  testutil::write_toy_dataset(dir.path());
  write_file(dir / "instanceOf2id_test.txt", "2 0 1\n");
  EXPECT_THROW(load_dataset(dir.path()), Error);
}

TEST(LoadDatasetTest, UnlabeledSplitsLoadAsPositives) {
  TempDir dir("unlabeled");
  testutil::write_toy_dataset(dir.path());
  write_file(dir / "instanceOf2id_test.txt", "1 0\n0 1\n");
  const Dataset d = load_dataset(dir.path());
  EXPECT_FALSE(d.instance_of.test_labeled);
  EXPECT_TRUE(d.instance_of.valid_labeled);
  ASSERT_EQ(d.instance_of.test.size(), 2u);
  EXPECT_TRUE(d.instance_of.test[1].label);
}

TEST(LoadDatasetTest, ExpectedStatsChecked) {
  TempDir dir("stats");
  testutil::write_toy_dataset(dir.path());
  DatasetStats stats{3, 2, 1, 1, 1, 1, 1, 0, 1, 0, 0, 0};
  EXPECT_NO_THROW(load_dataset(dir.path(), stats));
  stats.train_relational = 2;
  try {
    load_dataset(dir.path(), stats);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("split-count mismatch"),
              std::string::npos);
  }
}

TEST(LoadDatasetTest, StatsFileParsed) {
  TempDir dir("statsfile");
  write_file(dir / "stats.txt",
             "# comment\ninstances = 3\nconcepts = 2\ntrain_relational = 9\n");
  const auto stats = read_stats_file(dir / "stats.txt");
  EXPECT_EQ(stats.instances, 3u);
  EXPECT_EQ(stats.train_relational, 9u);
  write_file(dir / "bad.txt", "nonsense = 1\n");
  EXPECT_THROW(read_stats_file(dir / "bad.txt"), Error);
}

TEST(KnownStatsTest, PublishedSizes) {
  const auto yago = known_stats("YAGO39K");
  ASSERT_TRUE(yago);
  EXPECT_EQ(yago->instances, 39374u);
  EXPECT_EQ(yago->concepts, 46110u);
  EXPECT_EQ(yago->relations, 39u);
  EXPECT_EQ(yago->train_relational, 354997u);
  EXPECT_EQ(yago->train_instance_of, 442836u);
  EXPECT_EQ(yago->train_sub_class_of, 30181u);
  EXPECT_EQ(known_stats("M-YAGO39K")->valid_instance_of, 8650u);
  EXPECT_EQ(known_stats("DB99K-242")->test_sub_class_of, 13u);
  EXPECT_FALSE(known_stats("nope"));
}

TEST(PreprocessConceptNameTest, WorkedExample) {
  EXPECT_EQ(preprocess_concept_name("<wikicat_Danish_male_film_actors>"),
            "wikicat Danish male film actors");
}

TEST(PreprocessConceptNameTest, PlainNameUnchanged) {
  EXPECT_EQ(preprocess_concept_name("Person"), "Person");
}

TEST(PreprocessConceptNameTest, BracketsAndUnderscores) {
  EXPECT_EQ(preprocess_concept_name("<A_B>"), "A B");
  // Only one matched outer pair is removed.
  EXPECT_EQ(preprocess_concept_name("<<A>>"), "<A>");
  // An unmatched bracket stays.
  EXPECT_EQ(preprocess_concept_name("<A_B"), "<A B");
}

TEST(PreprocessConceptNameTest, EmptyResultIsError) {
  EXPECT_THROW(preprocess_concept_name("<_>"), Error);
  EXPECT_THROW(preprocess_concept_name("  "), Error);
}

TEST(PreprocessConceptNameTest, IdempotentOnRandomNames) {
  std::mt19937 rng(3);
  const std::string alphabet = "ab_ <>";
  int checked = 0;
  for (int trial = 0; trial < 5000; ++trial) {
    std::string raw;
    const int len = 1 + static_cast<int>(rng() % 10);
    for (int k = 0; k < len; ++k) raw += alphabet[rng() % alphabet.size()];
    std::string once;
    try {
      once = preprocess_concept_name(raw);
    } catch (const Error&) {
      continue;
    }
    // Names that still carry a matched outer pair after one pass are nested
    // brackets; the single-pair rule strips those one layer at a time.
    if (once.size() >= 2 && once.front() == '<' && once.back() == '>') continue;
    EXPECT_EQ(preprocess_concept_name(once), once) << raw;
    ++checked;
  }
  EXPECT_GT(checked, 1000);
}

TEST(TruthIndexTest, Membership) {
  TempDir dir("truth");
  testutil::write_toy_dataset(dir.path());
  const Dataset d = load_dataset(dir.path());
  const TruthIndex truth = build_truth_index(d);
  EXPECT_TRUE(truth.contains(RelationalTriple{0, 0, 2}));   // train
  EXPECT_TRUE(truth.contains(RelationalTriple{1, 0, 2}));   // valid positive
  EXPECT_FALSE(truth.contains(RelationalTriple{1, 0, 0}));  // valid negative
  EXPECT_FALSE(truth.contains(RelationalTriple{2, 0, 2}));  // absent
  EXPECT_TRUE(truth.contains(InstanceOfTriple{2, 1}));
  EXPECT_FALSE(truth.contains(SubClassOfTriple{1, 0}));
}

TEST(TruthIndexTest, SizeEqualsDeduplicatedUnion) {
  const auto syn = make_synthetic_ontology({});
  const Dataset& d = syn.dataset;
  const TruthIndex truth(d);
  std::set<std::tuple<Index, Index, Index>> rel;
  for (const auto& t : d.relational.train) rel.emplace(t.head, t.relation, t.tail);
  for (const auto& s : {&d.relational.valid, &d.relational.test})
    for (const auto& lt : *s)
      if (lt.label) rel.emplace(lt.triple.head, lt.triple.relation, lt.triple.tail);
  std::set<std::pair<Index, Index>> ins;
  for (const auto& t : d.instance_of.train) ins.emplace(t.instance, t.concept_id);
  for (const auto& s : {&d.instance_of.valid, &d.instance_of.test})
    for (const auto& lt : *s)
      if (lt.label) ins.emplace(lt.triple.instance, lt.triple.concept_id);
  std::set<std::pair<Index, Index>> sub;
  for (const auto& t : d.sub_class_of.train) sub.emplace(t.sub, t.sup);
  for (const auto& s : {&d.sub_class_of.valid, &d.sub_class_of.test})
    for (const auto& lt : *s)
      if (lt.label) sub.emplace(lt.triple.sub, lt.triple.sup);
  EXPECT_EQ(truth.size(TripleKind::kRelational), rel.size());
  EXPECT_EQ(truth.size(TripleKind::kInstanceOf), ins.size());
  EXPECT_EQ(truth.size(TripleKind::kSubClassOf), sub.size());
}

TEST(DatasetInvariantTest, EveryIdResolves) {
  const auto syn = make_synthetic_ontology({});
  const Dataset& d = syn.dataset;
  const auto check_rel = [&](const RelationalTriple& t) {
    EXPECT_LT(t.head, d.num_instances());
    EXPECT_LT(t.tail, d.num_instances());
    EXPECT_LT(t.relation, d.num_relations());
  };
  for (const auto& t : d.relational.train) check_rel(t);
  for (const auto& t : d.relational.test) check_rel(t.triple);
  for (const auto& t : d.instance_of.train) {
    EXPECT_LT(t.instance, d.num_instances());
    EXPECT_LT(t.concept_id, d.num_concepts());
  }
  for (const auto& t : d.sub_class_of.train) {
    EXPECT_LT(t.sub, d.num_concepts());
    EXPECT_LT(t.sup, d.num_concepts());
    EXPECT_NE(t.sub, t.sup);
  }
}

TEST(SubsampleTest, KeepsFractionInOrderDeterministically) {
  const auto full = make_synthetic_ontology({}).dataset;
  const auto a = subsample_dataset(full, 0.05, 11);
  EXPECT_EQ(a.vocab, full.vocab);
  EXPECT_EQ(a.relational.train.size(), (full.relational.train.size() * 5 + 99) / 100);
  EXPECT_EQ(a.instance_of.test.size(), (full.instance_of.test.size() * 5 + 99) / 100);
  EXPECT_FALSE(a.sub_class_of.train.empty());
  // Rows are a subsequence of the original split.
  std::size_t k = 0;
  for (const auto& row : a.relational.train) {
    while (k < full.relational.train.size() && !(full.relational.train[k] == row)) ++k;
    ASSERT_LT(k, full.relational.train.size());
    ++k;
  }
  EXPECT_EQ(subsample_dataset(full, 0.05, 11).relational, a.relational);
  EXPECT_NE(subsample_dataset(full, 0.05, 12).relational.train, a.relational.train);
  EXPECT_EQ(subsample_dataset(full, 1.0, 11).instance_of, full.instance_of);
  EXPECT_THROW(subsample_dataset(full, 0.0, 1), Error);
  EXPECT_THROW(subsample_dataset(full, 1.5, 1), Error);
}

}  // namespace
}  // namespace ontoembed
