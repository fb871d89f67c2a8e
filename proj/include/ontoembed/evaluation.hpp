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

// Triple classification with per-relation thresholds, link prediction with
// raw and filtered ranks, and probes for isA transitivity.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ontoembed/model.hpp"
#include "ontoembed/ontology.hpp"
#include "ontoembed/sampling.hpp"

namespace ontoembed {

struct ThresholdFit {
  double threshold = std::numeric_limits<double>::infinity();
  double accuracy = 0.0;
  bool single_class = false;
};

// Accuracy-maximising cut for the rule "score < threshold => positive".
// Candidates sit below all scores, at midpoints between adjacent distinct
// scores, and above all scores; ties go to the smallest candidate.
inline ThresholdFit fit_threshold(std::span<const double> scores,
                                  const std::vector<bool>& labels) {
  const std::size_t n = scores.size();
  ThresholdFit fit;
  const auto positives =
      static_cast<std::size_t>(std::count(labels.begin(), labels.end(), true));
  if (n == 0 || positives == 0 || positives == n) {
    fit.single_class = true;
    fit.accuracy = n == 0 ? 0.0 : static_cast<double>(positives) / n;
    return fit;
  }
  std::vector<std::size_t> order(n);
  for (std::size_t k = 0; k < n; ++k) order[k] = k;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Threshold at the smallest score: nothing is predicted positive.
  std::size_t correct = n - positives;
  std::size_t best_correct = correct;
  double best_threshold = scores[order.front()];
  std::size_t k = 0;
  while (k < n) {
    // Move the whole group of equal scores below the threshold.
    const double value = scores[order[k]];
    while (k < n && scores[order[k]] == value) {
      correct += labels[order[k]] ? 1 : 0;
      correct -= labels[order[k]] ? 0 : 1;
      ++k;
    }
    double candidate;
    if (k < n) {
      const double next = scores[order[k]];
      candidate = 0.5 * (value + next);
      if (!(candidate > value)) candidate = next;
    } else {
      candidate = std::nextafter(value, std::numeric_limits<double>::infinity());
    }
    if (correct > best_correct) {
      best_correct = correct;
      best_threshold = candidate;
    }
  }
  fit.threshold = best_threshold;
  fit.accuracy = static_cast<double>(best_correct) / static_cast<double>(n);
  return fit;
}

struct ThresholdTable {
  std::vector<std::optional<double>> relations;
  std::optional<double> instance_of;
  std::optional<double> sub_class_of;
  std::vector<std::string> warnings;
};

struct ClassificationReport {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  std::size_t total() const { return tp + fp + tn + fn; }
};

inline ClassificationReport report_from_counts(std::size_t tp, std::size_t fp,
                                               std::size_t tn, std::size_t fn) {
  ClassificationReport r{tp, fp, tn, fn};
  const double n = static_cast<double>(r.total());
  r.accuracy = n > 0 ? static_cast<double>(tp + tn) / n : 0.0;
  r.precision = tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
  r.recall = tp + fn > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
  r.f1 = r.precision + r.recall > 0
             ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
             : 0.0;
  return r;
}

namespace detail {

template <class T>
void split_scores(const ModelState& model, const std::vector<Labeled<T>>& rows,
                  std::vector<double>& scores, std::vector<bool>& labels) {
  scores.clear();
  labels.clear();
  for (const auto& row : rows) {
    scores.push_back(score(model, row.triple));
    labels.push_back(row.label);
  }
}

inline std::optional<double> fit_or_warn(std::span<const double> scores,
                                         const std::vector<bool>& labels,
                                         const std::string& what,
                                         std::vector<std::string>& warnings) {
  if (scores.empty()) return std::nullopt;
  const auto fit = fit_threshold(scores, labels);
  if (fit.single_class) {
    warnings.push_back(what +
                       ": validation data has a single class, threshold +inf");
  }
  return fit.threshold;
}

}  // namespace detail

// Tunes one threshold per instance relation, one for InstanceOf and one for
// SubClassOf, on the labeled validation triples.
inline ThresholdTable tune_thresholds(const ModelState& model,
                                      const Dataset& dataset) {
  ThresholdTable table;
  table.relations.resize(dataset.num_relations());
  std::vector<std::vector<double>> rel_scores(dataset.num_relations());
  std::vector<std::vector<bool>> rel_labels(dataset.num_relations());
  for (const auto& row : dataset.relational.valid) {
    rel_scores[row.triple.relation].push_back(score(model, row.triple));
    rel_labels[row.triple.relation].push_back(row.label);
  }
  for (Index r = 0; r < dataset.num_relations(); ++r) {
    table.relations[r] = detail::fit_or_warn(
        rel_scores[r], rel_labels[r],
        "relation '" + dataset.vocab.relations.name(r) + "'", table.warnings);
  }
  std::vector<double> scores;
  std::vector<bool> labels;
  detail::split_scores(model, dataset.instance_of.valid, scores, labels);
  table.instance_of =
      detail::fit_or_warn(scores, labels, "instanceOf", table.warnings);
  detail::split_scores(model, dataset.sub_class_of.valid, scores, labels);
  table.sub_class_of =
      detail::fit_or_warn(scores, labels, "subClassOf", table.warnings);
  return table;
}

// Strict rule: score < threshold => predicted positive.
inline ClassificationReport classify_scores(std::span<const double> scores,
                                            const std::vector<bool>& labels,
                                            std::span<const double> thresholds) {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  for (std::size_t k = 0; k < scores.size(); ++k) {
    const bool predicted = scores[k] < thresholds[k];
    if (predicted && labels[k]) ++tp;
    if (predicted && !labels[k]) ++fp;
    if (!predicted && !labels[k]) ++tn;
    if (!predicted && labels[k]) ++fn;
  }
  return report_from_counts(tp, fp, tn, fn);
}

inline double threshold_for(const ThresholdTable& table,
                            const RelationalTriple& t,
                            const Vocabulary& vocab) {
  if (t.relation >= table.relations.size() || !table.relations[t.relation]) {
    throw data_error("no threshold for relation '" +
                     vocab.relations.name(t.relation) + "'");
  }
  return *table.relations[t.relation];
}
inline double threshold_for(const ThresholdTable& table,
                            const InstanceOfTriple&, const Vocabulary&) {
  if (!table.instance_of) throw data_error("no threshold for instanceOf");
  return *table.instance_of;
}
inline double threshold_for(const ThresholdTable& table,
                            const SubClassOfTriple&, const Vocabulary&) {
  if (!table.sub_class_of) throw data_error("no threshold for subClassOf");
  return *table.sub_class_of;
}

template <class T>
ClassificationReport classify(const ModelState& model,
                              const ThresholdTable& thresholds,
                              const std::vector<Labeled<T>>& rows,
                              const Vocabulary& vocab) {
  std::vector<double> scores;
  std::vector<bool> labels;
  std::vector<double> cuts;
  for (const auto& row : rows) {
    cuts.push_back(threshold_for(thresholds, row.triple, vocab));
    scores.push_back(score(model, row.triple));
    labels.push_back(row.label);
  }
  return classify_scores(scores, labels, cuts);
}

enum class RankSetting { kRaw, kFilter };

struct QueryRank {
  std::size_t query = 0;
  Side direction = Side::kHead;
  std::size_t raw_rank = 0;
  std::size_t filter_rank = 0;
};

struct RankingReport {
  double mrr_raw = 0.0;
  double mrr_filter = 0.0;
  double hits1 = 0.0;
  double hits3 = 0.0;
  double hits10 = 0.0;
  RankSetting hits_setting = RankSetting::kFilter;
  std::size_t queries = 0;
  std::vector<QueryRank> ranks;
};

// Aggregates per-query ranks. Hits@N use the filtered ranks unless the raw
// setting is requested.
inline RankingReport summarize_ranks(std::vector<QueryRank> ranks,
                                     RankSetting setting) {
  RankingReport report;
  report.hits_setting = setting;
  report.queries = ranks.size();
  if (ranks.empty()) return report;
  double raw = 0.0, filt = 0.0;
  std::size_t h1 = 0, h3 = 0, h10 = 0;
  for (const auto& q : ranks) {
    raw += 1.0 / static_cast<double>(q.raw_rank);
    filt += 1.0 / static_cast<double>(q.filter_rank);
    const std::size_t rank =
        setting == RankSetting::kFilter ? q.filter_rank : q.raw_rank;
    h1 += rank <= 1;
    h3 += rank <= 3;
    h10 += rank <= 10;
  }
  const double n = static_cast<double>(ranks.size());
  report.mrr_raw = raw / n;
  report.mrr_filter = filt / n;
  report.hits1 = static_cast<double>(h1) / n;
  report.hits3 = static_cast<double>(h3) / n;
  report.hits10 = static_cast<double>(h10) / n;
  report.ranks = std::move(ranks);
  return report;
}

namespace detail {

// Rank of the true entity among all replacements on one side. Equal scores
// count against the true entity.
inline std::pair<std::size_t, std::size_t> rank_one_side(
    const ModelState& model, const RelationalTriple& t, Side side,
    const TruthIndex& truth) {
  const auto num_instances = static_cast<Index>(model.ext.instances.rows());
  const Index truth_entity = side == Side::kHead ? t.head : t.tail;
  const double true_score = score(model, t);
  std::size_t raw = 1, filt = 1;
  RelationalTriple candidate = t;
  for (Index e = 0; e < num_instances; ++e) {
    if (e == truth_entity) continue;
    (side == Side::kHead ? candidate.head : candidate.tail) = e;
    const double s = score(model, candidate);
    if (s <= true_score) {
      ++raw;
      if (!truth.contains(candidate)) ++filt;
    }
  }
  return {raw, filt};
}

}  // namespace detail

// Ranks every test triple's head and tail against all instances.
inline RankingReport link_predict(const ModelState& model,
                                  const std::vector<RelationalTriple>& tests,
                                  const TruthIndex& truth,
                                  RankSetting setting = RankSetting::kFilter,
                                  std::size_t threads = 1) {
  std::vector<QueryRank> ranks(2 * tests.size());
  const auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t q = begin; q < end; ++q) {
      for (const Side side : {Side::kHead, Side::kTail}) {
        const auto [raw, filt] =
            detail::rank_one_side(model, tests[q], side, truth);
        ranks[2 * q + (side == Side::kTail)] = QueryRank{q, side, raw, filt};
      }
    }
  };
  threads = std::max<std::size_t>(1, std::min(threads, tests.size()));
  if (threads == 1) {
    work(0, tests.size());
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < threads; ++w) {
      pool.emplace_back(work, tests.size() * w / threads,
                        tests.size() * (w + 1) / threads);
    }
  }
  return summarize_ranks(std::move(ranks), setting);
}

inline std::vector<RelationalTriple> positive_triples(
    const std::vector<Labeled<RelationalTriple>>& rows) {
  return detail::positives(rows);
}

struct TransitivityReport {
  // Fraction of derived triples classified positive; nullopt when a rule
  // derives nothing.
  std::optional<double> instance_of;
  std::optional<double> sub_class_of;
  std::size_t instance_of_derived = 0;
  std::size_t sub_class_of_derived = 0;
};

// Strict ancestors of every concept through training SubClassOf edges.
inline std::vector<std::vector<Index>> concept_ancestors(const Dataset& d) {
  std::vector<std::vector<Index>> parents(d.num_concepts());
  for (const auto& t : d.sub_class_of.train) parents[t.sub].push_back(t.sup);
  std::vector<std::vector<Index>> ancestors(d.num_concepts());
  std::vector<char> seen(d.num_concepts());
  for (Index c = 0; c < d.num_concepts(); ++c) {
    std::fill(seen.begin(), seen.end(), 0);
    std::vector<Index> stack = parents[c];
    while (!stack.empty()) {
      const Index a = stack.back();
      stack.pop_back();
      if (seen[a]) continue;
      seen[a] = 1;
      if (a != c) ancestors[c].push_back(a);
      for (const Index p : parents[a]) stack.push_back(p);
    }
    std::sort(ancestors[c].begin(), ancestors[c].end());
  }
  return ancestors;
}

struct DerivedTriples {
  std::vector<InstanceOfTriple> instance_of;
  std::vector<SubClassOfTriple> sub_class_of;
};

// Triples implied by the two isA rules over the training data that the
// training data does not already state.
inline DerivedTriples derive_transitive_triples(const Dataset& d) {
  DerivedTriples out;
  const auto ancestors = concept_ancestors(d);
  const TripleKey key{d.num_instances(), d.num_concepts(), d.num_relations()};
  std::unordered_set<std::uint64_t> stated;
  for (const auto& t : d.instance_of.train) stated.insert(key(t));
  std::unordered_set<std::uint64_t> emitted;
  for (const auto& t : d.instance_of.train) {
    for (const Index a : ancestors[t.concept_id]) {
      const InstanceOfTriple derived{t.instance, a};
      if (!stated.contains(key(derived)) && emitted.insert(key(derived)).second) {
        out.instance_of.push_back(derived);
      }
    }
  }
  stated.clear();
  for (const auto& t : d.sub_class_of.train) stated.insert(key(t));
  for (Index c = 0; c < d.num_concepts(); ++c) {
    for (const Index a : ancestors[c]) {
      const SubClassOfTriple derived{c, a};
      if (!stated.contains(key(derived))) out.sub_class_of.push_back(derived);
    }
  }
  return out;
}

inline TransitivityReport transitivity_probe(const ModelState& model,
                                             const ThresholdTable& thresholds,
                                             const Dataset& dataset) {
  TransitivityReport report;
  const auto derived = derive_transitive_triples(dataset);
  report.instance_of_derived = derived.instance_of.size();
  report.sub_class_of_derived = derived.sub_class_of.size();
  const auto fraction = [&](const auto& triples) -> std::optional<double> {
    if (triples.empty()) return std::nullopt;
    std::size_t positive = 0;
    for (const auto& t : triples) {
      positive += score(model, t) < threshold_for(thresholds, t, dataset.vocab);
    }
    return static_cast<double>(positive) / static_cast<double>(triples.size());
  };
  report.instance_of = fraction(derived.instance_of);
  report.sub_class_of = fraction(derived.sub_class_of);
  return report;
}

}  // namespace ontoembed
