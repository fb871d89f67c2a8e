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

// Negative sampling by corrupting one side of a positive triple.

#pragma once

#include <atomic>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ontoembed/common.hpp"
#include "ontoembed/config.hpp"
#include "ontoembed/ontology.hpp"

namespace ontoembed {

// Draws per side before a corruption is given up.
inline constexpr int kMaxCorruptionRetries = 100;

// Mean tails per head and heads per tail for one relation.
struct SideStats {
  double tph = 1.0;
  double hpt = 1.0;

  // Probability of replacing the head under "bern".
  double head_probability() const { return tph / (tph + hpt); }
};

// InstanceOf (instance -> concept) and SubClassOf (sub -> sup) are treated
// as two extra relations with their own statistics.
struct BernStats {
  std::vector<SideStats> relations;
  SideStats instance_of;
  SideStats sub_class_of;
};

namespace detail {

template <class Pairs>
SideStats side_stats(const Pairs& pairs) {
  std::unordered_map<Index, std::size_t> per_head;
  std::unordered_map<Index, std::size_t> per_tail;
  for (const auto& [h, t] : pairs) {
    ++per_head[h];
    ++per_tail[t];
  }
  if (pairs.empty()) return {};
  const double n = static_cast<double>(pairs.size());
  return SideStats{n / static_cast<double>(per_head.size()),
                   n / static_cast<double>(per_tail.size())};
}

}  // namespace detail

inline BernStats compute_bern_stats(const Dataset& dataset) {
  BernStats stats;
  std::vector<std::vector<std::pair<Index, Index>>> by_relation(
      dataset.num_relations());
  for (const auto& t : dataset.relational.train) {
    by_relation[t.relation].emplace_back(t.head, t.tail);
  }
  for (const auto& pairs : by_relation) {
    stats.relations.push_back(detail::side_stats(pairs));
  }
  std::vector<std::pair<Index, Index>> pairs;
  for (const auto& t : dataset.instance_of.train)
    pairs.emplace_back(t.instance, t.concept_id);
  stats.instance_of = detail::side_stats(pairs);
  pairs.clear();
  for (const auto& t : dataset.sub_class_of.train)
    pairs.emplace_back(t.sub, t.sup);
  stats.sub_class_of = detail::side_stats(pairs);
  return stats;
}

enum class Side { kHead, kTail };

template <class T>
struct Corruption {
  T triple;
  Side side = Side::kHead;
};

struct SamplingCounters {
  std::atomic<std::uint64_t> skipped{0};
  std::atomic<std::uint64_t> retries{0};
};

class Corrupter {
 public:
  Corrupter(SamplingMode mode, const BernStats& stats, const TruthIndex& truth,
            std::size_t num_instances, std::size_t num_concepts,
            SamplingCounters* counters = nullptr)
      : mode_(mode), stats_(&stats), truth_(&truth),
        num_instances_(static_cast<Index>(num_instances)),
        num_concepts_(static_cast<Index>(num_concepts)), counters_(counters) {}

  // Returns a corrupted copy absent from the truth index, or nullopt once the
  // retry budget of both sides is spent (the skip counter is incremented).
  std::optional<Corruption<RelationalTriple>> operator()(
      const RelationalTriple& t, Rng& rng) const {
    const double p_head = head_probability(stats_->relations.at(t.relation));
    return draw(t, rng, p_head, [&](RelationalTriple c, Side side) {
      (side == Side::kHead ? c.head : c.tail) =
          uniform_index(rng, num_instances_);
      return c;
    });
  }

  std::optional<Corruption<InstanceOfTriple>> operator()(
      const InstanceOfTriple& t, Rng& rng) const {
    const double p_head = head_probability(stats_->instance_of);
    return draw(t, rng, p_head, [&](InstanceOfTriple c, Side side) {
      if (side == Side::kHead) {
        c.instance = uniform_index(rng, num_instances_);
      } else {
        c.concept_id = uniform_index(rng, num_concepts_);
      }
      return c;
    });
  }

  std::optional<Corruption<SubClassOfTriple>> operator()(
      const SubClassOfTriple& t, Rng& rng) const {
    const double p_head = head_probability(stats_->sub_class_of);
    return draw(t, rng, p_head, [&](SubClassOfTriple c, Side side) {
      (side == Side::kHead ? c.sub : c.sup) = uniform_index(rng, num_concepts_);
      return c;
    });
  }

 private:
  double head_probability(const SideStats& s) const {
    return mode_ == SamplingMode::kUniform ? 0.5 : s.head_probability();
  }

  static bool acceptable(const SubClassOfTriple& t) { return t.sub != t.sup; }
  template <class T>
  static bool acceptable(const T&) {
    return true;
  }

  template <class T, class Replace>
  std::optional<Corruption<T>> draw(const T& t, Rng& rng, double p_head,
                                    Replace replace) const {
    // The side is drawn once so rejections do not bias the head/tail mix;
    // the other side is only tried once this one's budget is spent.
    const Side first = uniform_unit(rng) < p_head ? Side::kHead : Side::kTail;
    for (const Side side : {first, first == Side::kHead ? Side::kTail : Side::kHead}) {
      for (int attempt = 0; attempt < kMaxCorruptionRetries; ++attempt) {
        const T candidate = replace(t, side);
        if (acceptable(candidate) && !truth_->contains(candidate)) {
          return Corruption<T>{candidate, side};
        }
        if (counters_) counters_->retries.fetch_add(1, std::memory_order_relaxed);
      }
    }
    if (counters_) counters_->skipped.fetch_add(1, std::memory_order_relaxed);
    return std::nullopt;
  }

  SamplingMode mode_;
  const BernStats* stats_;
  const TruthIndex* truth_;
  Index num_instances_;
  Index num_concepts_;
  SamplingCounters* counters_;
};

namespace detail {

template <class T>
void add_negatives(std::vector<Labeled<T>>& rows, bool& labeled,
                   const Corrupter& corrupt, Rng& rng) {
  if (labeled) return;
  const std::size_t n = rows.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (auto neg = corrupt(rows[k].triple, rng)) {
      rows.push_back(Labeled<T>{neg->triple, false});
    }
  }
  labeled = true;
}

}  // namespace detail

// Gives every positives-only valid/test split one uniformly corrupted
// negative per positive. Labeled splits are left untouched.
inline void add_missing_negatives(Dataset& dataset, std::uint64_t seed) {
  const TruthIndex truth(dataset);
  const BernStats stats = compute_bern_stats(dataset);
  const Corrupter corrupt(SamplingMode::kUniform, stats, truth,
                          dataset.num_instances(), dataset.num_concepts());
  auto rng = make_rng(seed, streams::kEvalNegatives);
  detail::add_negatives(dataset.relational.valid, dataset.relational.valid_labeled,
                        corrupt, rng);
  detail::add_negatives(dataset.relational.test, dataset.relational.test_labeled,
                        corrupt, rng);
  detail::add_negatives(dataset.instance_of.valid,
                        dataset.instance_of.valid_labeled, corrupt, rng);
  detail::add_negatives(dataset.instance_of.test,
                        dataset.instance_of.test_labeled, corrupt, rng);
  detail::add_negatives(dataset.sub_class_of.valid,
                        dataset.sub_class_of.valid_labeled, corrupt, rng);
  detail::add_negatives(dataset.sub_class_of.test,
                        dataset.sub_class_of.test_labeled, corrupt, rng);
}

}  // namespace ontoembed
