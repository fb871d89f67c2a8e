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

// Generator for small three-level ontologies (roots > mids > leaves) that
// come with a hand-built extensional configuration scoring zero on every
// positive InstanceOf and SubClassOf triple, and in which every relation is
// a translation between leaf centres. Used by tests, the acceptance suite and
// smoke runs of the CLI.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <unordered_set>
#include <vector>

#include "ontoembed/common.hpp"
#include "ontoembed/extensional.hpp"
#include "ontoembed/ontology.hpp"

namespace ontoembed {

struct SyntheticSpec {
  std::size_t roots = 2;
  std::size_t mids_per_root = 2;
  std::size_t leaves = 14;  // spread evenly over the mids
  std::size_t instances = 500;
  std::size_t relations = 5;  // at most mids * (mids - 1)
  std::size_t triples_per_relation = 200;
  // InstanceOf (instance, mid|root) positives held out for valid and test.
  std::size_t held_out_instance_of = 100;
  // SubClassOf negatives per held-out positive.
  std::size_t sub_class_of_negatives = 2;
  std::size_t ground_truth_dim = 20;
  std::uint64_t seed = 7;

  std::size_t num_mids() const { return roots * mids_per_root; }
  std::size_t num_concepts() const { return roots + num_mids() + leaves; }
  // Leaves per mid, rounded up: leaf l sits in mid l % mids at slot l / mids.
  std::size_t slots() const { return (leaves + num_mids() - 1) / num_mids(); }
};

struct SyntheticOntology {
  Dataset dataset;
  // Parameters under which positives score zero (instances, concepts; the
  // relation rows are zero).
  ExtensionalParams ground_truth;
  std::vector<Index> leaf_of;    // per instance
  std::vector<Index> parent_of;  // per concept; roots map to themselves
};

namespace detail {

inline std::string numbered(std::string_view prefix, std::size_t k) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*s_%03zu", static_cast<int>(prefix.size()),
                prefix.data(), k);
  return buf;
}

template <class T>
void shuffle_in_place(std::vector<T>& v, Rng& rng) {
  for (std::size_t k = v.size(); k > 1; --k) {
    std::swap(v[k - 1], v[uniform_index(rng, static_cast<Index>(k))]);
  }
}

}  // namespace detail

inline SyntheticOntology make_synthetic_ontology(const SyntheticSpec& spec) {
  const std::size_t n_mid = spec.num_mids();
  const std::size_t n_concepts = spec.num_concepts();
  if (spec.roots == 0 || spec.mids_per_root == 0 || spec.leaves < n_mid ||
      spec.instances == 0 || spec.relations == 0 ||
      spec.relations > n_mid * (n_mid - 1)) {
    throw usage_error("synthetic ontology: degenerate shape");
  }
  if (spec.ground_truth_dim < 2 + spec.slots()) {
    throw usage_error("synthetic ontology: ground_truth_dim too small");
  }
  auto rng = make_rng(spec.seed, 0);
  SyntheticOntology out;
  Dataset& d = out.dataset;

  // Concept ids: roots, then mids, then leaves.
  const auto mid_id = [&](std::size_t m) {
    return static_cast<Index>(spec.roots + m);
  };
  const auto leaf_id = [&](std::size_t l) {
    return static_cast<Index>(spec.roots + n_mid + l);
  };
  out.parent_of.resize(n_concepts);
  for (std::size_t r = 0; r < spec.roots; ++r) {
    d.vocab.concepts.add(detail::numbered("root", r));
    out.parent_of[r] = static_cast<Index>(r);
  }
  for (std::size_t m = 0; m < n_mid; ++m) {
    d.vocab.concepts.add(detail::numbered("mid", m));
    out.parent_of[mid_id(m)] = static_cast<Index>(m / spec.mids_per_root);
  }
  for (std::size_t l = 0; l < spec.leaves; ++l) {
    d.vocab.concepts.add(detail::numbered("leaf", l));
    out.parent_of[leaf_id(l)] = mid_id(l % n_mid);
  }
  for (std::size_t i = 0; i < spec.instances; ++i) {
    d.vocab.instances.add(detail::numbered("instance", i));
  }
  for (std::size_t r = 0; r < spec.relations; ++r) {
    d.vocab.relations.add(detail::numbered("relation", r));
  }
  for (Index c = 0; c < n_concepts; ++c) {
    d.concept_texts.push_back(ConceptText{
        c, "<wikicat_" + d.vocab.concepts.name(c) + ">",
        c < spec.roots ? "A top-level category." : ""});
  }

  // Ground truth: unit axes; roots at +-0.5 e0, mids offset along e1, each
  // leaf offset along the axis of its slot, e_{2+slot}; instances scattered
  // inside. Leaves sharing a slot differ by their mids' offset only.
  const auto dim = static_cast<Eigen::Index>(spec.ground_truth_dim);
  auto& gt = out.ground_truth;
  gt.centers = Matrix::Zero(static_cast<Eigen::Index>(n_concepts), dim);
  gt.axes = Matrix::Ones(static_cast<Eigen::Index>(n_concepts), dim);
  gt.radii = Vector::Zero(static_cast<Eigen::Index>(n_concepts));
  gt.relations = Matrix::Zero(static_cast<Eigen::Index>(spec.relations), dim);
  gt.instances = Matrix::Zero(static_cast<Eigen::Index>(spec.instances), dim);
  for (std::size_t r = 0; r < spec.roots; ++r) {
    const double offset = spec.roots == 1 ? 0.0 : -0.5 + 1.0 * r / (spec.roots - 1);
    gt.centers(static_cast<Eigen::Index>(r), 0) = offset;
    gt.radii(static_cast<Eigen::Index>(r)) = 0.45;
  }
  for (std::size_t m = 0; m < n_mid; ++m) {
    const Index c = mid_id(m);
    const std::size_t k = m % spec.mids_per_root;
    const double offset = spec.mids_per_root == 1
                              ? 0.0
                              : -0.2 + 0.4 * k / (spec.mids_per_root - 1);
    gt.centers.row(c) = gt.centers.row(out.parent_of[c]);
    gt.centers(c, 1) += offset;
    gt.radii(c) = 0.2;
  }
  for (std::size_t l = 0; l < spec.leaves; ++l) {
    const Index c = leaf_id(l);
    gt.centers.row(c) = gt.centers.row(out.parent_of[c]);
    gt.centers(c, static_cast<Eigen::Index>(2 + l / n_mid)) += 0.1;
    gt.radii(c) = 0.08;
  }
  std::normal_distribution<double> gauss;
  out.leaf_of.resize(spec.instances);
  std::vector<std::vector<Index>> members(spec.leaves);
  for (std::size_t i = 0; i < spec.instances; ++i) {
    const std::size_t l = i % spec.leaves;
    out.leaf_of[i] = leaf_id(l);
    members[l].push_back(static_cast<Index>(i));
    Vector direction(dim);
    for (Eigen::Index k = 0; k < dim; ++k) direction(k) = gauss(rng);
    direction.normalize();
    gt.instances.row(static_cast<Eigen::Index>(i)) =
        gt.centers.row(out.leaf_of[i]) +
        0.05 * uniform_unit(rng) * direction.transpose();
  }

  const auto ancestors_of = [&](Index c) {
    std::vector<Index> chain;
    while (out.parent_of[c] != c) {
      c = out.parent_of[c];
      chain.push_back(c);
    }
    return chain;
  };

  // InstanceOf: every instance belongs to its leaf, mid and root. Leaf
  // assertions always stay in train; a sample of the others is held out.
  std::vector<InstanceOfTriple> upper;
  for (std::size_t i = 0; i < spec.instances; ++i) {
    const auto inst = static_cast<Index>(i);
    d.instance_of.train.push_back({inst, out.leaf_of[i]});
    for (const Index a : ancestors_of(out.leaf_of[i])) upper.push_back({inst, a});
  }
  detail::shuffle_in_place(upper, rng);
  const std::size_t held = std::min(spec.held_out_instance_of, upper.size());
  const auto is_type = [&](Index inst, Index c) {
    if (out.leaf_of[inst] == c) return true;
    const auto chain = ancestors_of(out.leaf_of[inst]);
    return std::find(chain.begin(), chain.end(), c) != chain.end();
  };
  for (std::size_t k = 0; k < upper.size(); ++k) {
    if (k >= held) {
      d.instance_of.train.push_back(upper[k]);
      continue;
    }
    auto& split = k < held / 2 ? d.instance_of.valid : d.instance_of.test;
    split.push_back({upper[k], true});
    Index c = 0;
    do {
      c = uniform_index(rng, static_cast<Index>(n_concepts));
    } while (is_type(upper[k].instance, c));
    split.push_back({{upper[k].instance, c}, false});
  }

  // SubClassOf: direct edges train; transitive leaf -> root pairs split
  // between valid and test with corrupted negatives.
  std::vector<SubClassOfTriple> transitive;
  for (Index c = 0; c < n_concepts; ++c) {
    const auto chain = ancestors_of(c);
    for (std::size_t k = 0; k < chain.size(); ++k) {
      if (k == 0) {
        d.sub_class_of.train.push_back({c, chain[k]});
      } else {
        transitive.push_back({c, chain[k]});
      }
    }
  }
  detail::shuffle_in_place(transitive, rng);
  const auto subsumes = [&](Index sub, Index sup) {
    const auto chain = ancestors_of(sub);
    return std::find(chain.begin(), chain.end(), sup) != chain.end();
  };
  for (std::size_t k = 0; k < transitive.size(); ++k) {
    auto& split = k < transitive.size() / 2 ? d.sub_class_of.valid
                                            : d.sub_class_of.test;
    split.push_back({transitive[k], true});
    for (std::size_t n = 0; n < spec.sub_class_of_negatives; ++n) {
      SubClassOfTriple neg = transitive[k];
      do {
        neg = transitive[k];
        auto& slot = uniform_unit(rng) < 0.5 ? neg.sub : neg.sup;
        slot = uniform_index(rng, static_cast<Index>(n_concepts));
      } while (neg.sub == neg.sup || subsumes(neg.sub, neg.sup));
      split.push_back({neg, false});
    }
  }

  // Relational: relation r moves from mid a to mid b, linking an instance of
  // leaf (a, slot) to an instance of leaf (b, slot). The leaf centres then
  // differ by the constant offset between the two mids.
  const TripleKey key{spec.instances, n_concepts, spec.relations};
  std::unordered_set<std::uint64_t> seen;
  std::vector<RelationalTriple> rel;
  for (std::size_t r = 0; r < spec.relations; ++r) {
    const std::size_t a = r % n_mid;
    const std::size_t b = (a + 1 + r / n_mid) % n_mid;
    std::size_t made = 0;
    for (std::size_t attempt = 0;
         made < spec.triples_per_relation && attempt < 100 * spec.triples_per_relation;
         ++attempt) {
      const Index h = uniform_index(rng, static_cast<Index>(spec.instances));
      const std::size_t head_leaf = h % spec.leaves;
      const std::size_t l = head_leaf - a + b;  // same slot, mid b
      if (head_leaf % n_mid != a || l >= spec.leaves) continue;
      const auto& pool = members[l];
      if (pool.empty()) continue;
      const Index t = pool[uniform_index(rng, static_cast<Index>(pool.size()))];
      const RelationalTriple triple{h, static_cast<Index>(r), t};
      if (h == t || !seen.insert(key(triple)).second) continue;
      rel.push_back(triple);
      ++made;
    }
  }
  detail::shuffle_in_place(rel, rng);
  const std::size_t n_eval = rel.size() / 10;
  for (std::size_t k = 0; k < rel.size(); ++k) {
    if (k >= 2 * n_eval) {
      d.relational.train.push_back(rel[k]);
      continue;
    }
    auto& split = k < n_eval ? d.relational.valid : d.relational.test;
    split.push_back({rel[k], true});
    RelationalTriple neg = rel[k];
    do {
      neg.tail = uniform_index(rng, static_cast<Index>(spec.instances));
    } while (seen.contains(key(neg)));
    split.push_back({neg, false});
  }
  return out;
}

}  // namespace ontoembed
