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

// Extensional space: instances are points, relations are translations and
// every concept is an axis-aligned ellipsoid
//   { x : sum_j ((x_j - center_j) / axes_j)^2 <= radius^2 }.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "ontoembed/common.hpp"

namespace ontoembed {

// Floor applied to semi-axes and radii after every update.
inline constexpr double kMinExtent = 1e-3;

enum class RelationNorm { kL2Squared, kL1 };

struct EllipsoidConcept {
  Vector center;
  Vector axes;
  double radius = 1.0;
};

struct ExtensionalParams {
  Matrix instances;  // |I| x d
  Matrix relations;  // |R_l| x d
  Matrix centers;    // |C| x d
  Matrix axes;       // |C| x d
  Vector radii;      // |C|

  Eigen::Index dim() const { return instances.cols(); }

  EllipsoidConcept concept_region(Index c) const {
    return EllipsoidConcept{centers.row(c).transpose(), axes.row(c).transpose(),
                            radii(c)};
  }
  void set_concept(Index c, const EllipsoidConcept& region) {
    centers.row(c) = region.center.transpose();
    axes.row(c) = region.axes.transpose();
    radii(c) = region.radius;
  }
};

// Squared normalised distance sum_j ((x_j - c_j) / b_j)^2.
template <class X, class C, class B>
double ellipsoid_distance_sq(const X& x, const C& center, const B& axes) {
  return ((x - center).array() / axes.array()).square().sum();
}

template <class X>
double score_instanceof_ext(const X& point, const ExtensionalParams& p,
                            Index c) {
  const double r = p.radii(c);
  const double inside = ellipsoid_distance_sq(
      point, p.centers.row(c).transpose(), p.axes.row(c).transpose());
  return positive_part(inside - r * r);
}

inline double score_instanceof_ext(Index i, Index c,
                                   const ExtensionalParams& p) {
  return score_instanceof_ext(p.instances.row(i).transpose(), p, c);
}

inline double score_subclassof_ext(Index ci, Index cj,
                                   const ExtensionalParams& p) {
  const auto u = (p.centers.row(ci).array() / p.axes.row(ci).array() -
                  p.centers.row(cj).array() / p.axes.row(cj).array());
  const double ri = p.radii(ci);
  const double rj = p.radii(cj);
  return positive_part(u.square().sum() + ri * ri - rj * rj);
}

inline double score_relational(Index h, Index r, Index t,
                               const ExtensionalParams& p,
                               RelationNorm norm = RelationNorm::kL2Squared) {
  const auto residual =
      (p.instances.row(h) + p.relations.row(r) - p.instances.row(t)).array();
  if (norm == RelationNorm::kL1) return residual.abs().sum();
  return residual.square().sum();
}

template <class X>
bool contains(Index c, const X& point, const ExtensionalParams& p) {
  const double r = p.radii(c);
  return ellipsoid_distance_sq(point, p.centers.row(c).transpose(),
                               p.axes.row(c).transpose()) <= r * r;
}

// Enforces the parameter constraints on one row of each table.
inline void project_instance(ExtensionalParams& p, Index i) {
  const double norm = p.instances.row(i).norm();
  if (norm > 1.0) p.instances.row(i) /= norm;
}

inline void project_concept(ExtensionalParams& p, Index c) {
  p.axes.row(c) = p.axes.row(c).cwiseMax(kMinExtent);
  p.radii(c) = std::max(p.radii(c), kMinExtent);
}

inline void project_all(ExtensionalParams& p) {
  for (Eigen::Index i = 0; i < p.instances.rows(); ++i)
    project_instance(p, static_cast<Index>(i));
  for (Eigen::Index c = 0; c < p.centers.rows(); ++c)
    project_concept(p, static_cast<Index>(c));
}

// Uniform in [-6/sqrt(d), 6/sqrt(d)].
inline void fill_uniform_embedding(Matrix& m, Rng& rng) {
  const double bound = 6.0 / std::sqrt(static_cast<double>(m.cols()));
  for (Eigen::Index k = 0; k < m.size(); ++k) {
    m.data()[k] = (2.0 * uniform_unit(rng) - 1.0) * bound;
  }
}

inline ExtensionalParams init_extensional(std::size_t num_instances,
                                          std::size_t num_relations,
                                          std::size_t num_concepts,
                                          std::size_t dim,
                                          std::uint64_t seed) {
  if (dim == 0 || num_instances == 0 || num_relations == 0 ||
      num_concepts == 0) {
    throw usage_error("init_extensional: sizes and dimension must be >= 1");
  }
  const auto d = static_cast<Eigen::Index>(dim);
  ExtensionalParams p;
  p.instances.resize(static_cast<Eigen::Index>(num_instances), d);
  p.relations.resize(static_cast<Eigen::Index>(num_relations), d);
  p.centers.resize(static_cast<Eigen::Index>(num_concepts), d);
  p.axes.resize(static_cast<Eigen::Index>(num_concepts), d);
  p.radii = Vector::Ones(static_cast<Eigen::Index>(num_concepts));

  auto rng = make_rng(seed, streams::kExtensionalInit);
  fill_uniform_embedding(p.instances, rng);
  fill_uniform_embedding(p.relations, rng);
  fill_uniform_embedding(p.centers, rng);
  for (Eigen::Index k = 0; k < p.axes.size(); ++k) {
    p.axes.data()[k] = 0.5 + 0.5 * uniform_unit(rng);
  }
  project_all(p);
  return p;
}

inline bool all_finite(const ExtensionalParams& p) {
  return p.instances.allFinite() && p.relations.allFinite() &&
         p.centers.allFinite() && p.axes.allFinite() && p.radii.allFinite();
}

}  // namespace ontoembed
