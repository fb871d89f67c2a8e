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

// The joint model: both parameter spaces plus the combined triple scores
// and their analytic gradients.

#pragma once

#include <cmath>
#include <string>
#include <unordered_map>

#include "ontoembed/common.hpp"
#include "ontoembed/config.hpp"
#include "ontoembed/extensional.hpp"
#include "ontoembed/intensional.hpp"
#include "ontoembed/ontology.hpp"

namespace ontoembed {

struct ModelState {
  ExtensionalParams ext;
  IntensionalParams in;
  TrainingConfig config;
  std::uint64_t epoch = 0;
};

inline ModelState init_model(const Dataset& dataset,
                             const TrainingConfig& config) {
  validate(config);
  ModelState state;
  state.config = config;
  state.ext = init_extensional(dataset.num_instances(), dataset.num_relations(),
                               dataset.num_concepts(), config.dim, config.seed);
  state.in = init_intensional(dataset.num_concepts(), config.dim, config.bridge,
                              config.seed);
  if (config.init == InitMode::kPretrained) {
    auto load = load_concept_vectors(config.concept_vectors,
                                     dataset.num_concepts(), config.dim,
                                     config.seed);
    state.in.concepts = std::move(load.vectors);
    state.in.init = InitMode::kPretrained;
  }
  return state;
}

inline double score(const ModelState& m, const RelationalTriple& t) {
  return score_relational(t.head, t.relation, t.tail, m.ext, m.config.norm);
}

inline double score(const ModelState& m, const InstanceOfTriple& t,
                    ZeroVectorCounter* zero_events = nullptr) {
  const double ext = score_instanceof_ext(t.instance, t.concept_id, m.ext);
  if (m.config.alpha == 0.0) return ext;
  return combine_instanceof(
      ext, score_instanceof_int(t.instance, t.concept_id, m.ext, m.in, zero_events),
      m.config.alpha);
}

inline double score(const ModelState& m, const SubClassOfTriple& t,
                    ZeroVectorCounter* zero_events = nullptr) {
  const double ext = score_subclassof_ext(t.sub, t.sup, m.ext);
  if (m.config.alpha == 0.0) return ext;
  return combine_subclassof(
      ext, score_subclassof_int(t.sub, t.sup, m.in, zero_events),
      m.config.alpha);
}

// Row-sparse gradient for one parameter table.
class SparseRows {
 public:
  explicit SparseRows(Eigen::Index cols = 0) : cols_(cols) {}

  template <class V>
  void add(Index row, const V& value) {
    auto [it, inserted] = rows_.try_emplace(row);
    if (inserted) it->second = Vector::Zero(cols_);
    it->second += value;
  }

  void merge(const SparseRows& other) {
    for (const auto& [row, value] : other.rows_) add(row, value);
  }

  const std::unordered_map<Index, Vector>& rows() const { return rows_; }
  Vector get(Index row) const {
    auto it = rows_.find(row);
    return it == rows_.end() ? Vector::Zero(cols_) : it->second;
  }
  bool empty() const { return rows_.empty(); }

 private:
  Eigen::Index cols_;
  std::unordered_map<Index, Vector> rows_;
};

struct Gradients {
  explicit Gradients(Eigen::Index dim)
      : instances(dim), relations(dim), centers(dim), axes(dim),
        concepts(dim), bridge(Matrix::Zero(0, 0)) {}

  SparseRows instances;
  SparseRows relations;
  SparseRows centers;
  SparseRows axes;
  SparseRows concepts;  // intensional
  std::unordered_map<Index, double> radii;
  Matrix bridge;  // dense d x d, allocated on first use

  void add_radius(Index c, double value) { radii[c] += value; }

  void add_bridge(const Matrix& value) {
    if (bridge.size() == 0) bridge = Matrix::Zero(value.rows(), value.cols());
    bridge += value;
  }

  void merge(const Gradients& other) {
    instances.merge(other.instances);
    relations.merge(other.relations);
    centers.merge(other.centers);
    axes.merge(other.axes);
    concepts.merge(other.concepts);
    for (const auto& [c, v] : other.radii) radii[c] += v;
    if (other.bridge.size() != 0) add_bridge(other.bridge);
  }
};

namespace detail {

// d(1 - cos(x, y))/dx. Zero when either vector is zero.
inline Vector cosine_distance_grad(const Vector& x, const Vector& y) {
  const double nx = x.norm();
  const double ny = y.norm();
  if (nx == 0.0 || ny == 0.0) return Vector::Zero(x.size());
  const double cos = x.dot(y) / (nx * ny);
  return -(y / (nx * ny) - cos * x / (nx * nx));
}

inline Vector norm_grad(const Vector& x) {
  const double n = x.norm();
  if (n == 0.0) return Vector::Zero(x.size());
  return x / n;
}

}  // namespace detail

// Each add_*_grad accumulates scale * d(score)/d(params) into `g`.

inline void add_score_grad(const ModelState& m, const RelationalTriple& t,
                           double scale, Gradients& g) {
  const Vector residual = (m.ext.instances.row(t.head) +
                           m.ext.relations.row(t.relation) -
                           m.ext.instances.row(t.tail))
                              .transpose();
  Vector d;
  if (m.config.norm == RelationNorm::kL1) {
    d = residual.unaryExpr([](double v) {
      return static_cast<double>((v > 0) - (v < 0));
    });
  } else {
    d = 2.0 * residual;
  }
  d *= scale;
  g.instances.add(t.head, d);
  g.relations.add(t.relation, d);
  g.instances.add(t.tail, -d);
}

inline void add_score_grad(const ModelState& m, const InstanceOfTriple& t,
                           double scale, Gradients& g) {
  const auto& p = m.ext;
  const Vector x = p.instances.row(t.instance).transpose();
  const Vector center = p.centers.row(t.concept_id).transpose();
  const Vector axes = p.axes.row(t.concept_id).transpose();
  const double r = p.radii(t.concept_id);
  const Vector z = ((x - center).array() / axes.array()).matrix();
  if (z.squaredNorm() - r * r > 0.0) {
    const Vector dx = (2.0 * z.array() / axes.array()).matrix();
    g.instances.add(t.instance, scale * dx);
    g.centers.add(t.concept_id, -scale * dx);
    g.axes.add(t.concept_id,
               (-2.0 * scale * z.array().square() / axes.array()).matrix());
    g.add_radius(t.concept_id, -2.0 * scale * r);
  }

  const double alpha = m.config.alpha;
  if (alpha == 0.0) return;
  const Vector vi = virtual_instance(t.instance, m.ext, m.in);
  const Vector ci = m.in.concepts.row(t.concept_id).transpose();
  const Vector d_vi = detail::cosine_distance_grad(vi, ci);
  const Vector d_ci = detail::cosine_distance_grad(ci, vi);
  const double s = alpha * scale;
  g.concepts.add(t.concept_id, s * d_ci);
  if (m.in.bridge == BridgeKind::kIdentity) {
    g.instances.add(t.instance, s * d_vi);
  } else {
    g.instances.add(t.instance, s * (m.in.bridge_matrix.transpose() * d_vi));
    g.add_bridge(s * d_vi * x.transpose());
  }
}

inline void add_score_grad(const ModelState& m, const SubClassOfTriple& t,
                           double scale, Gradients& g) {
  const auto& p = m.ext;
  const Vector ci = p.centers.row(t.sub).transpose();
  const Vector bi = p.axes.row(t.sub).transpose();
  const Vector cj = p.centers.row(t.sup).transpose();
  const Vector bj = p.axes.row(t.sup).transpose();
  const double ri = p.radii(t.sub);
  const double rj = p.radii(t.sup);
  const Vector u = (ci.array() / bi.array() - cj.array() / bj.array()).matrix();
  if (u.squaredNorm() + ri * ri - rj * rj > 0.0) {
    g.centers.add(t.sub, (2.0 * scale * u.array() / bi.array()).matrix());
    g.axes.add(t.sub, (-2.0 * scale * u.array() * ci.array() /
                       bi.array().square())
                          .matrix());
    g.centers.add(t.sup, (-2.0 * scale * u.array() / bj.array()).matrix());
    g.axes.add(t.sup, (2.0 * scale * u.array() * cj.array() /
                       bj.array().square())
                          .matrix());
    g.add_radius(t.sub, 2.0 * scale * ri);
    g.add_radius(t.sup, -2.0 * scale * rj);
  }

  const double alpha = m.config.alpha;
  if (alpha == 0.0) return;
  const Vector a = m.in.concepts.row(t.sub).transpose();
  const Vector b = m.in.concepts.row(t.sup).transpose();
  const double s = alpha * scale;
  g.concepts.add(t.sub,
                 s * (detail::cosine_distance_grad(a, b) + detail::norm_grad(a)));
  g.concepts.add(t.sup,
                 s * (detail::cosine_distance_grad(b, a) - detail::norm_grad(b)));
}

}  // namespace ontoembed
