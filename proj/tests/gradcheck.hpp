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

// Central finite-difference checks of the analytic score gradients.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "ontoembed/model.hpp"

namespace gradcheck {

using namespace ontoembed;

// |a - n| / max(|a|, |n|, floor): relative, but absolute for tiny entries.
inline double relative_error(double analytic, double numeric, double floor = 1e-3) {
  return std::abs(analytic - numeric) /
         std::max({std::abs(analytic), std::abs(numeric), floor});
}

struct Result {
  double max_error = 0.0;
  std::string worst;  // parameter with the largest error
  std::size_t checked = 0;
};

// Compares `g` against central differences of `f` over every parameter.
inline Result compare(ModelState m, const Gradients& g,
                      const std::function<double(const ModelState&)>& f,
                      double eps = 1e-5) {
  Result out;
  const auto probe = [&](double& param, double analytic, const std::string& name) {
    const double saved = param;
    param = saved + eps;
    const double up = f(m);
    param = saved - eps;
    const double down = f(m);
    param = saved;
    const double err = relative_error(analytic, (up - down) / (2 * eps));
    ++out.checked;
    if (err > out.max_error) {
      out.max_error = err;
      out.worst = name;
    }
  };
  const auto table = [&](Matrix& p, const SparseRows& rows, const char* name) {
    for (Eigen::Index r = 0; r < p.rows(); ++r) {
      const Vector gr = rows.get(static_cast<Index>(r));
      for (Eigen::Index c = 0; c < p.cols(); ++c) {
        probe(p(r, c), gr(c), std::string(name) + "[" + std::to_string(r) + "," +
                                  std::to_string(c) + "]");
      }
    }
  };
  table(m.ext.instances, g.instances, "instances");
  table(m.ext.relations, g.relations, "relations");
  table(m.ext.centers, g.centers, "centers");
  table(m.ext.axes, g.axes, "axes");
  table(m.in.concepts, g.concepts, "concepts");
  for (Eigen::Index c = 0; c < m.ext.radii.size(); ++c) {
    const auto it = g.radii.find(static_cast<Index>(c));
    probe(m.ext.radii(c), it == g.radii.end() ? 0.0 : it->second,
          "radius[" + std::to_string(c) + "]");
  }
  if (m.in.bridge == BridgeKind::kMatrix) {
    for (Eigen::Index k = 0; k < m.in.bridge_matrix.size(); ++k) {
      probe(m.in.bridge_matrix.data()[k], g.bridge.size() ? g.bridge.data()[k] : 0.0,
            "bridge[" + std::to_string(k) + "]");
    }
  }
  return out;
}

// A small random model: 3 instances, 2 relations, 3 concepts in 4-d.
inline ModelState random_model(Rng& rng, BridgeKind bridge, double alpha) {
  const auto u = [&rng](double lo, double hi) { return lo + (hi - lo) * uniform_unit(rng); };
  ModelState m;
  m.config.alpha = alpha;
  m.config.bridge = bridge;
  const Eigen::Index d = 4;
  m.ext.instances.resize(3, d);
  m.ext.relations.resize(2, d);
  m.ext.centers.resize(3, d);
  m.ext.axes.resize(3, d);
  m.ext.radii.resize(3);
  m.in.concepts.resize(3, d);
  for (Eigen::Index k = 0; k < m.ext.instances.size(); ++k) m.ext.instances.data()[k] = u(-0.5, 0.5);
  for (Eigen::Index k = 0; k < m.ext.relations.size(); ++k) m.ext.relations.data()[k] = u(-0.5, 0.5);
  for (Eigen::Index k = 0; k < m.ext.centers.size(); ++k) m.ext.centers.data()[k] = u(-1.0, 1.0);
  for (Eigen::Index k = 0; k < m.ext.axes.size(); ++k) m.ext.axes.data()[k] = u(0.5, 1.5);
  for (Eigen::Index k = 0; k < m.ext.radii.size(); ++k) m.ext.radii(k) = u(0.2, 1.2);
  for (Eigen::Index k = 0; k < m.in.concepts.size(); ++k) m.in.concepts.data()[k] = u(-1.0, 1.0);
  m.in.bridge = bridge;
  if (bridge == BridgeKind::kMatrix) {
    m.in.bridge_matrix = Matrix::Identity(d, d);
    for (Eigen::Index k = 0; k < m.in.bridge_matrix.size(); ++k)
      m.in.bridge_matrix.data()[k] += u(-0.3, 0.3);
  }
  return m;
}

// Distance of the extensional hinge argument from its kink.
inline double kink_distance(const ModelState& m, const InstanceOfTriple& t) {
  const double r = m.ext.radii(t.concept_id);
  return std::abs(ellipsoid_distance_sq(m.ext.instances.row(t.instance).transpose(),
                                        m.ext.centers.row(t.concept_id).transpose(),
                                        m.ext.axes.row(t.concept_id).transpose()) -
                  r * r);
}

inline double kink_distance(const ModelState& m, const SubClassOfTriple& t) {
  const auto u = (m.ext.centers.row(t.sub).array() / m.ext.axes.row(t.sub).array() -
                  m.ext.centers.row(t.sup).array() / m.ext.axes.row(t.sup).array());
  const double ri = m.ext.radii(t.sub), rj = m.ext.radii(t.sup);
  return std::abs(u.square().sum() + ri * ri - rj * rj);
}

inline double kink_distance(const ModelState&, const RelationalTriple&) { return INFINITY; }

template <class T>
Result check_score(const ModelState& m, const T& triple) {
  Gradients g(m.ext.dim());
  add_score_grad(m, triple, 1.0, g);
  return compare(m, g, [&triple](const ModelState& s) { return score(s, triple); });
}

// Runs `configs` random configurations per (kind, bridge, alpha) cell and
// returns the worst result. Configurations within 1e-3 of a hinge kink are
// redrawn, since the score is not differentiable there.
inline Result check_random_configs(std::uint64_t seed, int configs) {
  Result worst;
  auto rng = make_rng(seed, 0);
  const auto merge = [&worst](const Result& r, const std::string& label) {
    worst.checked += r.checked;
    if (r.max_error >= worst.max_error) {
      worst.max_error = r.max_error;
      worst.worst = label + " " + r.worst;
    }
  };
  for (const auto bridge : {BridgeKind::kIdentity, BridgeKind::kMatrix}) {
    for (const double alpha : {0.0, 0.5}) {
      const std::string cell = std::string(bridge == BridgeKind::kMatrix ? "mat" : "eye") +
                               " alpha=" + (alpha == 0.0 ? "0" : "0.5");
      for (int k = 0; k < configs; ++k) {
        const auto m = random_model(rng, bridge, alpha);
        const RelationalTriple rel{uniform_index(rng, 3), uniform_index(rng, 2),
                                   uniform_index(rng, 3)};
        merge(check_score(m, rel), cell + " rel");
        InstanceOfTriple ins{uniform_index(rng, 3), uniform_index(rng, 3)};
        while (kink_distance(m, ins) < 1e-3) ins = {uniform_index(rng, 3), uniform_index(rng, 3)};
        merge(check_score(m, ins), cell + " ins");
        SubClassOfTriple sub{0, 1};
        do {
          sub = {uniform_index(rng, 3), uniform_index(rng, 3)};
        } while (sub.sub == sub.sup || kink_distance(m, sub) < 1e-3);
        merge(check_score(m, sub), cell + " sub");
      }
    }
  }
  return worst;
}

}  // namespace gradcheck
