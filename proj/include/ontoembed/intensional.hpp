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

// Intensional space: one vector per concept, compared by cosine and norm.
// Instances have no vectors of their own here; they are mapped across from
// the extensional space through a bridge (identity or a learnable matrix).

#pragma once

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "ontoembed/common.hpp"
#include "ontoembed/extensional.hpp"
#include "ontoembed/ontology.hpp"

namespace ontoembed {

enum class BridgeKind { kIdentity, kMatrix };
enum class InitMode { kUnpretrained, kPretrained };

struct IntensionalParams {
  Matrix concepts;  // |C| x d
  BridgeKind bridge = BridgeKind::kIdentity;
  Matrix bridge_matrix;  // d x d when bridge == kMatrix, empty otherwise
  InitMode init = InitMode::kUnpretrained;
};

// Counts cosine evaluations that hit a zero vector.
using ZeroVectorCounter = std::atomic<std::uint64_t>;

inline Vector virtual_instance(Index i, const ExtensionalParams& ext,
                               const IntensionalParams& in) {
  if (in.bridge == BridgeKind::kIdentity) return ext.instances.row(i).transpose();
  return in.bridge_matrix * ext.instances.row(i).transpose();
}

// 1 - cos(x, y); a zero argument yields the neutral value 1.
template <class X, class Y>
double cosine_distance(const X& x, const Y& y,
                       ZeroVectorCounter* zero_events = nullptr) {
  const double nx = x.norm();
  const double ny = y.norm();
  if (nx == 0.0 || ny == 0.0) {
    if (zero_events) zero_events->fetch_add(1, std::memory_order_relaxed);
    return 1.0;
  }
  return 1.0 - x.dot(y) / (nx * ny);
}

inline double score_instanceof_int(Index i, Index c,
                                   const ExtensionalParams& ext,
                                   const IntensionalParams& in,
                                   ZeroVectorCounter* zero_events = nullptr) {
  const Vector x = virtual_instance(i, ext, in);
  return cosine_distance(x, in.concepts.row(c).transpose(), zero_events);
}

// Unclipped: may be negative when the super-concept vector is longer.
inline double score_subclassof_int(Index ci, Index cj,
                                   const IntensionalParams& in,
                                   ZeroVectorCounter* zero_events = nullptr) {
  const auto a = in.concepts.row(ci).transpose();
  const auto b = in.concepts.row(cj).transpose();
  return cosine_distance(a, b, zero_events) + a.norm() - b.norm();
}

inline double combine_instanceof(double ext_score, double int_score,
                                 double alpha) {
  return ext_score + alpha * int_score;
}

inline double combine_subclassof(double ext_score, double int_score,
                                 double alpha) {
  return ext_score + alpha * int_score;
}

inline Matrix unpretrained_concept_vectors(std::size_t num_concepts,
                                           std::size_t dim,
                                           std::uint64_t seed) {
  Matrix m(static_cast<Eigen::Index>(num_concepts),
           static_cast<Eigen::Index>(dim));
  auto rng = make_rng(seed, streams::kIntensionalInit);
  fill_uniform_embedding(m, rng);
  const double bound = 6.0 / std::sqrt(static_cast<double>(dim));
  for (Eigen::Index c = 0; c < m.rows(); ++c) {
    while (m.row(c).squaredNorm() == 0.0) {
      for (Eigen::Index k = 0; k < m.cols(); ++k)
        m(c, k) = (2.0 * uniform_unit(rng) - 1.0) * bound;
    }
  }
  return m;
}

inline IntensionalParams init_intensional(std::size_t num_concepts,
                                          std::size_t dim, BridgeKind bridge,
                                          std::uint64_t seed) {
  if (dim == 0 || num_concepts == 0) {
    throw usage_error("init_intensional: sizes and dimension must be >= 1");
  }
  IntensionalParams p;
  p.concepts = unpretrained_concept_vectors(num_concepts, dim, seed);
  p.bridge = bridge;
  p.init = InitMode::kUnpretrained;
  if (bridge == BridgeKind::kMatrix) {
    const auto d = static_cast<Eigen::Index>(dim);
    p.bridge_matrix = Matrix::Identity(d, d);
    auto rng = make_rng(seed, streams::kBridgeInit);
    std::normal_distribution<double> noise(0.0, 0.01);
    for (Eigen::Index k = 0; k < p.bridge_matrix.size(); ++k) {
      p.bridge_matrix.data()[k] += noise(rng);
    }
  }
  return p;
}

// Text transport format for encoder output:
//   count dim
//   concept_id v1 ... v_dim      (ascending concept_id)
struct ConceptVectorFile {
  std::size_t dim = 0;
  std::vector<Index> ids;
  Matrix rows;  // ids.size() x dim
};

inline ConceptVectorFile read_concept_vector_file(
    const std::filesystem::path& path, std::size_t num_concepts) {
  detail::LineReader reader(path);
  std::string line;
  if (!reader.next(line)) reader.fail("empty file, expected 'count dim'");
  const auto header = detail::tokens(line);
  if (header.size() != 2) reader.fail("expected header 'count dim'");
  const auto count = reader.parse_count(header[0]);
  ConceptVectorFile file;
  file.dim = reader.parse_count(header[1]);
  if (file.dim == 0) reader.fail("dimension must be positive");
  file.rows.resize(static_cast<Eigen::Index>(count),
                   static_cast<Eigen::Index>(file.dim));
  file.ids.reserve(count);
  while (reader.next(line)) {
    const auto fields = detail::tokens(line);
    if (fields.empty()) continue;
    if (file.ids.size() == count) {
      reader.fail("more rows than the declared count " + std::to_string(count));
    }
    if (fields.size() != file.dim + 1) {
      reader.fail("expected " + std::to_string(file.dim + 1) + " fields, got " +
                  std::to_string(fields.size()));
    }
    const Index id = reader.parse_id(fields[0], num_concepts, "concept");
    if (!file.ids.empty() && id <= file.ids.back()) {
      reader.fail("concept ids must be strictly ascending");
    }
    const auto row = static_cast<Eigen::Index>(file.ids.size());
    for (std::size_t k = 0; k < file.dim; ++k) {
      const std::string token(fields[k + 1]);
      char* end = nullptr;
      const double value = std::strtod(token.c_str(), &end);
      if (end != token.c_str() + token.size()) {
        reader.fail("malformed float '" + token + "'");
      }
      if (!std::isfinite(value)) reader.fail("non-finite value in row");
      file.rows(row, static_cast<Eigen::Index>(k)) = value;
    }
    file.ids.push_back(id);
  }
  if (file.ids.size() != count) {
    reader.fail("header declares " + std::to_string(count) + " rows, found " +
                std::to_string(file.ids.size()));
  }
  return file;
}

inline void write_concept_vector_file(const std::filesystem::path& path,
                                      const ConceptVectorFile& file) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write " + path.string());
  out << file.ids.size() << ' ' << file.dim << '\n';
  char buf[32];
  for (std::size_t r = 0; r < file.ids.size(); ++r) {
    out << file.ids[r];
    for (std::size_t k = 0; k < file.dim; ++k) {
      std::snprintf(buf, sizeof buf, "%.17g",
                    file.rows(static_cast<Eigen::Index>(r),
                              static_cast<Eigen::Index>(k)));
      out << ' ' << buf;
    }
    out << '\n';
  }
}

// Projects rows onto their top `dim` principal components. Component signs
// are fixed so that each component's largest-magnitude entry is positive,
// which makes the result a pure function of the input.
inline Matrix reduce_dimension(const Matrix& rows, std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  if (d > rows.cols()) throw data_error("cannot reduce to a larger dimension");
  if (d == rows.cols()) return rows;
  const Eigen::RowVectorXd mean = rows.colwise().mean();
  const Matrix centered = rows.rowwise() - mean;
  const Eigen::MatrixXd cov =
      (centered.transpose() * centered) /
      static_cast<double>(std::max<Eigen::Index>(1, rows.rows()));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) {
    throw numeric_error("principal component fit did not converge");
  }
  // Eigenvalues come back ascending; take the last d columns, largest first.
  Eigen::MatrixXd basis(rows.cols(), d);
  for (Eigen::Index k = 0; k < d; ++k) {
    Eigen::VectorXd v = solver.eigenvectors().col(rows.cols() - 1 - k);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;
    basis.col(k) = v;
  }
  return centered * basis;
}

struct ConceptVectorLoad {
  Matrix vectors;  // |C| x d
  std::vector<bool> present;  // row came from the file
  std::size_t missing = 0;
  std::size_t zero_rows = 0;
  std::vector<std::string> warnings;
};

// Builds the |C| x d intensional matrix from encoder output. Concepts absent
// from the file (or reduced to an exact zero vector) keep their unpretrained
// initialisation for `seed`.
inline ConceptVectorLoad load_concept_vectors(const ConceptVectorFile& file,
                                              std::size_t num_concepts,
                                              std::size_t dim,
                                              std::uint64_t seed) {
  if (file.dim < dim) {
    throw data_error("concept vector dimension " + std::to_string(file.dim) +
                     " is smaller than the model dimension " +
                     std::to_string(dim));
  }
  if (!file.rows.allFinite()) throw data_error("non-finite concept vector");
  ConceptVectorLoad load;
  load.vectors = unpretrained_concept_vectors(num_concepts, dim, seed);
  const Matrix reduced = reduce_dimension(file.rows, dim);
  load.present.assign(num_concepts, false);
  for (std::size_t r = 0; r < file.ids.size(); ++r) {
    const auto row = reduced.row(static_cast<Eigen::Index>(r));
    if (row.squaredNorm() == 0.0) {
      ++load.zero_rows;
      continue;
    }
    load.vectors.row(file.ids[r]) = row;
    load.present[file.ids[r]] = true;
  }
  load.missing = static_cast<std::size_t>(
      std::count(load.present.begin(), load.present.end(), false));
  if (load.missing > 0) {
    load.warnings.push_back(std::to_string(load.missing) +
                            " concepts without an encoder vector use random "
                            "initialisation");
  }
  return load;
}

inline ConceptVectorLoad load_concept_vectors(const std::filesystem::path& path,
                                              std::size_t num_concepts,
                                              std::size_t dim,
                                              std::uint64_t seed) {
  return load_concept_vectors(read_concept_vector_file(path, num_concepts),
                              num_concepts, dim, seed);
}

inline bool all_finite(const IntensionalParams& p) {
  return p.concepts.allFinite() && p.bridge_matrix.allFinite();
}

}  // namespace ontoembed
