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

// Margin-ranking training over the three triple kinds with plain SGD.

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "ontoembed/checkpoint.hpp"
#include "ontoembed/config.hpp"
#include "ontoembed/evaluation.hpp"
#include "ontoembed/model.hpp"
#include "ontoembed/ontology.hpp"
#include "ontoembed/sampling.hpp"

namespace ontoembed {

inline double hinge_rank_loss(double pos_score, double neg_score,
                              double margin) {
  return positive_part(margin + (pos_score - neg_score));
}

struct LossBreakdown {
  double rel = 0.0;
  double ins = 0.0;
  double sub = 0.0;

  double total() const { return rel + ins + sub; }

  LossBreakdown& operator+=(const LossBreakdown& o) {
    rel += o.rel;
    ins += o.ins;
    sub += o.sub;
    return *this;
  }
};

template <class T>
struct TriplePair {
  T positive;
  T negative;
};

struct Batch {
  std::vector<TriplePair<RelationalTriple>> relational;
  std::vector<TriplePair<InstanceOfTriple>> instance_of;
  std::vector<TriplePair<SubClassOfTriple>> sub_class_of;

  std::size_t size() const {
    return relational.size() + instance_of.size() + sub_class_of.size();
  }
};

inline double margin_for(const TrainingConfig& c, const RelationalTriple&) {
  return c.margin_rel;
}
inline double margin_for(const TrainingConfig& c, const InstanceOfTriple&) {
  return c.margin_ins;
}
inline double margin_for(const TrainingConfig& c, const SubClassOfTriple&) {
  return c.margin_sub;
}

// Sum of hinge terms per kind over all pairs; parameters are not touched.
inline LossBreakdown epoch_loss(const ModelState& state,
                                std::span<const Batch> batches) {
  LossBreakdown loss;
  const auto add = [&state](const auto& pairs, double& acc) {
    for (const auto& p : pairs) {
      acc += hinge_rank_loss(score(state, p.positive), score(state, p.negative),
                             margin_for(state.config, p.positive));
    }
  };
  for (const auto& batch : batches) {
    add(batch.relational, loss.rel);
    add(batch.instance_of, loss.ins);
    add(batch.sub_class_of, loss.sub);
  }
  return loss;
}

namespace detail {

template <class Pairs>
void accumulate_pairs(const ModelState& state, const Pairs& pairs,
                      std::size_t begin, std::size_t end, double& loss,
                      Gradients& grads) {
  for (std::size_t k = begin; k < end; ++k) {
    const auto& p = pairs[k];
    const double h = hinge_rank_loss(score(state, p.positive),
                                     score(state, p.negative),
                                     margin_for(state.config, p.positive));
    loss += h;
    // Subgradient 0 at the kink.
    if (h > 0.0) {
      add_score_grad(state, p.positive, 1.0, grads);
      add_score_grad(state, p.negative, -1.0, grads);
    }
  }
}

inline void accumulate_batch(const ModelState& state, const Batch& batch,
                             double fraction_begin, double fraction_end,
                             LossBreakdown& loss, Gradients& grads) {
  const auto range = [&](std::size_t n) {
    return std::pair{static_cast<std::size_t>(fraction_begin * n),
                     static_cast<std::size_t>(fraction_end * n)};
  };
  auto [rb, re] = range(batch.relational.size());
  accumulate_pairs(state, batch.relational, rb, re, loss.rel, grads);
  auto [ib, ie] = range(batch.instance_of.size());
  accumulate_pairs(state, batch.instance_of, ib, ie, loss.ins, grads);
  auto [sb, se] = range(batch.sub_class_of.size());
  accumulate_pairs(state, batch.sub_class_of, sb, se, loss.sub, grads);
}

inline void check_finite(const SparseRows& rows, std::string_view table) {
  for (const auto& [row, value] : rows.rows()) {
    if (!value.allFinite()) {
      throw numeric_error("non-finite gradient for " + std::string(table) +
                          " " + std::to_string(row));
    }
  }
}

}  // namespace detail

// Gradients of the summed hinge losses of `batch`; returns its loss.
inline LossBreakdown batch_gradients(const ModelState& state,
                                     const Batch& batch, Gradients& grads,
                                     std::size_t threads = 1) {
  LossBreakdown loss;
  threads = std::max<std::size_t>(1, std::min(threads, batch.size()));
  if (threads == 1) {
    detail::accumulate_batch(state, batch, 0.0, 1.0, loss, grads);
    return loss;
  }
  std::vector<LossBreakdown> losses(threads);
  std::vector<Gradients> partial(threads, Gradients(state.ext.dim()));
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        detail::accumulate_batch(
            state, batch, static_cast<double>(w) / threads,
            w + 1 == threads ? 1.0 : static_cast<double>(w + 1) / threads,
            losses[w], partial[w]);
      });
    }
  }
  for (std::size_t w = 0; w < threads; ++w) {
    loss += losses[w];
    grads.merge(partial[w]);
  }
  return loss;
}

// params -= lr * grads, then re-projects every touched row.
inline void apply_gradients(ModelState& state, const Gradients& grads) {
  detail::check_finite(grads.instances, "instance");
  detail::check_finite(grads.relations, "relation");
  detail::check_finite(grads.centers, "concept center");
  detail::check_finite(grads.axes, "concept axes");
  detail::check_finite(grads.concepts, "intensional concept");
  for (const auto& [c, v] : grads.radii) {
    if (!std::isfinite(v)) {
      throw numeric_error("non-finite gradient for concept radius " +
                          std::to_string(c));
    }
  }
  if (!grads.bridge.allFinite()) {
    throw numeric_error("non-finite gradient for bridge matrix");
  }

  const double lr = state.config.lr;
  auto& ext = state.ext;
  for (const auto& [i, g] : grads.instances.rows()) {
    ext.instances.row(i) -= lr * g.transpose();
    project_instance(ext, i);
  }
  for (const auto& [r, g] : grads.relations.rows()) {
    ext.relations.row(r) -= lr * g.transpose();
  }
  for (const auto& [c, g] : grads.centers.rows()) {
    ext.centers.row(c) -= lr * g.transpose();
  }
  for (const auto& [c, g] : grads.axes.rows()) {
    ext.axes.row(c) -= lr * g.transpose();
    project_concept(ext, c);
  }
  for (const auto& [c, g] : grads.radii) {
    ext.radii(c) -= lr * g;
    project_concept(ext, c);
  }
  if (state.config.train_intensional) {
    for (const auto& [c, g] : grads.concepts.rows()) {
      state.in.concepts.row(c) -= lr * g.transpose();
    }
  }
  if (state.in.bridge == BridgeKind::kMatrix && grads.bridge.size() != 0) {
    state.in.bridge_matrix -= lr * grads.bridge;
  }
}

// One SGD update on `batch`. Returns the batch loss before the update.
inline LossBreakdown sgd_step(ModelState& state, const Batch& batch) {
  Gradients grads(state.ext.dim());
  const auto loss = batch_gradients(state, batch, grads, state.config.threads);
  apply_gradients(state, grads);
  return loss;
}

// Positive training triples plus what negative sampling needs.
class TrainingData {
 public:
  TrainingData(const Dataset& dataset, SamplingMode mode)
      : dataset_(&dataset), truth_(dataset), stats_(compute_bern_stats(dataset)),
        corrupter_(mode, stats_, truth_, dataset.num_instances(),
                   dataset.num_concepts(), &counters_) {}

  TrainingData(const TrainingData&) = delete;
  TrainingData& operator=(const TrainingData&) = delete;

  const Dataset& dataset() const { return *dataset_; }
  const TruthIndex& truth() const { return truth_; }
  const BernStats& stats() const { return stats_; }
  const Corrupter& corrupter() const { return corrupter_; }
  const SamplingCounters& counters() const { return counters_; }

 private:
  const Dataset* dataset_;
  TruthIndex truth_;
  BernStats stats_;
  SamplingCounters counters_;
  Corrupter corrupter_;
};

namespace detail {

inline std::vector<std::size_t> shuffled_indices(std::size_t n, Rng& rng) {
  std::vector<std::size_t> idx(n);
  for (std::size_t k = 0; k < n; ++k) idx[k] = k;
  for (std::size_t k = n; k > 1; --k) {
    std::swap(idx[k - 1], idx[uniform_index(rng, static_cast<Index>(k))]);
  }
  return idx;
}

template <class T>
void fill_pairs(const std::vector<T>& train,
                const std::vector<std::size_t>& order, std::size_t begin,
                std::size_t end, std::size_t negatives,
                const Corrupter& corrupt, Rng& rng,
                std::vector<TriplePair<T>>& out) {
  for (std::size_t k = begin; k < end; ++k) {
    const T& positive = train[order[k]];
    for (std::size_t n = 0; n < negatives; ++n) {
      if (auto neg = corrupt(positive, rng)) {
        out.push_back(TriplePair<T>{positive, neg->triple});
      }
    }
  }
}

}  // namespace detail

// Shuffles each kind and interleaves them round-robin: batch b takes the
// b-th proportional slice of every kind. Negatives are drawn here.
inline std::vector<Batch> make_epoch_batches(const TrainingData& data,
                                             const TrainingConfig& config,
                                             Rng& rng) {
  const auto& d = data.dataset();
  const std::size_t n_rel = d.relational.train.size();
  const std::size_t n_ins = d.instance_of.train.size();
  const std::size_t n_sub = d.sub_class_of.train.size();
  const auto rel_order = detail::shuffled_indices(n_rel, rng);
  const auto ins_order = detail::shuffled_indices(n_ins, rng);
  const auto sub_order = detail::shuffled_indices(n_sub, rng);
  const std::size_t total = n_rel + n_ins + n_sub;
  const std::size_t num_batches =
      std::max<std::size_t>(1, (total + config.batch_size - 1) / config.batch_size);
  std::vector<Batch> batches(num_batches);
  for (std::size_t b = 0; b < num_batches; ++b) {
    const auto slice = [&](std::size_t n) {
      return std::pair{n * b / num_batches, n * (b + 1) / num_batches};
    };
    auto [rb, re] = slice(n_rel);
    detail::fill_pairs(d.relational.train, rel_order, rb, re, config.negatives,
                       data.corrupter(), rng, batches[b].relational);
    auto [ib, ie] = slice(n_ins);
    detail::fill_pairs(d.instance_of.train, ins_order, ib, ie, config.negatives,
                       data.corrupter(), rng, batches[b].instance_of);
    auto [sb, se] = slice(n_sub);
    detail::fill_pairs(d.sub_class_of.train, sub_order, sb, se,
                       config.negatives, data.corrupter(), rng,
                       batches[b].sub_class_of);
  }
  return batches;
}

struct EpochRecord {
  std::uint64_t epoch = 0;
  LossBreakdown loss;
  double wall_seconds = 0.0;
  std::optional<double> validation;
};

// Runs the next epoch (state.epoch + 1). Its randomness depends only on the
// seed and the epoch number, so a resumed run replays an uninterrupted one.
inline EpochRecord run_epoch(ModelState& state, const TrainingData& data) {
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t epoch = state.epoch + 1;
  auto rng = make_rng(state.config.seed, streams::kEpochBase + epoch);
  const auto batches = make_epoch_batches(data, state.config, rng);
  EpochRecord record;
  record.epoch = epoch;
  for (std::size_t b = 0; b < batches.size(); ++b) {
    const auto loss = sgd_step(state, batches[b]);
    if (!std::isfinite(loss.total())) {
      throw numeric_error(
          "non-finite loss at epoch " + std::to_string(epoch) + ", batch " +
          std::to_string(b) + ": L_rel=" + detail::format_double(loss.rel) +
          " L_ins=" + detail::format_double(loss.ins) +
          " L_sub=" + detail::format_double(loss.sub));
    }
    record.loss += loss;
  }
  state.epoch = epoch;
  record.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return record;
}

// Validation score used for model selection (higher is better).
inline double validation_metric(const ModelState& state, const Dataset& dataset,
                                 const TruthIndex& truth) {
  if (state.config.select_by == SelectionMetric::kHits10) {
    const auto tests = positive_triples(dataset.relational.valid);
    return link_predict(state, tests, truth, RankSetting::kFilter,
                        state.config.threads)
        .hits10;
  }
  // Mean tuned validation accuracy over the kinds that have validation data.
  const auto thresholds = tune_thresholds(state, dataset);
  double sum = 0.0;
  int kinds = 0;
  const auto add = [&](const auto& rows) {
    if (rows.empty()) return;
    sum += classify(state, thresholds, rows, dataset.vocab).accuracy;
    ++kinds;
  };
  add(dataset.relational.valid);
  add(dataset.instance_of.valid);
  add(dataset.sub_class_of.valid);
  return kinds > 0 ? sum / kinds : 0.0;
}

struct TrainOptions {
  // Receives every epoch record as it is produced.
  std::function<void(const EpochRecord&)> on_epoch;
  // Written whenever validation improves (when selection is enabled).
  std::optional<std::filesystem::path> checkpoint_path;
};

struct TrainResult {
  ModelState state;  // best validated state, or the final one
  std::vector<EpochRecord> log;
  std::optional<std::uint64_t> best_epoch;
  std::optional<double> best_validation;
  std::uint64_t skipped_negatives = 0;
};

// Trains from `state` until state.epoch == config.epochs.
inline TrainResult continue_training(ModelState state, const Dataset& dataset,
                                     const TrainOptions& options = {}) {
  validate(state.config);
  const TrainingData data(dataset, state.config.sampling);
  TrainResult result;
  const bool selecting = state.config.eval_every > 0 &&
                         state.config.select_by != SelectionMetric::kNone;
  while (state.epoch < state.config.epochs) {
    auto record = run_epoch(state, data);
    if (selecting && record.epoch % state.config.eval_every == 0) {
      record.validation = validation_metric(state, dataset, data.truth());
      if (!result.best_validation || *record.validation > *result.best_validation) {
        result.best_validation = record.validation;
        result.best_epoch = record.epoch;
        result.state = state;
        if (options.checkpoint_path) {
          save_checkpoint(state, *options.checkpoint_path);
        }
      }
    }
    if (options.on_epoch) options.on_epoch(record);
    result.log.push_back(record);
  }
  if (!result.best_epoch) {
    result.state = std::move(state);
    if (options.checkpoint_path) {
      save_checkpoint(result.state, *options.checkpoint_path);
    }
  }
  result.skipped_negatives = data.counters().skipped.load();
  return result;
}

inline TrainResult train(const Dataset& dataset, const TrainingConfig& config,
                         const TrainOptions& options = {}) {
  return continue_training(init_model(dataset, config), dataset, options);
}

inline void write_log_header(std::ostream& out) {
  out << "epoch,L_rel,L_ins,L_sub,L,wall_seconds\n";
}

inline void write_log_row(std::ostream& out, const EpochRecord& r) {
  out << r.epoch << ',' << detail::format_double(r.loss.rel) << ','
      << detail::format_double(r.loss.ins) << ','
      << detail::format_double(r.loss.sub) << ','
      << detail::format_double(r.loss.total()) << ',' << r.wall_seconds << '\n';
}

}  // namespace ontoembed
