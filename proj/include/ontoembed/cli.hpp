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

// Command-line front end. Kept out of the umbrella header because it needs
// CLI11 (vendor/CLI11.hpp) on the include path.
//
// Exit codes: 0 success, 2 bad flags, 3 data or I/O errors, 4 numeric
// aborts. Failures print one line "error: <category>: <message>" to stderr.

#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ontoembed/ontoembed.hpp"

namespace ontoembed::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitNumeric = 4;

namespace detail {

inline std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

enum class Format { kCsv, kTable, kBoth };

// A small report: CSV for machines, an aligned table for people.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void write_csv(std::ostream& out) const {
    const auto line = [&out](const std::vector<std::string>& cells) {
      for (std::size_t k = 0; k < cells.size(); ++k) out << (k ? "," : "") << cells[k];
      out << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
  }

  void write_pretty(std::ostream& out) const {
    std::vector<std::size_t> width(header.size());
    for (std::size_t k = 0; k < header.size(); ++k) width[k] = header[k].size();
    for (const auto& r : rows)
      for (std::size_t k = 0; k < r.size(); ++k) width[k] = std::max(width[k], r[k].size());
    const auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t k = 0; k < cells.size(); ++k) {
        out << (k ? "  " : "") << cells[k];
        if (k + 1 < cells.size()) out << std::string(width[k] - cells[k].size(), ' ');
      }
      out << '\n';
    };
    line(header);
    std::size_t total = 0;
    for (const auto w : width) total += w;
    out << std::string(total + 2 * (width.size() - 1), '-') << '\n';
    for (const auto& r : rows) line(r);
  }

  void write(std::ostream& out, Format format) const {
    if (format != Format::kTable) write_csv(out);
    if (format == Format::kBoth) out << '\n';
    if (format != Format::kCsv) write_pretty(out);
  }
};

inline std::optional<DatasetStats> resolve_stats(const std::string& spec) {
  if (spec.empty()) return std::nullopt;
  if (auto known = known_stats(spec)) return known;
  return read_stats_file(spec);
}

// Loads a dataset and gives positives-only valid/test splits negatives.
inline Dataset load_for_cli(const std::string& dir, const std::string& stats,
                            std::uint64_t seed, std::ostream& err) {
  Dataset d = load_dataset(dir, resolve_stats(stats));
  add_missing_negatives(d, seed);
  for (const auto& w : d.warnings) err << "warning: " << w << '\n';
  return d;
}

inline void check_matches(const ModelState& m, const Dataset& d) {
  if (static_cast<std::size_t>(m.ext.instances.rows()) != d.num_instances() ||
      static_cast<std::size_t>(m.ext.relations.rows()) != d.num_relations() ||
      static_cast<std::size_t>(m.ext.centers.rows()) != d.num_concepts()) {
    throw data_error("checkpoint shapes do not match the dataset vocabulary");
  }
}

template <class T>
const std::vector<Labeled<T>>& pick_split(const TripleSplits<T>& s, const std::string& split) {
  return split == "valid" ? s.valid : s.test;
}

inline std::vector<std::string> report_cells(std::string kind, std::string name,
                                             const ClassificationReport& r) {
  return {std::move(kind), std::move(name), std::to_string(r.total()), std::to_string(r.tp),
          std::to_string(r.fp), std::to_string(r.tn), std::to_string(r.fn),
          fixed(r.accuracy), fixed(r.precision), fixed(r.recall), fixed(r.f1)};
}

struct Common {
  std::string data;
  std::string ckpt;
  std::string expect_stats;
  std::string split = "test";
  std::string format = "both";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;

  Format parsed_format() const {
    if (format == "csv") return Format::kCsv;
    if (format == "table") return Format::kTable;
    return Format::kBoth;
  }
};

// Loads the checkpoint and dataset an evaluation command works on.
inline std::pair<ModelState, Dataset> load_eval_inputs(const Common& c, std::ostream& err) {
  ModelState m = load_checkpoint(c.ckpt);
  if (c.threads) m.config.threads = *c.threads;
  Dataset d = load_for_cli(c.data, c.expect_stats, c.seed.value_or(m.config.seed), err);
  check_matches(m, d);
  return {std::move(m), std::move(d)};
}

inline void add_eval_flags(CLI::App* sub, Common& c, bool with_split = true) {
  sub->add_option("--ckpt", c.ckpt, "checkpoint file")->required();
  sub->add_option("--data", c.data, "dataset directory")->required();
  sub->add_option("--expect-stats", c.expect_stats,
                  "check split sizes against a preset (YAGO39K, M-YAGO39K, DB99K-242) "
                  "or a 'key = value' stats file");
  if (with_split) {
    sub->add_option("--split", c.split, "evaluation split")
        ->check(CLI::IsMember({"valid", "test"}));
  }
  sub->add_option("--format", c.format, "report format")
      ->check(CLI::IsMember({"csv", "table", "both"}));
  sub->add_option("--seed", c.seed,
                  "seed for negatives of positives-only splits (default: checkpoint seed)");
  sub->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
}

inline int category_exit(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage:
      return kExitUsage;
    case ErrorKind::kNumeric:
      return kExitNumeric;
    case ErrorKind::kData:
    case ErrorKind::kIo:
      return kExitData;
  }
  return kExitData;
}

inline std::string_view category_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage:
      return "usage";
    case ErrorKind::kNumeric:
      return "numeric";
    case ErrorKind::kData:
      return "data";
    case ErrorKind::kIo:
      return "io";
  }
  return "data";
}

}  // namespace detail

// Runs one command line; never throws.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  using namespace detail;
  CLI::App app{"Ontology embedding with ellipsoid concept regions."};
  app.name("ontoembed");
  app.require_subcommand(1, 1);

  // train
  auto* train_cmd = app.add_subcommand("train", "train a model and write a checkpoint");
  std::string train_data, train_out, config_file, log_file, resume, train_stats;
  bool quiet = false;
  train_cmd->add_option("--data", train_data, "dataset directory")->required();
  train_cmd->add_option("--out", train_out, "checkpoint to write")->required();
  train_cmd->add_option("--config", config_file, "'key = value' config file; flags override it");
  train_cmd->add_option("--log", log_file, "per-epoch CSV training log");
  train_cmd->add_option("--resume", resume, "continue from this checkpoint");
  train_cmd->add_option("--expect-stats", train_stats,
                        "check split sizes against a preset (YAGO39K, M-YAGO39K, DB99K-242) "
                        "or a 'key = value' stats file");
  train_cmd->add_flag("--quiet", quiet, "no progress lines on stderr");
  std::map<std::string, std::string> overrides;
  for (const auto& field : config_fields()) {
    const std::string key(field.key);
    train_cmd->add_option("--" + key, overrides[key], std::string(field.help))
        ->type_name("VALUE");
  }

  // eval-classify
  Common classify_opts;
  auto* classify_cmd = app.add_subcommand(
      "eval-classify", "triple classification with thresholds tuned on the validation split");
  add_eval_flags(classify_cmd, classify_opts);

  // eval-link
  Common link_opts;
  std::string setting = "filter", ranks_file;
  auto* link_cmd = app.add_subcommand("eval-link", "link prediction (MRR, Hits@N)");
  add_eval_flags(link_cmd, link_opts);
  link_cmd->add_option("--setting", setting, "Hits@N setting; both MRRs are always reported")
      ->check(CLI::IsMember({"raw", "filter"}));
  link_cmd->add_option("--ranks", ranks_file,
                       "write 'query_id direction raw_rank filter_rank' per query");

  // probe-transitivity
  Common probe_opts;
  auto* probe_cmd = app.add_subcommand(
      "probe-transitivity", "classify triples implied by the isA rules over the training data");
  add_eval_flags(probe_cmd, probe_opts, false);

  // import-vectors
  std::string vectors_in, vectors_data, vectors_out;
  std::size_t vectors_dim = 0;
  std::uint64_t vectors_seed = TrainingConfig{}.seed;
  auto* import_cmd = app.add_subcommand(
      "import-vectors", "validate encoder vectors and reduce them to the model dimension");
  import_cmd->add_option("--vectors", vectors_in, "encoder output file")->required();
  import_cmd->add_option("--data", vectors_data, "dataset directory (concept vocabulary)")
      ->required();
  import_cmd->add_option("--dim", vectors_dim, "model dimension")
      ->required()
      ->check(CLI::PositiveNumber);
  import_cmd->add_option("--out", vectors_out, "reduced vector file to write")->required();
  import_cmd->add_option("--seed", vectors_seed, "seed reported for fallback initialisation");

  // inspect-checkpoint
  std::string inspect_path;
  auto* inspect_cmd =
      app.add_subcommand("inspect-checkpoint", "print checkpoint metadata and tensor shapes");
  inspect_cmd->add_option("--ckpt", inspect_path, "checkpoint file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << e.what() << '\n';
    err << app.help();
    return kExitUsage;
  }

  try {
    if (train_cmd->parsed()) {
      TrainingConfig config;
      std::optional<ModelState> resumed;
      if (!resume.empty()) {
        resumed = load_checkpoint(resume);
        config = resumed->config;
      }
      if (!config_file.empty()) config = read_config_file(config_file, config);
      for (const auto& field : config_fields()) {
        const std::string key(field.key);
        if (train_cmd->count("--" + key) > 0) set_config_value(config, key, overrides[key]);
      }
      validate(config);
      const Dataset dataset = load_for_cli(train_data, train_stats, config.seed, err);
      ModelState state;
      if (resumed) {
        state = std::move(*resumed);
        state.config = config;
        check_matches(state, dataset);
      } else {
        state = init_model(dataset, config);
      }
      std::ofstream log;
      if (!log_file.empty()) {
        log.open(log_file);
        if (!log) throw io_error("cannot write " + log_file);
        write_log_header(log);
      }
      const std::size_t every = std::max<std::size_t>(1, config.epochs / 20);
      TrainOptions options;
      options.checkpoint_path = train_out;
      options.on_epoch = [&](const EpochRecord& r) {
        if (log.is_open()) write_log_row(log, r);
        if (!quiet && (r.epoch % every == 0 || r.epoch == config.epochs)) {
          err << "epoch " << r.epoch << "/" << config.epochs << " L=" << fixed(r.loss.total());
          if (r.validation) err << " valid=" << fixed(*r.validation);
          err << '\n';
        }
      };
      const auto result = continue_training(std::move(state), dataset, options);
      Table t{{"epochs", "best_epoch", "best_validation", "final_loss", "skipped_negatives"}, {}};
      t.rows.push_back({std::to_string(config.epochs),
                        result.best_epoch ? std::to_string(*result.best_epoch) : "",
                        result.best_validation ? fixed(*result.best_validation) : "",
                        result.log.empty() ? "" : fixed(result.log.back().loss.total()),
                        std::to_string(result.skipped_negatives)});
      t.write_csv(out);
      return kExitOk;
    }

    if (classify_cmd->parsed()) {
      const auto [m, d] = load_eval_inputs(classify_opts, err);
      const auto thresholds = tune_thresholds(m, d);
      for (const auto& w : thresholds.warnings) err << "warning: " << w << '\n';
      Table t{{"kind", "name", "count", "tp", "fp", "tn", "fn", "accuracy", "precision",
               "recall", "f1"},
              {}};
      const auto& split = classify_opts.split;
      const auto& ins = pick_split(d.instance_of, split);
      const auto& sub = pick_split(d.sub_class_of, split);
      const auto& rel = pick_split(d.relational, split);
      if (!ins.empty()) {
        t.rows.push_back(report_cells("instanceOf", "", classify(m, thresholds, ins, d.vocab)));
      }
      if (!sub.empty()) {
        t.rows.push_back(report_cells("subClassOf", "", classify(m, thresholds, sub, d.vocab)));
      }
      if (!rel.empty()) {
        t.rows.push_back(report_cells("relational", "", classify(m, thresholds, rel, d.vocab)));
        for (Index r = 0; r < d.num_relations(); ++r) {
          std::vector<Labeled<RelationalTriple>> rows;
          for (const auto& row : rel)
            if (row.triple.relation == r) rows.push_back(row);
          if (rows.empty()) continue;
          t.rows.push_back(report_cells("relation", d.vocab.relations.name(r),
                                        classify(m, thresholds, rows, d.vocab)));
        }
      }
      t.write(out, classify_opts.parsed_format());
      return kExitOk;
    }

    if (link_cmd->parsed()) {
      const auto [m, d] = load_eval_inputs(link_opts, err);
      const TruthIndex truth(d);
      const auto tests = positive_triples(pick_split(d.relational, link_opts.split));
      const auto mode = setting == "raw" ? RankSetting::kRaw : RankSetting::kFilter;
      const auto report = link_predict(m, tests, truth, mode, m.config.threads);
      if (!ranks_file.empty()) {
        std::ofstream dump(ranks_file);
        if (!dump) throw io_error("cannot write " + ranks_file);
        for (const auto& q : report.ranks) {
          dump << q.query << ' ' << (q.direction == Side::kHead ? "head" : "tail") << ' '
               << q.raw_rank << ' ' << q.filter_rank << '\n';
        }
      }
      Table t{{"setting", "queries", "mrr_raw", "mrr_filter", "hits@1", "hits@3", "hits@10"},
              {}};
      t.rows.push_back({setting, std::to_string(report.queries), fixed(report.mrr_raw),
                        fixed(report.mrr_filter), fixed(report.hits1), fixed(report.hits3),
                        fixed(report.hits10)});
      t.write(out, link_opts.parsed_format());
      return kExitOk;
    }

    if (probe_cmd->parsed()) {
      const auto [m, d] = load_eval_inputs(probe_opts, err);
      const auto thresholds = tune_thresholds(m, d);
      for (const auto& w : thresholds.warnings) err << "warning: " << w << '\n';
      const auto report = transitivity_probe(m, thresholds, d);
      const auto cell = [](const std::optional<double>& v) {
        return v ? fixed(*v) : std::string("undefined");
      };
      Table t{{"rule", "derived", "positive_fraction"}, {}};
      t.rows.push_back({"instanceOf+subClassOf", std::to_string(report.instance_of_derived),
                        cell(report.instance_of)});
      t.rows.push_back({"subClassOf+subClassOf", std::to_string(report.sub_class_of_derived),
                        cell(report.sub_class_of)});
      t.write(out, probe_opts.parsed_format());
      return kExitOk;
    }

    if (import_cmd->parsed()) {
      Vocabulary vocab;
      vocab.concepts = ontoembed::detail::read_id_map(
          std::filesystem::path(vectors_data) / "concept2id.txt");
      const auto n = vocab.concepts.size();
      const auto file = read_concept_vector_file(vectors_in, n);
      const auto load = load_concept_vectors(file, n, vectors_dim, vectors_seed);
      for (const auto& w : load.warnings) err << "warning: " << w << '\n';
      ConceptVectorFile reduced;
      reduced.dim = vectors_dim;
      for (Index c = 0; c < n; ++c)
        if (load.present[c]) reduced.ids.push_back(c);
      reduced.rows.resize(static_cast<Eigen::Index>(reduced.ids.size()),
                          static_cast<Eigen::Index>(vectors_dim));
      for (std::size_t k = 0; k < reduced.ids.size(); ++k) {
        reduced.rows.row(static_cast<Eigen::Index>(k)) = load.vectors.row(reduced.ids[k]);
      }
      write_concept_vector_file(vectors_out, reduced);
      Table t{{"concepts", "rows", "missing", "zero_rows", "file_dim", "dim"}, {}};
      t.rows.push_back({std::to_string(n), std::to_string(reduced.ids.size()),
                        std::to_string(load.missing), std::to_string(load.zero_rows),
                        std::to_string(file.dim), std::to_string(vectors_dim)});
      t.write_csv(out);
      return kExitOk;
    }

    if (inspect_cmd->parsed()) {
      const auto info = inspect_checkpoint(inspect_path);
      out << "version " << info.version << '\n' << "epoch " << info.epoch << '\n';
      Table t{{"tensor", "rows", "cols"}, {}};
      for (const auto& tensor : info.tensors) {
        t.rows.push_back(
            {tensor.name, std::to_string(tensor.rows), std::to_string(tensor.cols)});
      }
      t.write_pretty(out);
      out << "config:\n" << info.config_text;
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << category_name(e.kind()) << ": " << e.what() << '\n';
    return category_exit(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: io: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << '\n';
    return 1;
  }
  return kExitUsage;
}

}  // namespace ontoembed::cli
