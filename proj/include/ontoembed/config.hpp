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

#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ontoembed/common.hpp"
#include "ontoembed/extensional.hpp"
#include "ontoembed/intensional.hpp"
#include "ontoembed/ontology.hpp"

namespace ontoembed {

enum class SamplingMode { kUniform, kBernoulli };
enum class SelectionMetric { kNone, kAccuracy, kHits10 };

struct TrainingConfig {
  std::size_t dim = 100;
  double lr = 0.001;
  double margin_rel = 1.0;
  double margin_ins = 0.4;
  double margin_sub = 0.3;
  double alpha = 0.5;
  std::size_t epochs = 1000;
  std::size_t batch_size = 1024;
  std::size_t negatives = 1;  // per positive, per pass
  SamplingMode sampling = SamplingMode::kUniform;
  BridgeKind bridge = BridgeKind::kIdentity;
  InitMode init = InitMode::kUnpretrained;
  RelationNorm norm = RelationNorm::kL2Squared;
  bool train_intensional = true;
  std::uint64_t seed = 42;
  std::size_t threads = 1;
  std::size_t eval_every = 0;  // 0 disables validation-based selection
  SelectionMetric select_by = SelectionMetric::kAccuracy;
  std::string concept_vectors;  // required when init == kPretrained

  friend bool operator==(const TrainingConfig&,
                         const TrainingConfig&) = default;
};

inline void validate(const TrainingConfig& c) {
  if (c.dim == 0) throw usage_error("dim must be >= 1");
  if (!(c.lr > 0)) throw usage_error("lr must be > 0");
  if (!(c.margin_rel > 0) || !(c.margin_ins > 0) || !(c.margin_sub > 0)) {
    throw usage_error("margins must be > 0");
  }
  if (!(c.alpha >= 0)) throw usage_error("alpha must be >= 0");
  if (c.epochs == 0) throw usage_error("epochs must be >= 1");
  if (c.batch_size == 0) throw usage_error("batch_size must be >= 1");
  if (c.negatives == 0) throw usage_error("negatives must be >= 1");
  if (c.threads == 0) throw usage_error("threads must be >= 1");
  if (c.init == InitMode::kPretrained && c.concept_vectors.empty()) {
    throw usage_error("init = pre requires concept_vectors");
  }
}

namespace detail {

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_double(std::string_view key, const std::string& v) {
  char* end = nullptr;
  const double out = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size()) {
    throw usage_error("config key '" + std::string(key) +
                      "': expected a number, got '" + v + "'");
  }
  return out;
}

inline std::uint64_t parse_unsigned(std::string_view key, const std::string& v) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw usage_error("config key '" + std::string(key) +
                      "': expected a non-negative integer, got '" + v + "'");
  }
  return out;
}

template <class E>
struct EnumName {
  E value;
  std::string_view name;
};

template <class E, std::size_t N>
E parse_enum(std::string_view key, const std::string& v,
             const EnumName<E> (&names)[N]) {
  for (const auto& n : names)
    if (n.name == v) return n.value;
  std::string allowed;
  for (const auto& n : names) allowed += (allowed.empty() ? "" : "|") + std::string(n.name);
  throw usage_error("config key '" + std::string(key) + "': expected " +
                    allowed + ", got '" + v + "'");
}

template <class E, std::size_t N>
std::string enum_name(E v, const EnumName<E> (&names)[N]) {
  for (const auto& n : names)
    if (n.value == v) return std::string(n.name);
  return "?";
}

inline constexpr EnumName<SamplingMode> kSamplingNames[] = {
    {SamplingMode::kUniform, "unif"}, {SamplingMode::kBernoulli, "bern"}};
inline constexpr EnumName<BridgeKind> kBridgeNames[] = {
    {BridgeKind::kIdentity, "eye"}, {BridgeKind::kMatrix, "mat"}};
inline constexpr EnumName<InitMode> kInitNames[] = {
    {InitMode::kUnpretrained, "unp"}, {InitMode::kPretrained, "pre"}};
inline constexpr EnumName<RelationNorm> kNormNames[] = {
    {RelationNorm::kL2Squared, "l2"}, {RelationNorm::kL1, "l1"}};
inline constexpr EnumName<SelectionMetric> kSelectNames[] = {
    {SelectionMetric::kNone, "none"},
    {SelectionMetric::kAccuracy, "accuracy"},
    {SelectionMetric::kHits10, "hits10"}};
inline constexpr EnumName<bool> kBoolNames[] = {{true, "true"},
                                                {false, "false"}};

}  // namespace detail

// One entry per config key; the CLI derives one flag from each.
struct ConfigField {
  std::string_view key;
  std::string_view help;
  std::function<void(TrainingConfig&, const std::string&)> set;
  std::function<std::string(const TrainingConfig&)> get;
};

inline const std::vector<ConfigField>& config_fields() {
  using namespace detail;
  static const std::vector<ConfigField> fields = [] {
    std::vector<ConfigField> f;
    const auto size_field = [&f](std::string_view key, std::string_view help,
                                 std::size_t TrainingConfig::*m) {
      f.push_back({key, help,
                   [key, m](TrainingConfig& c, const std::string& v) {
                     c.*m = static_cast<std::size_t>(parse_unsigned(key, v));
                   },
                   [m](const TrainingConfig& c) { return std::to_string(c.*m); }});
    };
    const auto double_field = [&f](std::string_view key, std::string_view help,
                                   double TrainingConfig::*m) {
      f.push_back({key, help,
                   [key, m](TrainingConfig& c, const std::string& v) {
                     c.*m = parse_double(key, v);
                   },
                   [m](const TrainingConfig& c) { return format_double(c.*m); }});
    };
    const auto enum_field = [&f](std::string_view key, std::string_view help,
                                 auto TrainingConfig::*m, const auto& names) {
      f.push_back({key, help,
                   [key, m, &names](TrainingConfig& c, const std::string& v) {
                     c.*m = parse_enum(key, v, names);
                   },
                   [m, &names](const TrainingConfig& c) {
                     return enum_name(c.*m, names);
                   }});
    };
    size_field("dim", "embedding dimension", &TrainingConfig::dim);
    double_field("lr", "SGD learning rate", &TrainingConfig::lr);
    double_field("margin_rel", "margin for relational triples",
                 &TrainingConfig::margin_rel);
    double_field("margin_ins", "margin for instanceOf triples",
                 &TrainingConfig::margin_ins);
    double_field("margin_sub", "margin for subClassOf triples",
                 &TrainingConfig::margin_sub);
    double_field("alpha", "weight of the intensional scores",
                 &TrainingConfig::alpha);
    size_field("epochs", "number of training epochs", &TrainingConfig::epochs);
    size_field("batch_size", "positives per SGD step",
               &TrainingConfig::batch_size);
    size_field("negatives", "negatives per positive",
               &TrainingConfig::negatives);
    enum_field("sampling", "corruption scheme: unif|bern",
               &TrainingConfig::sampling, kSamplingNames);
    enum_field("bridge", "instance bridge: eye|mat", &TrainingConfig::bridge,
               kBridgeNames);
    enum_field("init", "intensional init: unp|pre", &TrainingConfig::init,
               kInitNames);
    enum_field("norm", "relational residual norm: l2|l1",
               &TrainingConfig::norm, kNormNames);
    enum_field("train_intensional",
               "update intensional concept vectors: true|false",
               &TrainingConfig::train_intensional, kBoolNames);
    f.push_back({"seed", "random seed",
                 [](TrainingConfig& c, const std::string& v) {
                   c.seed = parse_unsigned("seed", v);
                 },
                 [](const TrainingConfig& c) { return std::to_string(c.seed); }});
    size_field("threads", "worker threads for gradient computation",
               &TrainingConfig::threads);
    size_field("eval_every", "validate every N epochs (0 = never)",
               &TrainingConfig::eval_every);
    enum_field("select_by", "checkpoint selection: none|accuracy|hits10",
               &TrainingConfig::select_by, kSelectNames);
    f.push_back({"concept_vectors", "encoder vector file for init = pre",
                 [](TrainingConfig& c, const std::string& v) {
                   c.concept_vectors = v;
                 },
                 [](const TrainingConfig& c) { return c.concept_vectors; }});
    return f;
  }();
  return fields;
}

inline void set_config_value(TrainingConfig& config, std::string_view key,
                             const std::string& value) {
  for (const auto& field : config_fields()) {
    if (field.key == key) {
      field.set(config, value);
      return;
    }
  }
  throw usage_error("unknown config key '" + std::string(key) + "'");
}

// "key = value" lines; '#' starts a comment.
inline TrainingConfig parse_config(std::string_view text,
                                   TrainingConfig config = {}) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = detail::trim(line.substr(0, line.find('#')));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw usage_error("config line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    }
    set_config_value(config, detail::trim(std::string_view(body).substr(0, eq)),
                     detail::trim(std::string_view(body).substr(eq + 1)));
  }
  return config;
}

inline TrainingConfig read_config_file(const std::filesystem::path& path,
                                       TrainingConfig config = {}) {
  std::ifstream in(path);
  if (!in) throw usage_error("cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), std::move(config));
}

inline std::string format_config(const TrainingConfig& config) {
  std::string out;
  for (const auto& field : config_fields()) {
    out += std::string(field.key) + " = " + field.get(config) + "\n";
  }
  return out;
}

}  // namespace ontoembed
