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

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace ontoembed {

using Index = std::uint32_t;

// Row-major so that a row is one contiguous embedding.
using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

// Failure categories; the CLI maps each one onto a distinct exit code.
enum class ErrorKind { kUsage, kData, kNumeric, kIo };

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage:
      return "usage";
    case ErrorKind::kData:
      return "data";
    case ErrorKind::kNumeric:
      return "numeric";
    case ErrorKind::kIo:
      return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error data_error(const std::string& message) {
  return Error(ErrorKind::kData, message);
}
inline Error numeric_error(const std::string& message) {
  return Error(ErrorKind::kNumeric, message);
}
inline Error io_error(const std::string& message) {
  return Error(ErrorKind::kIo, message);
}
inline Error usage_error(const std::string& message) {
  return Error(ErrorKind::kUsage, message);
}

using Rng = std::mt19937_64;

// Independent, reproducible generator for one purpose (init, an epoch, ...).
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

namespace streams {
inline constexpr std::uint64_t kExtensionalInit = 1;
inline constexpr std::uint64_t kIntensionalInit = 2;
inline constexpr std::uint64_t kBridgeInit = 3;
inline constexpr std::uint64_t kEvalNegatives = 7;
inline constexpr std::uint64_t kSubsample = 8;
inline constexpr std::uint64_t kEpochBase = 1000;
}  // namespace streams

// Uniform index in [0, n). Avoids std::uniform_int_distribution so that
// draws are identical across standard library implementations.
inline Index uniform_index(Rng& rng, Index n) {
  return static_cast<Index>(rng() % n);
}

inline double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// [x]_+ that keeps NaN, unlike std::max(0.0, x), so divergence stays visible.
inline double positive_part(double x) { return x < 0.0 ? 0.0 : x; }

}  // namespace ontoembed
