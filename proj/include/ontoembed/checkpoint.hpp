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

// Binary checkpoint container (little-endian):
//
//   "ONTOCKPT"  u32 version  u64 epoch
//   u32 len, config text ("key = value" lines)
//   u32 tensor count, then per tensor:
//     u32 len, name   u64 rows   u64 cols   rows*cols f64 (row-major)
//   u64 FNV-1a hash of every preceding byte

#pragma once

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <string_view>
#include <vector>

#include "ontoembed/config.hpp"
#include "ontoembed/model.hpp"

namespace ontoembed {

inline constexpr char kCheckpointMagic[8] = {'O', 'N', 'T', 'O',
                                             'C', 'K', 'P', 'T'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct TensorInfo {
  std::string name;
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
};

struct CheckpointInfo {
  std::uint32_t version = 0;
  std::uint64_t epoch = 0;
  std::string config_text;
  std::vector<TensorInfo> tensors;
};

namespace detail {

inline std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

class ByteWriter {
 public:
  template <class T>
  void put(const T& value) {
    char raw[sizeof(T)];
    std::memcpy(raw, &value, sizeof(T));
    bytes_.append(raw, sizeof(T));
  }
  void put_string(std::string_view s) {
    put(static_cast<std::uint32_t>(s.size()));
    bytes_.append(s);
  }
  void put_matrix(std::string_view name, const double* data,
                  std::uint64_t rows, std::uint64_t cols) {
    put_string(name);
    put(rows);
    put(cols);
    bytes_.append(reinterpret_cast<const char*>(data),
                  static_cast<std::size_t>(rows * cols * sizeof(double)));
  }
  std::string& bytes() { return bytes_; }

 private:
  std::string bytes_;
};

class ByteReader {
 public:
  explicit ByteReader(std::string_view bytes) : bytes_(bytes) {}

  template <class T>
  T get() {
    need(sizeof(T));
    T value;
    std::memcpy(&value, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }
  std::string get_string() {
    const auto n = get<std::uint32_t>();
    need(n);
    std::string s(bytes_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  const char* take(std::size_t n) {
    need(n);
    const char* p = bytes_.data() + pos_;
    pos_ += n;
    return p;
  }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw data_error("checkpoint is truncated");
  }
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

inline std::string read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open checkpoint " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

// Validates framing and checksum; returns the payload without the hash.
inline std::string_view checked_payload(std::string_view bytes) {
  if (bytes.size() < sizeof(kCheckpointMagic) + sizeof(std::uint64_t)) {
    throw data_error("checkpoint is truncated");
  }
  if (std::memcmp(bytes.data(), kCheckpointMagic, sizeof kCheckpointMagic) != 0) {
    throw data_error("not a checkpoint file (bad magic)");
  }
  const auto payload = bytes.substr(0, bytes.size() - sizeof(std::uint64_t));
  std::uint64_t stored;
  std::memcpy(&stored, bytes.data() + payload.size(), sizeof stored);
  if (stored != fnv1a(payload)) {
    throw data_error("checkpoint is corrupted or truncated (checksum mismatch)");
  }
  return payload;
}

}  // namespace detail

inline void save_checkpoint(const ModelState& state,
                            const std::filesystem::path& path) {
  detail::ByteWriter w;
  w.bytes().append(kCheckpointMagic, sizeof kCheckpointMagic);
  w.put(kCheckpointVersion);
  w.put(state.epoch);
  w.put_string(format_config(state.config));
  const auto& e = state.ext;
  const auto& in = state.in;
  w.put(std::uint32_t{7});
  const auto put = [&w](std::string_view name, const auto& m) {
    w.put_matrix(name, m.data(), static_cast<std::uint64_t>(m.rows()),
                 static_cast<std::uint64_t>(m.cols()));
  };
  put("ext.instances", e.instances);
  put("ext.relations", e.relations);
  put("ext.centers", e.centers);
  put("ext.axes", e.axes);
  put("ext.radii", e.radii);
  put("int.concepts", in.concepts);
  put("int.bridge", in.bridge_matrix);
  w.put(detail::fnv1a(w.bytes()));

  // Exclusive write: temp file, then rename over the target.
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot write checkpoint " + tmp.string());
    out.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
    if (!out) throw io_error("failed writing checkpoint " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

namespace detail {

struct RawTensor {
  TensorInfo info;
  const char* data = nullptr;
};

inline std::vector<RawTensor> read_tensors(ByteReader& r,
                                           CheckpointInfo& info) {
  const auto count = r.get<std::uint32_t>();
  std::vector<RawTensor> tensors;
  for (std::uint32_t k = 0; k < count; ++k) {
    RawTensor t;
    t.info.name = r.get_string();
    t.info.rows = r.get<std::uint64_t>();
    t.info.cols = r.get<std::uint64_t>();
    t.data = r.take(static_cast<std::size_t>(t.info.rows * t.info.cols *
                                             sizeof(double)));
    info.tensors.push_back(t.info);
    tensors.push_back(t);
  }
  return tensors;
}

inline CheckpointInfo read_header(ByteReader& r) {
  CheckpointInfo info;
  r.take(sizeof kCheckpointMagic);
  info.version = r.get<std::uint32_t>();
  if (info.version != kCheckpointVersion) {
    throw data_error("checkpoint version mismatch: file has " +
                     std::to_string(info.version) + ", expected " +
                     std::to_string(kCheckpointVersion));
  }
  info.epoch = r.get<std::uint64_t>();
  info.config_text = r.get_string();
  return info;
}

}  // namespace detail

inline CheckpointInfo inspect_checkpoint(const std::filesystem::path& path) {
  const auto bytes = detail::read_file_bytes(path);
  detail::ByteReader r(detail::checked_payload(bytes));
  auto info = detail::read_header(r);
  detail::read_tensors(r, info);
  return info;
}

inline ModelState load_checkpoint(const std::filesystem::path& path) {
  const auto bytes = detail::read_file_bytes(path);
  detail::ByteReader r(detail::checked_payload(bytes));
  auto info = detail::read_header(r);
  const auto tensors = detail::read_tensors(r, info);

  ModelState state;
  state.epoch = info.epoch;
  state.config = parse_config(info.config_text);
  const auto fetch = [&](std::string_view name, auto& m) {
    for (const auto& t : tensors) {
      if (t.info.name != name) continue;
      m.resize(static_cast<Eigen::Index>(t.info.rows),
               static_cast<Eigen::Index>(t.info.cols));
      std::memcpy(m.data(), t.data,
                  static_cast<std::size_t>(t.info.rows * t.info.cols *
                                           sizeof(double)));
      return;
    }
    throw data_error("checkpoint is missing tensor '" + std::string(name) + "'");
  };
  Matrix radii;
  fetch("ext.instances", state.ext.instances);
  fetch("ext.relations", state.ext.relations);
  fetch("ext.centers", state.ext.centers);
  fetch("ext.axes", state.ext.axes);
  fetch("ext.radii", radii);
  fetch("int.concepts", state.in.concepts);
  fetch("int.bridge", state.in.bridge_matrix);
  if (radii.cols() != 1 && radii.size() != 0) {
    throw data_error("checkpoint tensor 'ext.radii' must be a column");
  }
  state.ext.radii = Eigen::Map<const Vector>(radii.data(), radii.rows());
  state.in.bridge = state.config.bridge;
  state.in.init = state.config.init;
  const auto d = state.ext.instances.cols();
  if (state.ext.relations.cols() != d || state.ext.centers.cols() != d ||
      state.ext.axes.cols() != d || state.in.concepts.cols() != d ||
      state.ext.centers.rows() != state.ext.axes.rows() ||
      state.ext.centers.rows() != state.ext.radii.rows() ||
      (state.in.bridge == BridgeKind::kMatrix &&
       (state.in.bridge_matrix.rows() != d || state.in.bridge_matrix.cols() != d))) {
    throw data_error("checkpoint tensor shapes are inconsistent");
  }
  return state;
}

}  // namespace ontoembed
