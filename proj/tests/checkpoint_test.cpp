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

#include "ontoembed/checkpoint.hpp"

#include <gtest/gtest.h>

#include "ontoembed/synthetic.hpp"
#include "ontoembed/training.hpp"
#include "test_util.hpp"

namespace ontoembed {
namespace {

TrainingConfig small_config() {
  TrainingConfig c;
  c.dim = 6;
  c.epochs = 2;
  c.batch_size = 200;
  c.lr = 0.02;
  c.seed = 17;
  c.bridge = BridgeKind::kMatrix;
  return c;
}

void expect_bit_identical(const ModelState& a, const ModelState& b) {
  EXPECT_EQ(a.epoch, b.epoch);
  EXPECT_EQ(a.config, b.config);
  EXPECT_EQ(a.ext.instances, b.ext.instances);
  EXPECT_EQ(a.ext.relations, b.ext.relations);
  EXPECT_EQ(a.ext.centers, b.ext.centers);
  EXPECT_EQ(a.ext.axes, b.ext.axes);
  EXPECT_EQ(a.ext.radii, b.ext.radii);
  EXPECT_EQ(a.in.concepts, b.in.concepts);
  EXPECT_EQ(a.in.bridge_matrix, b.in.bridge_matrix);
  EXPECT_EQ(a.in.bridge, b.in.bridge);
}

class CheckpointTest : public ::testing::Test {
 protected:
  CheckpointTest() : dir_("ckpt"), syn_(make_synthetic_ontology({})) {}
  testutil::TempDir dir_;
  SyntheticOntology syn_;
};

TEST_F(CheckpointTest, RoundTripIsBitIdentical) {
  const auto trained = train(syn_.dataset, small_config()).state;
  save_checkpoint(trained, dir_ / "a.ckpt");
  const auto loaded = load_checkpoint(dir_ / "a.ckpt");
  expect_bit_identical(trained, loaded);
  save_checkpoint(loaded, dir_ / "b.ckpt");
  EXPECT_EQ(testutil::read_file(dir_ / "a.ckpt"), testutil::read_file(dir_ / "b.ckpt"));
  EXPECT_FALSE(std::filesystem::exists(dir_ / "a.ckpt.tmp"));
}

TEST_F(CheckpointTest, IdentityBridgeAndSpecialValues) {
  auto config = small_config();
  config.bridge = BridgeKind::kIdentity;
  config.concept_vectors = "some path/with spaces.txt";
  auto state = init_model(syn_.dataset, config);
  state.ext.instances(0, 0) = -0.0;
  state.ext.instances(1, 1) = std::numeric_limits<double>::denorm_min();
  save_checkpoint(state, dir_ / "c.ckpt");
  const auto loaded = load_checkpoint(dir_ / "c.ckpt");
  expect_bit_identical(state, loaded);
  EXPECT_TRUE(std::signbit(loaded.ext.instances(0, 0)));
}

TEST_F(CheckpointTest, InspectListsTensors) {
  auto state = init_model(syn_.dataset, small_config());
  state.epoch = 9;
  save_checkpoint(state, dir_ / "d.ckpt");
  const auto info = inspect_checkpoint(dir_ / "d.ckpt");
  EXPECT_EQ(info.version, kCheckpointVersion);
  EXPECT_EQ(info.epoch, 9u);
  EXPECT_EQ(info.config_text, format_config(state.config));
  ASSERT_EQ(info.tensors.size(), 7u);
  EXPECT_EQ(info.tensors[0].name, "ext.instances");
  EXPECT_EQ(info.tensors[0].rows, 500u);
  EXPECT_EQ(info.tensors[0].cols, 6u);
  EXPECT_EQ(info.tensors[6].name, "int.bridge");
  EXPECT_EQ(info.tensors[6].rows, 6u);
}

void expect_load_error(const std::filesystem::path& path, const std::string& fragment) {
  try {
    load_checkpoint(path);
    ADD_FAILURE() << "loaded a damaged checkpoint";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
  }
}

TEST_F(CheckpointTest, CorruptedByteIsDetected) {
  save_checkpoint(init_model(syn_.dataset, small_config()), dir_ / "e.ckpt");
  auto bytes = testutil::read_file(dir_ / "e.ckpt");
  bytes[bytes.size() / 2] ^= 0x01;
  testutil::write_file(dir_ / "e.ckpt", bytes);
  expect_load_error(dir_ / "e.ckpt", "checksum");
}

TEST_F(CheckpointTest, TruncationIsDetected) {
  save_checkpoint(init_model(syn_.dataset, small_config()), dir_ / "f.ckpt");
  const auto bytes = testutil::read_file(dir_ / "f.ckpt");
  for (const std::size_t keep : {std::size_t{0}, std::size_t{5}, std::size_t{20}, bytes.size() - 1}) {
    testutil::write_file(dir_ / "f.ckpt", bytes.substr(0, keep));
    EXPECT_THROW(load_checkpoint(dir_ / "f.ckpt"), Error) << keep;
  }
}

TEST_F(CheckpointTest, BadMagicAndVersionMismatch) {
  save_checkpoint(init_model(syn_.dataset, small_config()), dir_ / "g.ckpt");
  auto bytes = testutil::read_file(dir_ / "g.ckpt");
  // Rewrite the version field and re-seal the checksum.
  std::string payload = bytes.substr(0, bytes.size() - 8);
  payload[8] = 2;
  const std::uint64_t hash = detail::fnv1a(payload);
  std::string sealed = payload;
  sealed.append(reinterpret_cast<const char*>(&hash), sizeof hash);
  testutil::write_file(dir_ / "g.ckpt", sealed);
  expect_load_error(dir_ / "g.ckpt", "version mismatch");

  testutil::write_file(dir_ / "h.ckpt", "NOTACKPT" + std::string(64, '\0'));
  expect_load_error(dir_ / "h.ckpt", "not a checkpoint");
  expect_load_error(dir_ / "absent.ckpt", "absent.ckpt");
}

TEST_F(CheckpointTest, ResumeEqualsUninterruptedRun) {
  auto config = small_config();
  config.epochs = 5;
  config.sampling = SamplingMode::kBernoulli;
  const auto full = train(syn_.dataset, config);

  auto first = config;
  first.epochs = 2;
  TrainOptions options;
  options.checkpoint_path = dir_ / "resume.ckpt";
  train(syn_.dataset, first, options);
  auto resumed = load_checkpoint(dir_ / "resume.ckpt");
  EXPECT_EQ(resumed.epoch, 2u);
  resumed.config.epochs = 5;
  const auto rest = continue_training(std::move(resumed), syn_.dataset);
  ASSERT_EQ(rest.log.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(rest.log[k].epoch, full.log[k + 2].epoch);
    EXPECT_EQ(rest.log[k].loss.total(), full.log[k + 2].loss.total());
  }
  expect_bit_identical(rest.state, full.state);
}

TEST(ConfigTest, ParseWithCommentsAndOverrides) {
  const auto c = parse_config(
      "# training\n"
      "dim = 50\n"
      "lr=0.01   # inline comment\n"
      "sampling = bern\n"
      "bridge = mat\n"
      "\n"
      "train_intensional = false\n"
      "seed = 18446744073709551615\n");
  EXPECT_EQ(c.dim, 50u);
  EXPECT_EQ(c.lr, 0.01);
  EXPECT_EQ(c.sampling, SamplingMode::kBernoulli);
  EXPECT_EQ(c.bridge, BridgeKind::kMatrix);
  EXPECT_FALSE(c.train_intensional);
  EXPECT_EQ(c.seed, std::numeric_limits<std::uint64_t>::max());
  EXPECT_EQ(c.margin_ins, 0.4);  // untouched default
}

TEST(ConfigTest, FormatParseRoundTrip) {
  TrainingConfig c;
  c.lr = 0.1 + 0.2;  // not exactly representable in short decimal
  c.alpha = 1.0 / 3.0;
  c.norm = RelationNorm::kL1;
  c.select_by = SelectionMetric::kHits10;
  c.concept_vectors = "/tmp/vectors.txt";
  EXPECT_EQ(parse_config(format_config(c)), c);
}

TEST(ConfigTest, Errors) {
  const auto usage = [](const std::string& text) {
    try {
      parse_config(text);
      ADD_FAILURE() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kUsage) << text;
    }
  };
  usage("dimension = 3\n");
  usage("dim 3\n");
  usage("dim = -3\n");
  usage("dim = 3x\n");
  usage("lr = fast\n");
  usage("sampling = random\n");
  TrainingConfig c;
  c.init = InitMode::kPretrained;
  EXPECT_THROW(validate(c), Error);
  c = {};
  c.lr = 0;
  EXPECT_THROW(validate(c), Error);
}

}  // namespace
}  // namespace ontoembed
