// Copyright 2026 The cvgan Authors.
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

#include "cvgan/gan.h"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "test_util.h"

namespace cvgan {
namespace {

using ::cvgan::testing::MaxRelativeError;
using ::cvgan::testing::NumericGradient;
using ::cvgan::testing::RandomTensor;

RealTensor Logits(std::size_t rows, std::size_t width,
                  std::vector<double> values) {
  return RealTensor({rows, width}, std::move(values));
}

RealTensor RandomLogits(std::size_t rows, std::size_t width,
                        std::mt19937_64& rng, double scale = 3.0) {
  std::normal_distribution<double> n(0.0, scale);
  RealTensor t({rows, width});
  for (double& v : t.data()) v = n(rng);
  return t;
}

std::vector<double> SoftmaxOf(std::span<const double> l) {
  const double lse = LogSumExp(l);
  std::vector<double> p;
  for (double v : l) p.push_back(std::exp(v - lse));
  return p;
}

TEST(LogSumExpTest, Examples) {
  EXPECT_NEAR(LogSumExp(std::vector<double>(10, 0.0)), std::log(10.0), 1e-15);
  EXPECT_EQ(LogSumExp(std::vector<double>{-3.5}), -3.5);
  EXPECT_NEAR(LogSumExp(std::vector<double>{1000.0, 0.0, 0.0}), 1000.0,
              1e-12);
  EXPECT_THROW(LogSumExp(std::vector<double>{}), std::invalid_argument);
}

TEST(FakeProbabilityTest, Examples) {
  EXPECT_DOUBLE_EQ(FakeProbability(std::vector<double>{0.7, 0.7}), 0.5);
  EXPECT_LT(FakeProbability(std::vector<double>{0.0, 0.0, -800.0}), 1e-300);
  EXPECT_NEAR(FakeProbability(std::vector<double>{0.0, 0.0, 0.0}), 1.0 / 3.0,
              1e-12);
}

TEST(FakeProbabilityTest, EqualsSoftmaxMass) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t width = 2 + trial % 9;
    const RealTensor l = RandomLogits(1, width, rng, 5.0);
    EXPECT_NEAR(FakeProbability(l.data()), SoftmaxOf(l.data()).back(), 1e-12);
  }
}

TEST(DiscriminatorLossTest, HandValues) {
  const int label = 1;
  const auto confident =
      ComputeDiscriminatorLoss(Logits(1, 3, {1e4, 0.0, 0.0}), {&label, 1},
                               Logits(0, 3, {}), Logits(0, 3, {}));
  EXPECT_EQ(confident.loss.l_labeled, 0.0);

  const auto half = ComputeDiscriminatorLoss(
      Logits(0, 2, {}), {}, Logits(1, 2, {0.0, 0.0}), Logits(0, 2, {}));
  EXPECT_NEAR(half.loss.l_unlabeled, std::numbers::ln2, 1e-12);

  // p_fake = sigmoid(-log 3) = 1/4.
  const auto quarter =
      ComputeDiscriminatorLoss(Logits(0, 2, {}), {}, Logits(0, 2, {}),
                               Logits(1, 2, {0.0, -std::log(3.0)}));
  EXPECT_NEAR(quarter.loss.l_generated, 2.0 * std::numbers::ln2, 1e-12);
}

TEST(DiscriminatorLossTest, AdditivityAndShiftInvariance) {
  std::mt19937_64 rng(2);
  const RealTensor l = RandomLogits(5, 4, rng);
  const RealTensor u = RandomLogits(7, 4, rng);
  const RealTensor f = RandomLogits(6, 4, rng);
  const std::vector<int> labels = {1, 3, 2, 2, 1};
  const LossBreakdown a = ComputeDiscriminatorLoss(l, labels, u, f).loss;
  EXPECT_EQ(a.l_total, a.l_labeled + a.l_unlabeled + a.l_generated);

  for (double c : {-250.0, 17.0, 1e3}) {
    auto shifted = [c](RealTensor t) {
      for (double& v : t.data()) v += c;
      return t;
    };
    const LossBreakdown b =
        ComputeDiscriminatorLoss(shifted(l), labels, shifted(u), shifted(f))
            .loss;
    EXPECT_NEAR(b.l_labeled, a.l_labeled, 1e-10);
    EXPECT_NEAR(b.l_unlabeled, a.l_unlabeled, 1e-10);
    EXPECT_NEAR(b.l_generated, a.l_generated, 1e-10);
    EXPECT_NEAR(ComputeGeneratorLoss(shifted(f)).loss,
                ComputeGeneratorLoss(f).loss, 1e-10);
    for (std::size_t i = 0; i < 6; ++i) {
      EXPECT_NEAR(FakeProbability(shifted(f).data().subspan(4 * i, 4)),
                  FakeProbability(f.data().subspan(4 * i, 4)), 1e-10);
    }
  }
}

TEST(DiscriminatorLossTest, FiniteForHugeLogits) {
  const std::vector<int> labels = {2, 1};
  for (double m : {1e4, -1e4}) {
    const RealTensor l = Logits(2, 3, {m, -m, 0.0, -m, m, m});
    const RealTensor f = Logits(2, 3, {m, 0.0, -m, -m, -m, m});
    const auto d = ComputeDiscriminatorLoss(l, labels, f, f);
    for (double v : {d.loss.l_labeled, d.loss.l_unlabeled, d.loss.l_generated,
                     d.loss.l_total, ComputeGeneratorLoss(f).loss}) {
      EXPECT_TRUE(std::isfinite(v)) << v;
    }
    for (double g : d.grad_labeled.data()) EXPECT_TRUE(std::isfinite(g));
    for (double g : d.grad_fake.data()) EXPECT_TRUE(std::isfinite(g));
  }
}

TEST(DiscriminatorLossTest, RejectsOutOfRangeLabels) {
  const RealTensor l = Logits(1, 3, {0.0, 0.0, 0.0});
  const RealTensor none = Logits(0, 3, {});
  for (int bad : {0, 3, -1}) {
    EXPECT_THROW(ComputeDiscriminatorLoss(l, {&bad, 1}, none, none),
                 std::out_of_range);
  }
}

TEST(DiscriminatorLossTest, GradientsMatchFiniteDifferences) {
  std::mt19937_64 rng(3);
  RealTensor l = RandomLogits(3, 4, rng);
  RealTensor u = RandomLogits(4, 4, rng);
  RealTensor f = RandomLogits(2, 4, rng);
  const std::vector<int> labels = {3, 1, 2};
  const auto analytic = ComputeDiscriminatorLoss(l, labels, u, f);
  auto total = [&] {
    return ComputeDiscriminatorLoss(l, labels, u, f).loss.l_total;
  };
  EXPECT_LT(MaxRelativeError(analytic.grad_labeled.data(),
                             NumericGradient(l.data(), total)),
            1e-5);
  EXPECT_LT(MaxRelativeError(analytic.grad_unlabeled.data(),
                             NumericGradient(u.data(), total)),
            1e-5);
  EXPECT_LT(MaxRelativeError(analytic.grad_fake.data(),
                             NumericGradient(f.data(), total)),
            1e-5);
  const auto g = ComputeGeneratorLoss(f);
  EXPECT_LT(MaxRelativeError(g.grad_fake.data(),
                             NumericGradient(f.data(), [&] {
                               return ComputeGeneratorLoss(f).loss;
                             })),
            1e-5);
}

TEST(GeneratorLossTest, Examples) {
  EXPECT_NEAR(ComputeGeneratorLoss(Logits(2, 2, {0.0, -1e4, 5.0, -1e4})).loss,
              0.0, 1e-6);
  EXPECT_NEAR(ComputeGeneratorLoss(Logits(1, 2, {0.0, 0.0})).loss,
              std::numbers::ln2, 1e-12);
  // Strictly increasing while p_fake is inside the clamp, flat beyond it.
  double previous = -1.0;
  for (double fake = -40.0; fake <= 40.0; fake += 0.5) {
    const RealTensor l = Logits(1, 3, {0.0, 0.0, fake});
    const double p = FakeProbability(l.data());
    const double loss = ComputeGeneratorLoss(l).loss;
    if (p > kProbabilityClamp && p < 1.0 - kProbabilityClamp) {
      EXPECT_GT(loss, previous) << fake;
    } else {
      EXPECT_GE(loss, previous) << fake;
    }
    previous = loss;
  }
}

std::vector<ParamView> ScalarParam(std::vector<double>& w,
                                   std::vector<double>& g) {
  return {{"w", {w.size()}, w, g}};
}

TEST(AdamTest, FirstStepIsSignedLearningRate) {
  std::vector<double> w = {1.0, -2.0, 0.5}, g = {0.3, -40.0, 1e-3};
  Adam adam(AdamConfig{});
  adam.Step(ScalarParam(w, g));
  EXPECT_NEAR(w[0], 1.0 - 0.0005, 1e-9);
  EXPECT_NEAR(w[1], -2.0 + 0.0005, 1e-9);
  EXPECT_NEAR(w[2], 0.5 - 0.0005, 1e-8);
  EXPECT_EQ(adam.step(), 1u);
}

TEST(AdamTest, ZeroGradientLeavesParameters) {
  std::vector<double> w = {1.0, -2.0}, g = {0.0, 0.0};
  Adam adam(AdamConfig{});
  for (int i = 0; i < 100; ++i) adam.Step(ScalarParam(w, g));
  EXPECT_EQ(w, (std::vector<double>{1.0, -2.0}));
  EXPECT_EQ(adam.step(), 100u);
}

TEST(AdamTest, MinimizesQuadratic) {
  std::vector<double> w = {0.0}, g = {0.0};
  Adam adam(AdamConfig{.lr = 0.05});
  for (int i = 0; i < 2000; ++i) {
    g[0] = 2.0 * (w[0] - 3.0);
    adam.Step(ScalarParam(w, g));
  }
  EXPECT_LT(std::abs(w[0] - 3.0), 1e-4);
}

TEST(AdamTest, ShapeMismatch) {
  std::vector<double> w = {0.0, 1.0}, g = {0.0, 1.0};
  Adam adam(AdamConfig{});
  adam.Step(ScalarParam(w, g));
  std::vector<double> w3 = {0.0, 1.0, 2.0}, g3 = {0.0, 1.0, 2.0};
  EXPECT_THROW(adam.Step(ScalarParam(w3, g3)), ShapeError);
}

GeneratorConfig TinyGenerator() {
  return {.latent = 3, .patch_size = 4, .widths = {2, 2}, .memory = 2};
}

DiscriminatorConfig TinyDiscriminator() {
  return {.patch_size = 4, .classes = 2, .widths = {2, 2}, .memory = 2};
}

TEST(GeneratorTest, ShapeAndDeterminism) {
  Generator g(GeneratorConfig{});
  std::mt19937_64 rng(4);
  g.Initialize(rng);
  std::mt19937_64 zrng(5);
  const ComplexTensor z = g.SampleLatent(3, zrng);
  const ComplexTensor a = g.Forward(z, Mode::kInference);
  EXPECT_EQ(a.shape(), (Shape{3, kPatchChannels, 32, 32}));
  EXPECT_EQ(g.Forward(z, Mode::kInference), a);
  EXPECT_THROW(g.Forward(ComplexTensor({3, 99}), Mode::kInference),
               ShapeError);
  EXPECT_THROW(Generator({.patch_size = 12}), std::invalid_argument);
}

TEST(GeneratorTest, ZeroLatentGivesZeroOutputAtInitialization) {
  Generator g(TinyGenerator());
  std::mt19937_64 rng(6);
  g.Initialize(rng);
  const ComplexTensor out = g.Forward(ComplexTensor({2, 3}), Mode::kInference);
  for (std::size_t i = 0; i < out.size(); ++i) {
    EXPECT_EQ(out.re()[i], 0.0);
    EXPECT_EQ(out.im()[i], 0.0);
  }
}

TEST(DiscriminatorTest, LogitShape) {
  Discriminator d(DiscriminatorConfig{.classes = 5});
  std::mt19937_64 rng(7);
  d.Initialize(rng);
  const RealTensor logits =
      d.Forward(RandomTensor({3, 6, 32, 32}, rng), Mode::kTraining);
  EXPECT_EQ(logits.shape(), (Shape{3, 6}));
  EXPECT_THROW(d.Forward(RandomTensor({3, 6, 16, 16}, rng), Mode::kTraining),
               ShapeError);
}

double MaxParamError(std::vector<ParamView> params,
                     const std::vector<std::vector<double>>& analytic,
                     const std::function<double()>& loss) {
  double worst = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    worst = std::max(worst, MaxRelativeError(
                                analytic[i], NumericGradient(params[i].value,
                                                             loss)));
  }
  return worst;
}

std::vector<std::vector<double>> Grads(const std::vector<ParamView>& params) {
  std::vector<std::vector<double>> out;
  for (const auto& p : params) out.emplace_back(p.grad.begin(), p.grad.end());
  return out;
}

TEST(EndToEndGradientTest, DiscriminatorTotalLoss) {
  std::mt19937_64 rng(8);
  Discriminator d(TinyDiscriminator());
  d.Initialize(rng);
  // Populate the normalization statistics, then check with them frozen.
  d.Forward(RandomTensor({6, 6, 4, 4}, rng), Mode::kTraining);
  d.Forward(RandomTensor({6, 6, 4, 4}, rng), Mode::kTraining);

  ComplexTensor x = RandomTensor({7, 6, 4, 4}, rng);
  const std::vector<int> labels = {1, 2, 2};
  auto loss_and_grad = [&](bool backward) {
    const RealTensor logits = d.Forward(x, Mode::kInference);
    const RealTensor l({3, 3}, {logits.data().begin(),
                                logits.data().begin() + 9});
    const RealTensor u({2, 3}, {logits.data().begin() + 9,
                                logits.data().begin() + 15});
    const RealTensor f({2, 3}, {logits.data().begin() + 15,
                                logits.data().end()});
    const DiscriminatorLoss loss = ComputeDiscriminatorLoss(l, labels, u, f);
    ComplexTensor dx;
    if (backward) {
      std::vector<double> grad;
      for (const auto* g :
           {&loss.grad_labeled, &loss.grad_unlabeled, &loss.grad_fake}) {
        grad.insert(grad.end(), g->data().begin(), g->data().end());
      }
      dx = d.Backward(RealTensor({7, 3}, grad));
    }
    return std::make_pair(loss.loss.l_total, dx);
  };
  d.ZeroGrad();
  const ComplexTensor dx = loss_and_grad(true).second;
  const auto analytic = Grads(d.Params());
  auto loss = [&] { return loss_and_grad(false).first; };

  EXPECT_LT(MaxRelativeError(dx.re(), NumericGradient(x.re(), loss)), 1e-3);
  EXPECT_LT(MaxRelativeError(dx.im(), NumericGradient(x.im(), loss)), 1e-3);
  EXPECT_LT(MaxParamError(d.Params(), analytic, loss), 1e-3);
}

TEST(EndToEndGradientTest, GeneratorThroughDiscriminator) {
  std::mt19937_64 rng(9);
  Generator g(TinyGenerator());
  Discriminator d(TinyDiscriminator());
  g.Initialize(rng);
  d.Initialize(rng);
  for (int i = 0; i < 2; ++i) {
    d.Forward(g.Forward(g.SampleLatent(5, rng), Mode::kTraining),
              Mode::kTraining);
  }
  const ComplexTensor z = g.SampleLatent(4, rng);
  g.ZeroGrad();
  const GeneratorLoss gl =
      ComputeGeneratorLoss(d.Forward(g.Forward(z, Mode::kInference),
                                     Mode::kInference));
  g.Backward(d.Backward(gl.grad_fake));
  const auto analytic = Grads(g.Params());
  auto loss = [&] {
    return ComputeGeneratorLoss(
               d.Forward(g.Forward(z, Mode::kInference), Mode::kInference))
        .loss;
  };
  EXPECT_LT(MaxParamError(g.Params(), analytic, loss), 1e-3);
}

DataSplit TinySplit(std::uint64_t seed) {
  const CoherencyRaster r = GenerateScene(
      {.classes = 2, .height = 16, .width = 16, .looks = 4, .seed = seed});
  const auto patches = ExtractPatches(r, 8, 2);
  return SplitPatches(patches, {.quota = LabeledQuota::Count(4),
                                .unlabeled_fraction = 0.25,
                                .seed = seed});
}

TrainingConfig TinyConfig() {
  TrainingConfig c;
  c.patch_size = 8;
  c.epochs = 2;
  c.batch_size = 4;
  c.latent = 5;
  c.memory = 2;
  c.seed = 11;
  c.generator_widths = {4, 4};
  c.discriminator_widths = {4, 4};
  return c;
}

std::vector<std::vector<double>> Snapshot(Model& m) {
  std::vector<std::vector<double>> out;
  for (const auto& b : m.State()) out.emplace_back(b.value.begin(), b.value.end());
  return out;
}

TEST(TrainTest, SupervisedModeLogsNoAdversarialTerms) {
  TrainingConfig c = TinyConfig();
  c.mode = TrainingMode::kSupervised;
  std::size_t epochs = 0;
  Train(c, TinySplit(1), [&](std::size_t, const LossBreakdown& l) {
    ++epochs;
    EXPECT_EQ(l.l_unlabeled, 0.0);
    EXPECT_EQ(l.l_generated, 0.0);
    EXPECT_EQ(l.l_generator, 0.0);
    EXPECT_GT(l.l_labeled, 0.0);
  });
  EXPECT_EQ(epochs, 2u);
}

TEST(TrainTest, SemisupervisedLogsAllTerms) {
  Train(TinyConfig(), TinySplit(1), [&](std::size_t, const LossBreakdown& l) {
    EXPECT_GT(l.l_unlabeled, 0.0);
    EXPECT_GT(l.l_generated, 0.0);
    EXPECT_GT(l.l_generator, 0.0);
    EXPECT_NEAR(l.l_total, l.l_labeled + l.l_unlabeled + l.l_generated,
                1e-12);
  });
}

TEST(TrainTest, IdenticalSeedsGiveIdenticalModels) {
  const DataSplit split = TinySplit(2);
  auto a = Train(TinyConfig(), split);
  auto b = Train(TinyConfig(), split);
  EXPECT_EQ(Snapshot(*a), Snapshot(*b));
  TrainingConfig other = TinyConfig();
  other.seed = 12;
  EXPECT_NE(Snapshot(*Train(other, split)), Snapshot(*a));
}

TEST(TrainTest, RejectsMissingLabels) {
  DataSplit split = TinySplit(3);
  DataSplit empty = split;
  empty.labeled.clear();
  EXPECT_THROW(Train(TinyConfig(), empty), std::invalid_argument);

  DataSplit absent = split;
  std::erase_if(absent.labeled, [](const Patch& p) { return p.label == 1; });
  TrainingConfig c = TinyConfig();
  c.classes = 2;
  try {
    Train(c, absent);
    FAIL() << "expected invalid_argument";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("class 1"), std::string::npos);
  }
}

TEST(TrainTest, ClassifyAndGenerateShapes) {
  const DataSplit split = TinySplit(4);
  auto model = Train(TinyConfig(), split);
  const auto preds = Classify(*model, StackPatches(split.test));
  ASSERT_EQ(preds.size(), split.test.size());
  for (int p : preds) {
    EXPECT_GE(p, 1);
    EXPECT_LE(p, 2);
  }
  const ComplexTensor gen = GeneratePatches(*model, 3, 99);
  EXPECT_EQ(gen.shape(), (Shape{3, kPatchChannels, 8, 8}));
  EXPECT_EQ(GeneratePatches(*model, 3, 99), gen);
}

std::filesystem::path TempPath(const std::string& name) {
  return std::filesystem::temp_directory_path() /
         ("cvgan_gan_test_" + std::to_string(::getpid()) + "_" + name);
}

std::string ReadAll(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

TEST(CheckpointTest, RoundTripIsBitExact) {
  const DataSplit split = TinySplit(5);
  auto model = Train(TinyConfig(), split);
  const auto path = TempPath("a.ckpt"), again = TempPath("b.ckpt");
  SaveCheckpoint(*model, path);
  auto loaded = LoadCheckpoint(path);
  EXPECT_EQ(Snapshot(*loaded), Snapshot(*model));
  EXPECT_EQ(loaded->config().mode, model->config().mode);
  EXPECT_EQ(loaded->config().seed, model->config().seed);
  EXPECT_EQ(loaded->classes(), 2u);
  SaveCheckpoint(*loaded, again);
  EXPECT_EQ(ReadAll(path), ReadAll(again));
  const ComplexTensor test = StackPatches(split.test);
  EXPECT_EQ(Classify(*loaded, test), Classify(*model, test));
  std::filesystem::remove(path);
  std::filesystem::remove(again);
}

CheckpointError::Kind LoadKind(const std::filesystem::path& p) {
  try {
    LoadCheckpoint(p);
  } catch (const CheckpointError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no CheckpointError";
  return CheckpointError::Kind::kIo;
}

TEST(CheckpointTest, CorruptFilesProduceNamedErrors) {
  auto model = std::make_unique<Model>(TinyConfig(), 2);
  const auto path = TempPath("c.ckpt");
  SaveCheckpoint(*model, path);
  const std::string bytes = ReadAll(path);
  using Kind = CheckpointError::Kind;
  auto write = [&](const std::string& s) {
    std::ofstream(path, std::ios::binary) << s;
  };

  write("XVG1" + bytes.substr(4));
  EXPECT_EQ(LoadKind(path), Kind::kBadMagic);
  write(bytes.substr(0, bytes.size() / 2));
  EXPECT_EQ(LoadKind(path), Kind::kTruncated);
  write(bytes.substr(0, 6));
  EXPECT_EQ(LoadKind(path), Kind::kTruncated);
  write(bytes + "junk");
  EXPECT_EQ(LoadKind(path), Kind::kMalformed);
  std::string fewer = bytes;
  fewer[4] = static_cast<char>(fewer[4] - 1);
  write(fewer);
  EXPECT_EQ(LoadKind(path), Kind::kMalformed);
  std::string bad_dtype = bytes;
  const std::size_t first_name = 4 + 4 + 2;
  const std::size_t name_len = static_cast<unsigned char>(bytes[8]);
  bad_dtype[first_name + name_len] = 7;
  write(bad_dtype);
  EXPECT_EQ(LoadKind(path), Kind::kMalformed);
  std::filesystem::remove(path);
  EXPECT_EQ(LoadKind(path), Kind::kIo);
}

}  // namespace
}  // namespace cvgan
