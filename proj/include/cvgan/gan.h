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

#ifndef CVGAN_GAN_H_
#define CVGAN_GAN_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cvgan/ctensor.h"
#include "cvgan/data.h"
#include "cvgan/layers.h"

namespace cvgan {

// ---------------------------------------------------------------------------
// Networks.

struct GeneratorConfig {
  std::size_t latent = 100;  // per plane
  std::size_t patch_size = 32;
  std::size_t out_channels = kPatchChannels;
  // Channel widths entering each upsampling block. Each block doubles the
  // spatial size, so patch_size must be divisible by 2^widths.size().
  std::vector<std::size_t> widths = {64, 32, 16};
  std::size_t memory = 8;
};

// z [B, latent] -> CFC -> [B, widths[0], s, s] -> {CBN, CA, CDeConv}* ->
// [B, out_channels, patch_size, patch_size] with a linear output.
class Generator {
 public:
  explicit Generator(GeneratorConfig config);

  void Initialize(std::mt19937_64& rng);

  // Independent standard normal real and imaginary planes.
  ComplexTensor SampleLatent(std::size_t batch, std::mt19937_64& rng) const;

  ComplexTensor Forward(const ComplexTensor& z, Mode mode);
  // Accumulates parameter gradients and returns dL/dz.
  ComplexTensor Backward(const ComplexTensor& grad_out);

  std::vector<ParamView> Params();
  std::vector<BufferView> Buffers();
  void ZeroGrad();

  const GeneratorConfig& config() const { return config_; }

 private:
  GeneratorConfig config_;
  std::size_t start_size_;
  std::vector<std::unique_ptr<Layer>> layers_;
  std::vector<std::string> names_;
};

struct DiscriminatorConfig {
  std::size_t in_channels = kPatchChannels;
  std::size_t patch_size = 32;
  std::size_t classes = 2;  // K; the network emits K+1 logits
  // Output channels of each 4x4 stride-2 convolution.
  std::vector<std::size_t> widths = {16, 32, 64};
  std::size_t memory = 8;
};

// {CConv, (CBN), CA}* -> flatten -> concat(re, im) -> real FC -> K+1 logits.
// The first block has no CBN.
class Discriminator {
 public:
  explicit Discriminator(DiscriminatorConfig config);

  void Initialize(std::mt19937_64& rng);

  // x [B, C, P, P] -> logits [B, K+1].
  RealTensor Forward(const ComplexTensor& x, Mode mode);
  // Accumulates parameter gradients and returns dL/dx.
  ComplexTensor Backward(const RealTensor& grad_logits);

  std::vector<ParamView> Params();
  std::vector<BufferView> Buffers();
  void ZeroGrad();

  const DiscriminatorConfig& config() const { return config_; }

 private:
  DiscriminatorConfig config_;
  std::vector<std::unique_ptr<Layer>> layers_;
  std::vector<std::string> names_;
  RealLinear head_;
  Shape feature_shape_;
};

// ---------------------------------------------------------------------------
// Losses. Logits are rows of a [B, K+1] tensor; the last column is the fake
// logit.

inline constexpr double kProbabilityClamp = 1e-7;

double LogSumExp(std::span<const double> logits);
// Softmax mass on the last of K+1 logits: sigmoid(l[K] - LogSumExp(l[0..K))).
double FakeProbability(std::span<const double> logits);

struct LossBreakdown {
  double l_labeled = 0.0;
  double l_unlabeled = 0.0;
  double l_generated = 0.0;
  double l_total = 0.0;
  double l_generator = 0.0;
};

struct DiscriminatorLoss {
  LossBreakdown loss;  // l_generator left at 0
  RealTensor grad_labeled, grad_unlabeled, grad_fake;
};

// Labels are 1..K. Empty batches (zero rows) contribute 0.
DiscriminatorLoss ComputeDiscriminatorLoss(const RealTensor& labeled_logits,
                                           std::span<const int> labels,
                                           const RealTensor& unlabeled_logits,
                                           const RealTensor& fake_logits);

struct GeneratorLoss {
  double loss = 0.0;
  RealTensor grad_fake;
};

GeneratorLoss ComputeGeneratorLoss(const RealTensor& fake_logits);

// ---------------------------------------------------------------------------
// Adam.

struct AdamConfig {
  double lr = 0.0005;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

class Adam {
 public:
  explicit Adam(AdamConfig config) : config_(config) {}

  // Applies one update to every parameter from its gradient. Moment buffers
  // are created on the first call; later calls must pass the same layout.
  void Step(const std::vector<ParamView>& params);

  std::uint64_t step() const { return static_cast<std::uint64_t>(step_[0]); }
  const AdamConfig& config() const { return config_; }
  // Moment buffers named "<param>.m" / "<param>.v" plus "step"; empty before
  // Initialize or the first Step.
  std::vector<BufferView> Buffers(const std::vector<ParamView>& params);
  // Allocates zero moments for params.
  void Initialize(const std::vector<ParamView>& params);

 private:
  AdamConfig config_;
  std::vector<std::vector<double>> m_, v_;
  std::vector<double> step_ = {0.0};
};

// ---------------------------------------------------------------------------
// Training.

enum class TrainingMode { kSemisupervised, kSupervised };

TrainingMode ParseTrainingMode(const std::string& name);
std::string ToString(TrainingMode mode);

struct TrainingConfig {
  std::size_t patch_size = 32;
  double lr = 0.0005;
  double beta1 = 0.5;
  double beta2 = 0.999;
  std::size_t epochs = 100;
  std::size_t batch_size = 64;
  std::size_t memory = 8;
  std::size_t latent = 100;
  std::uint64_t seed = 0;
  TrainingMode mode = TrainingMode::kSemisupervised;
  std::size_t classes = 0;  // 0 = largest label in the labeled set
  std::vector<std::size_t> generator_widths = {64, 32, 16};
  std::vector<std::size_t> discriminator_widths = {16, 32, 64};
};

class Model {
 public:
  Model(const TrainingConfig& config, std::size_t classes);

  const TrainingConfig& config() const { return config_; }
  std::size_t classes() const { return discriminator_.config().classes; }

  Generator& generator() { return generator_; }
  Discriminator& discriminator() { return discriminator_; }
  Adam& generator_optimizer() { return g_adam_; }
  Adam& discriminator_optimizer() { return d_adam_; }
  NormalizationStats& normalization() { return normalization_; }
  const NormalizationStats& normalization() const { return normalization_; }

  // Every named tensor of the model: parameters, CBN buffers, Adam state.
  std::vector<BufferView> State();

 private:
  TrainingConfig config_;
  Generator generator_;
  Discriminator discriminator_;
  Adam g_adam_, d_adam_;
  NormalizationStats normalization_;
};

using EpochCallback =
    std::function<void(std::size_t epoch, const LossBreakdown& loss)>;

// Normalizes the split with statistics from its labeled and unlabeled
// patches, then alternates discriminator and generator updates. Each epoch
// runs ceil(max(|labeled|, |unlabeled|) / batch) steps. The callback receives
// the mean loss of each epoch.
std::unique_ptr<Model> Train(const TrainingConfig& config,
                             const DataSplit& split,
                             const EpochCallback& on_epoch = {});

// Raw (unnormalized) patches [N, 6, P, P] -> predicted classes 1..K.
std::vector<int> Classify(Model& model, const ComplexTensor& patches);

// count generated patches [count, 6, P, P] in raw coherency units.
ComplexTensor GeneratePatches(Model& model, std::size_t count,
                              std::uint64_t seed);

// ---------------------------------------------------------------------------
// Checkpoints: "CVG1", u32 entry count, then per entry u16 name length, name,
// u8 dtype (0 = f32, 1 = f64), u8 rank, rank x u32 dims, payload.

class CheckpointError : public std::runtime_error {
 public:
  enum class Kind { kIo, kBadMagic, kTruncated, kMalformed, kMissing };

  CheckpointError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

void SaveCheckpoint(Model& model, const std::filesystem::path& path);
std::unique_ptr<Model> LoadCheckpoint(const std::filesystem::path& path);

}  // namespace cvgan

#endif  // CVGAN_GAN_H_
