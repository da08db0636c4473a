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

#include <algorithm>
#include <numeric>
#include <string>

#include "cvgan/gan.h"

namespace cvgan {
namespace {

constexpr std::size_t kInferenceChunk = 256;

ComplexTensor ConcatBatch(const std::vector<const ComplexTensor*>& parts) {
  Shape shape = parts.front()->shape();
  std::size_t rows = 0;
  for (const auto* p : parts) rows += p->dim(0);
  shape[0] = rows;
  ComplexTensor out(shape);
  std::size_t at = 0;
  for (const auto* p : parts) {
    std::copy(p->re().begin(), p->re().end(), out.re().begin() + at);
    std::copy(p->im().begin(), p->im().end(), out.im().begin() + at);
    at += p->size();
  }
  return out;
}

RealTensor Rows(const RealTensor& t, std::size_t begin, std::size_t count) {
  const std::size_t width = t.dim(1);
  const auto first = t.data().begin() + begin * width;
  return RealTensor({count, width},
                    std::vector<double>(first, first + count * width));
}

RealTensor StackRows(const std::vector<const RealTensor*>& parts,
                     std::size_t width) {
  std::vector<double> data;
  for (const auto* p : parts) {
    data.insert(data.end(), p->data().begin(), p->data().end());
  }
  const std::size_t rows = data.size() / width;
  return RealTensor({rows, width}, std::move(data));
}

ComplexTensor Slice(const ComplexTensor& t, std::size_t begin,
                    std::size_t count) {
  Shape shape = t.shape();
  shape[0] = count;
  const std::size_t stride = t.size() / t.dim(0);
  ComplexTensor out(shape);
  std::copy_n(t.re().begin() + begin * stride, count * stride,
              out.re().begin());
  std::copy_n(t.im().begin() + begin * stride, count * stride,
              out.im().begin());
  return out;
}

// Draws batches by walking successive shuffled permutations of 0..n.
class IndexStream {
 public:
  explicit IndexStream(std::size_t n) : order_(n) {}

  std::vector<std::size_t> Next(std::size_t count, std::mt19937_64& rng) {
    std::vector<std::size_t> out;
    while (out.size() < count) {
      if (pos_ == 0) {
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        std::shuffle(order_.begin(), order_.end(), rng);
      }
      out.push_back(order_[pos_]);
      pos_ = (pos_ + 1) % order_.size();
    }
    return out;
  }

 private:
  std::vector<std::size_t> order_;
  std::size_t pos_ = 0;
};

std::size_t ResolveClasses(const TrainingConfig& config,
                           const std::vector<Patch>& labeled) {
  if (labeled.empty()) throw std::invalid_argument("labeled set is empty");
  int max_label = 0;
  for (const Patch& p : labeled) max_label = std::max(max_label, p.label);
  const std::size_t k =
      config.classes ? config.classes : static_cast<std::size_t>(max_label);
  std::vector<bool> seen(k + 1, false);
  for (const Patch& p : labeled) {
    if (p.label < 1 || static_cast<std::size_t>(p.label) > k) {
      throw std::invalid_argument("labeled patch has label " +
                                  std::to_string(p.label) + " outside 1.." +
                                  std::to_string(k));
    }
    seen[p.label] = true;
  }
  for (std::size_t c = 1; c <= k; ++c) {
    if (!seen[c]) {
      throw std::invalid_argument("class " + std::to_string(c) +
                                  " is absent from the labeled set");
    }
  }
  return k;
}

LossBreakdown& operator+=(LossBreakdown& a, const LossBreakdown& b) {
  a.l_labeled += b.l_labeled;
  a.l_unlabeled += b.l_unlabeled;
  a.l_generated += b.l_generated;
  a.l_total += b.l_total;
  a.l_generator += b.l_generator;
  return a;
}

LossBreakdown Scaled(LossBreakdown a, double s) {
  a.l_labeled *= s;
  a.l_unlabeled *= s;
  a.l_generated *= s;
  a.l_total *= s;
  a.l_generator *= s;
  return a;
}

}  // namespace

TrainingMode ParseTrainingMode(const std::string& name) {
  if (name == "semisup") return TrainingMode::kSemisupervised;
  if (name == "supervised") return TrainingMode::kSupervised;
  throw std::invalid_argument("unknown mode '" + name +
                              "' (expected semisup or supervised)");
}

std::string ToString(TrainingMode mode) {
  return mode == TrainingMode::kSemisupervised ? "semisup" : "supervised";
}

Model::Model(const TrainingConfig& config, std::size_t classes)
    : config_(config),
      generator_({.latent = config.latent,
                  .patch_size = config.patch_size,
                  .widths = config.generator_widths,
                  .memory = config.memory}),
      discriminator_({.patch_size = config.patch_size,
                      .classes = classes,
                      .widths = config.discriminator_widths,
                      .memory = config.memory}),
      g_adam_({config.lr, config.beta1, config.beta2}),
      d_adam_({config.lr, config.beta1, config.beta2}) {
  config_.classes = classes;
  std::mt19937_64 rng(config.seed);
  generator_.Initialize(rng);
  discriminator_.Initialize(rng);
  g_adam_.Initialize(generator_.Params());
  d_adam_.Initialize(discriminator_.Params());
  normalization_.mean_re.assign(kPatchChannels, 0.0);
  normalization_.mean_im.assign(kPatchChannels, 0.0);
  normalization_.std_re.assign(kPatchChannels, 1.0);
  normalization_.std_im.assign(kPatchChannels, 1.0);
}

std::vector<BufferView> Model::State() {
  std::vector<BufferView> out;
  const auto g_params = generator_.Params();
  const auto d_params = discriminator_.Params();
  for (const auto& p : g_params) out.push_back({p.name, p.shape, p.value});
  for (const auto& p : d_params) out.push_back({p.name, p.shape, p.value});
  for (auto& b : generator_.Buffers()) out.push_back(b);
  for (auto& b : discriminator_.Buffers()) out.push_back(b);
  auto g_adam = g_adam_.Buffers(g_params);
  PrefixNames("adam", g_adam);
  auto d_adam = d_adam_.Buffers(d_params);
  PrefixNames("adam", d_adam);
  // The step counters would collide after prefixing; name them per network.
  g_adam.back().name = "adam.generator.step";
  d_adam.back().name = "adam.discriminator.step";
  out.insert(out.end(), g_adam.begin(), g_adam.end());
  out.insert(out.end(), d_adam.begin(), d_adam.end());
  const Shape channels = {kPatchChannels};
  out.push_back({"normalization.mean_re", channels, normalization_.mean_re});
  out.push_back({"normalization.mean_im", channels, normalization_.mean_im});
  out.push_back({"normalization.std_re", channels, normalization_.std_re});
  out.push_back({"normalization.std_im", channels, normalization_.std_im});
  return out;
}

std::unique_ptr<Model> Train(const TrainingConfig& config,
                             const DataSplit& split,
                             const EpochCallback& on_epoch) {
  if (config.batch_size < 2) {
    throw std::invalid_argument("batch size must be at least 2");
  }
  const std::size_t k = ResolveClasses(config, split.labeled);
  auto model = std::make_unique<Model>(config, k);
  const bool semisup = config.mode == TrainingMode::kSemisupervised;

  model->normalization() =
      ComputeNormalization(split.labeled, semisup ? split.unlabeled
                                                  : std::vector<Patch>{});
  std::vector<Patch> labeled = split.labeled;
  std::vector<Patch> unlabeled = semisup ? split.unlabeled
                                         : std::vector<Patch>{};
  Normalize(labeled, model->normalization());
  Normalize(unlabeled, model->normalization());

  Generator& g = model->generator();
  Discriminator& d = model->discriminator();
  const std::size_t width = k + 1;
  const std::size_t nl = labeled.size();
  const std::size_t nu = unlabeled.size();
  const std::size_t b = config.batch_size;
  const std::size_t steps = (std::max(nl, nu) + b - 1) / b;
  const std::size_t labeled_batch = std::min(b, nl);
  const std::size_t unlabeled_batch = std::min(b, nu);
  const std::size_t fake_batch = nu > 0 ? unlabeled_batch : labeled_batch;

  std::mt19937_64 rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  IndexStream labeled_stream(nl);
  IndexStream unlabeled_stream(nu);
  const RealTensor no_logits({0, width});

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    LossBreakdown sum;
    for (std::size_t step = 0; step < steps; ++step) {
      const auto li = labeled_stream.Next(labeled_batch, rng);
      std::vector<int> labels;
      for (std::size_t i : li) labels.push_back(labeled[i].label);
      const ComplexTensor xl = StackPatches(labeled, li);

      d.ZeroGrad();
      if (!semisup) {
        const RealTensor logits = d.Forward(xl, Mode::kTraining);
        const DiscriminatorLoss loss =
            ComputeDiscriminatorLoss(logits, labels, no_logits, no_logits);
        d.Backward(loss.grad_labeled);
        model->discriminator_optimizer().Step(d.Params());
        sum += loss.loss;
        continue;
      }

      const auto ui = unlabeled_stream.Next(unlabeled_batch, rng);
      const ComplexTensor xu = nu > 0 ? StackPatches(unlabeled, ui)
                                      : ComplexTensor({0, kPatchChannels,
                                                       config.patch_size,
                                                       config.patch_size});
      const ComplexTensor fake =
          g.Forward(g.SampleLatent(fake_batch, rng), Mode::kTraining);
      const RealTensor logits =
          d.Forward(ConcatBatch({&xl, &xu, &fake}), Mode::kTraining);
      const std::size_t nxl = xl.dim(0), nxu = xu.dim(0);
      const DiscriminatorLoss loss = ComputeDiscriminatorLoss(
          Rows(logits, 0, nxl), labels, Rows(logits, nxl, nxu),
          Rows(logits, nxl + nxu, fake_batch));
      d.Backward(StackRows(
          {&loss.grad_labeled, &loss.grad_unlabeled, &loss.grad_fake}, width));
      model->discriminator_optimizer().Step(d.Params());

      g.ZeroGrad();
      const ComplexTensor fake2 =
          g.Forward(g.SampleLatent(fake_batch, rng), Mode::kTraining);
      const GeneratorLoss gloss =
          ComputeGeneratorLoss(d.Forward(fake2, Mode::kInference));
      g.Backward(d.Backward(gloss.grad_fake));
      model->generator_optimizer().Step(g.Params());

      LossBreakdown step_loss = loss.loss;
      step_loss.l_generator = gloss.loss;
      sum += step_loss;
    }
    d.ZeroGrad();
    g.ZeroGrad();
    if (on_epoch) {
      on_epoch(epoch, Scaled(sum, 1.0 / static_cast<double>(steps)));
    }
  }
  return model;
}

std::vector<int> Classify(Model& model, const ComplexTensor& patches) {
  const std::size_t n = patches.rank() > 0 ? patches.dim(0) : 0;
  const std::size_t k = model.classes();
  std::vector<int> out;
  out.reserve(n);
  for (std::size_t begin = 0; begin < n; begin += kInferenceChunk) {
    const std::size_t count = std::min(kInferenceChunk, n - begin);
    ComplexTensor x = Slice(patches, begin, count);
    Normalize(x, model.normalization());
    const RealTensor logits =
        model.discriminator().Forward(x, Mode::kInference);
    for (std::size_t i = 0; i < count; ++i) {
      const auto row = logits.data().subspan(i * (k + 1), k);
      out.push_back(static_cast<int>(
          std::max_element(row.begin(), row.end()) - row.begin() + 1));
    }
  }
  return out;
}

ComplexTensor GeneratePatches(Model& model, std::size_t count,
                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Generator& g = model.generator();
  ComplexTensor out = g.Forward(g.SampleLatent(count, rng), Mode::kInference);
  Denormalize(out, model.normalization());
  return out;
}

}  // namespace cvgan
