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

#include <string>
#include <utility>

#include "cvgan/gan.h"

namespace cvgan {
namespace {

constexpr ConvGeometry kUpDown{.kernel = 4, .stride = 2, .padding = 1};

std::vector<ParamView> CollectParams(
    const std::vector<std::unique_ptr<Layer>>& layers,
    const std::vector<std::string>& names) {
  std::vector<ParamView> out;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    auto params = layers[i]->Params();
    PrefixNames(names[i], params);
    out.insert(out.end(), params.begin(), params.end());
  }
  return out;
}

std::vector<BufferView> CollectBuffers(
    const std::vector<std::unique_ptr<Layer>>& layers,
    const std::vector<std::string>& names) {
  std::vector<BufferView> out;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    auto buffers = layers[i]->Buffers();
    PrefixNames(names[i], buffers);
    out.insert(out.end(), buffers.begin(), buffers.end());
  }
  return out;
}

}  // namespace

Generator::Generator(GeneratorConfig config) : config_(std::move(config)) {
  const std::size_t blocks = config_.widths.size();
  if (blocks == 0 || config_.latent == 0) {
    throw std::invalid_argument("generator needs a latent width and blocks");
  }
  const std::size_t scale = std::size_t{1} << blocks;
  if (config_.patch_size % scale != 0 || config_.patch_size < scale) {
    throw std::invalid_argument(
        "patch size " + std::to_string(config_.patch_size) +
        " is not a multiple of " + std::to_string(scale));
  }
  start_size_ = config_.patch_size / scale;
  const std::size_t w0 = config_.widths[0];
  layers_.push_back(std::make_unique<ComplexLinear>(
      config_.latent, w0 * start_size_ * start_size_));
  names_.push_back("fc");
  for (std::size_t i = 0; i < blocks; ++i) {
    const std::size_t in = config_.widths[i];
    const std::size_t out =
        i + 1 < blocks ? config_.widths[i + 1] : config_.out_channels;
    const std::string block = "block" + std::to_string(i);
    layers_.push_back(
        std::make_unique<ComplexBatchNorm>(in, config_.memory));
    names_.push_back(block + ".bn");
    layers_.push_back(std::make_unique<CRelu>());
    names_.push_back(block + ".act");
    layers_.push_back(std::make_unique<ComplexDeconv2d>(in, out, kUpDown));
    names_.push_back(block + ".deconv");
  }
}

void Generator::Initialize(std::mt19937_64& rng) {
  for (auto& layer : layers_) layer->Initialize(rng);
}

ComplexTensor Generator::SampleLatent(std::size_t batch,
                                      std::mt19937_64& rng) const {
  ComplexTensor z({batch, config_.latent});
  std::normal_distribution<double> normal;
  for (std::size_t i = 0; i < z.size(); ++i) {
    z.re()[i] = normal(rng);
    z.im()[i] = normal(rng);
  }
  return z;
}

ComplexTensor Generator::Forward(const ComplexTensor& z, Mode mode) {
  if (z.rank() != 2 || z.dim(1) != config_.latent) {
    throw ShapeError("generator latent " + ShapeToString(z.shape()) +
                     " does not have width " +
                     std::to_string(config_.latent));
  }
  const std::size_t batch = z.dim(0);
  ComplexTensor h = layers_[0]->Forward(z, mode);
  h.Reshape({batch, config_.widths[0], start_size_, start_size_});
  for (std::size_t i = 1; i < layers_.size(); ++i) {
    h = layers_[i]->Forward(h, mode);
  }
  return h;
}

ComplexTensor Generator::Backward(const ComplexTensor& grad_out) {
  ComplexTensor g = grad_out;
  for (std::size_t i = layers_.size(); i-- > 1;) g = layers_[i]->Backward(g);
  g.Reshape({g.dim(0), g.size() / g.dim(0)});
  return layers_[0]->Backward(g);
}

std::vector<ParamView> Generator::Params() {
  auto params = CollectParams(layers_, names_);
  PrefixNames("generator", params);
  return params;
}

std::vector<BufferView> Generator::Buffers() {
  auto buffers = CollectBuffers(layers_, names_);
  PrefixNames("generator", buffers);
  return buffers;
}

void Generator::ZeroGrad() {
  for (auto& layer : layers_) layer->ZeroGrad();
}

namespace {

std::size_t FeatureWidth(const DiscriminatorConfig& c) {
  if (c.widths.empty()) {
    throw std::invalid_argument("discriminator needs at least one block");
  }
  std::size_t size = c.patch_size;
  for (std::size_t i = 0; i < c.widths.size(); ++i) {
    size = ConvOutputSize(size, kUpDown, "height");
  }
  return c.widths.back() * size * size;
}

}  // namespace

Discriminator::Discriminator(DiscriminatorConfig config)
    : config_(std::move(config)),
      head_(2 * FeatureWidth(config_), config_.classes + 1) {
  if (config_.classes < 1) {
    throw std::invalid_argument("discriminator needs at least one class");
  }
  std::size_t in = config_.in_channels;
  for (std::size_t i = 0; i < config_.widths.size(); ++i) {
    const std::string block = "block" + std::to_string(i);
    const std::size_t out = config_.widths[i];
    layers_.push_back(std::make_unique<ComplexConv2d>(in, out, kUpDown));
    names_.push_back(block + ".conv");
    if (i > 0) {
      layers_.push_back(
          std::make_unique<ComplexBatchNorm>(out, config_.memory));
      names_.push_back(block + ".bn");
    }
    layers_.push_back(std::make_unique<CRelu>());
    names_.push_back(block + ".act");
    in = out;
  }
}

void Discriminator::Initialize(std::mt19937_64& rng) {
  for (auto& layer : layers_) layer->Initialize(rng);
  head_.Initialize(rng);
}

RealTensor Discriminator::Forward(const ComplexTensor& x, Mode mode) {
  if (x.rank() != 4 || x.dim(1) != config_.in_channels ||
      x.dim(2) != config_.patch_size || x.dim(3) != config_.patch_size) {
    throw ShapeError("discriminator input " + ShapeToString(x.shape()) +
                     " is not [B, " + std::to_string(config_.in_channels) +
                     ", " + std::to_string(config_.patch_size) + ", " +
                     std::to_string(config_.patch_size) + "]");
  }
  ComplexTensor h = x;
  for (auto& layer : layers_) h = layer->Forward(h, mode);
  feature_shape_ = h.shape();
  h.Reshape({h.dim(0), h.size() / h.dim(0)});
  return head_.Forward(ConcatRealImag(h));
}

ComplexTensor Discriminator::Backward(const RealTensor& grad_logits) {
  const RealTensor grad_features = head_.Backward(grad_logits);
  const std::size_t batch = feature_shape_.at(0);
  ComplexTensor g = SplitRealImag(
      grad_features, {batch, NumElements(feature_shape_) / batch});
  g.Reshape(feature_shape_);
  for (std::size_t i = layers_.size(); i-- > 0;) g = layers_[i]->Backward(g);
  return g;
}

std::vector<ParamView> Discriminator::Params() {
  auto params = CollectParams(layers_, names_);
  auto head = head_.Params();
  PrefixNames("head", head);
  params.insert(params.end(), head.begin(), head.end());
  PrefixNames("discriminator", params);
  return params;
}

std::vector<BufferView> Discriminator::Buffers() {
  auto buffers = CollectBuffers(layers_, names_);
  PrefixNames("discriminator", buffers);
  return buffers;
}

void Discriminator::ZeroGrad() {
  for (auto& layer : layers_) layer->ZeroGrad();
  head_.ZeroGrad();
}

}  // namespace cvgan
