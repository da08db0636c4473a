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

#ifndef CVGAN_LAYERS_H_
#define CVGAN_LAYERS_H_

#include <cstddef>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "cvgan/ctensor.h"

namespace cvgan {

enum class Mode { kTraining, kInference };

// One trainable real plane together with its gradient accumulator.
struct ParamView {
  std::string name;
  Shape shape;
  std::span<double> value;
  std::span<double> grad;
};

// Non-trainable state that must survive a checkpoint round trip.
struct BufferView {
  std::string name;
  Shape shape;
  std::span<double> value;
};

// Prefixes every name with `prefix` + '.'.
void PrefixNames(const std::string& prefix, std::vector<ParamView>& params);
void PrefixNames(const std::string& prefix, std::vector<BufferView>& buffers);

// Appends `name`.re and `name`.im views of a complex parameter.
void AppendComplexParams(std::vector<ParamView>& out, const std::string& name,
                         ComplexTensor& value, ComplexTensor& grad);

// A complex-valued layer with a forward pass and an analytic backward pass.
// Real and imaginary planes are treated as independent real variables.
class Layer {
 public:
  virtual ~Layer() = default;

  // Draws initial parameter values. Layers without parameters ignore it.
  virtual void Initialize(std::mt19937_64& /*rng*/) {}
  virtual ComplexTensor Forward(const ComplexTensor& x, Mode mode) = 0;
  // Returns dL/dx for the most recent Forward and accumulates parameter
  // gradients. Throws std::logic_error if no forward pass is cached.
  virtual ComplexTensor Backward(const ComplexTensor& grad_out) = 0;

  virtual std::vector<ParamView> Params() { return {}; }
  virtual std::vector<BufferView> Buffers() { return {}; }

  void ZeroGrad();
};

// Glorot-uniform initialization per plane, scaled by 1/sqrt(2) so that the
// complex modulus has the Glorot variance.
void GlorotComplexInit(ComplexTensor& w, std::size_t fan_in,
                       std::size_t fan_out, std::mt19937_64& rng);

// CFC: y = x W^T + b for x of shape [B, in].
class ComplexLinear : public Layer {
 public:
  ComplexLinear(std::size_t in_features, std::size_t out_features);

  void Initialize(std::mt19937_64& rng) override;

  ComplexTensor Forward(const ComplexTensor& x, Mode mode) override;
  ComplexTensor Backward(const ComplexTensor& grad_out) override;
  std::vector<ParamView> Params() override;

  std::size_t in_features() const { return in_; }
  std::size_t out_features() const { return out_; }
  ComplexTensor& weight() { return weight_; }  // [out, in]
  ComplexTensor& bias() { return bias_; }      // [out]
  const ComplexTensor& weight_grad() const { return weight_grad_; }
  const ComplexTensor& bias_grad() const { return bias_grad_; }

 private:
  std::size_t in_;
  std::size_t out_;
  ComplexTensor weight_, bias_, weight_grad_, bias_grad_;
  std::optional<ComplexTensor> input_t_;  // cached input, [in, B]
};

struct ConvGeometry {
  std::size_t kernel = 1;
  std::size_t stride = 1;
  std::size_t padding = 0;
};

// Output size of a cross-correlation along one axis. Throws ShapeError when
// the kernel does not fit.
std::size_t ConvOutputSize(std::size_t in, const ConvGeometry& g,
                           const char* axis);
std::size_t DeconvOutputSize(std::size_t in, const ConvGeometry& g,
                             const char* axis);

// CConv: zero-padded cross-correlation, x [B, inC, H, W], kernels
// [outC, inC, k, k].
class ComplexConv2d : public Layer {
 public:
  ComplexConv2d(std::size_t in_channels, std::size_t out_channels,
                ConvGeometry geometry);

  void Initialize(std::mt19937_64& rng) override;

  ComplexTensor Forward(const ComplexTensor& x, Mode mode) override;
  ComplexTensor Backward(const ComplexTensor& grad_out) override;
  std::vector<ParamView> Params() override;

  const ConvGeometry& geometry() const { return geom_; }
  ComplexTensor& weight() { return weight_; }
  ComplexTensor& bias() { return bias_; }
  const ComplexTensor& weight_grad() const { return weight_grad_; }
  const ComplexTensor& bias_grad() const { return bias_grad_; }

 private:
  std::size_t in_c_, out_c_;
  ConvGeometry geom_;
  ComplexTensor weight_, bias_, weight_grad_, bias_grad_;
  Shape input_shape_;
  std::optional<ComplexTensor> cols_;  // lowered input [inC*k*k, B*OH*OW]
};

// CDeConv: transposed convolution, the adjoint of ComplexConv2d with the same
// geometry. Kernels are stored [inC, outC, k, k], i.e. in the layout of the
// convolution that maps outC channels back to inC.
class ComplexDeconv2d : public Layer {
 public:
  ComplexDeconv2d(std::size_t in_channels, std::size_t out_channels,
                  ConvGeometry geometry);

  void Initialize(std::mt19937_64& rng) override;

  ComplexTensor Forward(const ComplexTensor& x, Mode mode) override;
  ComplexTensor Backward(const ComplexTensor& grad_out) override;
  std::vector<ParamView> Params() override;

  const ConvGeometry& geometry() const { return geom_; }
  ComplexTensor& weight() { return weight_; }
  ComplexTensor& bias() { return bias_; }
  const ComplexTensor& weight_grad() const { return weight_grad_; }
  const ComplexTensor& bias_grad() const { return bias_grad_; }

 private:
  std::size_t in_c_, out_c_;
  ConvGeometry geom_;
  ComplexTensor weight_, bias_, weight_grad_, bias_grad_;
  Shape input_shape_;
  std::optional<ComplexTensor> input_cm_;  // channel-major input [inC, B*H*W]
};

// CA: CReLU, max(0, .) applied to each plane independently.
class CRelu : public Layer {
 public:
  ComplexTensor Forward(const ComplexTensor& x, Mode mode) override;
  ComplexTensor Backward(const ComplexTensor& grad_out) override;

 private:
  std::optional<ComplexTensor> input_;
};

// Symmetric 2x2 real matrix [[rr, ri], [ri, ii]].
struct Sym2 {
  double rr = 0.0;
  double ri = 0.0;
  double ii = 0.0;
};

// V^{-1/2} in closed form. The determinant is floored at epsilon^2.
Sym2 InverseSqrt2x2(Sym2 v, double epsilon);

// CBN: whitening batch normalization over (re, im) pairs with statistics
// averaged over the last `memory` training batches, followed by
// gamma * x_hat + beta. Statistics are taken over every axis except axis 1.
//
// The backward pass treats the averaged statistics as constants.
class ComplexBatchNorm : public Layer {
 public:
  struct Stats {
    Complex mean;
    Sym2 cov;
  };

  static constexpr double kDefaultEpsilon = 1e-5;

  ComplexBatchNorm(std::size_t channels, std::size_t memory = 8,
                   double epsilon = kDefaultEpsilon);

  ComplexTensor Forward(const ComplexTensor& x, Mode mode) override;
  ComplexTensor Backward(const ComplexTensor& grad_out) override;
  std::vector<ParamView> Params() override;
  std::vector<BufferView> Buffers() override;

  std::size_t channels() const { return channels_; }
  std::size_t memory() const { return memory_; }
  double epsilon() const { return epsilon_; }
  // Number of batch statistics currently held (at most memory()).
  std::size_t filled() const { return static_cast<std::size_t>(cursor_[0]); }

  // Per-batch statistics of x for one channel (population covariance).
  static std::vector<Stats> BatchStatistics(const ComplexTensor& x);
  // Arithmetic mean of the buffered statistics for channel c. Before any
  // training batch this is mean 0, covariance I.
  Stats Averaged(std::size_t c) const;

  std::span<double> gamma() { return gamma_; }
  std::span<double> beta_re() { return beta_re_; }
  std::span<double> beta_im() { return beta_im_; }
  std::span<const double> gamma_grad() const { return gamma_grad_; }

 private:
  static constexpr std::size_t kStatWidth = 5;  // mean re/im, rr, ri, ii

  void Push(const std::vector<Stats>& stats);

  std::size_t channels_;
  std::size_t memory_;
  double epsilon_;
  std::vector<double> gamma_, beta_re_, beta_im_;
  std::vector<double> gamma_grad_, beta_re_grad_, beta_im_grad_;
  std::vector<double> ring_;    // [memory, channels, kStatWidth]
  std::vector<double> cursor_;  // {filled, next slot}

  std::optional<ComplexTensor> x_hat_;
  std::vector<Sym2> whitening_;  // per channel, cached for Backward
};

// Real-valued full connection y = x W^T + b, x [B, in]. Used as the
// discriminator head after the complex features are flattened to reals.
class RealLinear {
 public:
  RealLinear(std::size_t in_features, std::size_t out_features);

  void Initialize(std::mt19937_64& rng);

  RealTensor Forward(const RealTensor& x);
  RealTensor Backward(const RealTensor& grad_out);
  std::vector<ParamView> Params();
  void ZeroGrad();

  RealTensor& weight() { return weight_; }
  RealTensor& bias() { return bias_; }

 private:
  std::size_t in_, out_;
  RealTensor weight_, bias_, weight_grad_, bias_grad_;
  std::optional<RealTensor> input_;
};

}  // namespace cvgan

#endif  // CVGAN_LAYERS_H_
