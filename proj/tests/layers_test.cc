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

#include "cvgan/layers.h"

#include <gtest/gtest.h>

#include <random>

#include "test_util.h"

namespace cvgan {
namespace {

using testing::CheckLayerGradients;
using testing::Contract;
using testing::MaxAbsDiff;
using testing::NaiveConv;
using testing::NaiveDeconv;
using testing::RandomizeParams;
using testing::RandomTensor;

constexpr double kGradTol = 1e-4;

TEST(ComplexLinearTest, IdentityWeights) {
  ComplexLinear fc(3, 3);
  for (std::size_t i = 0; i < 3; ++i) fc.weight().set(i * 3 + i, {1, 0});
  std::mt19937_64 rng(1);
  const ComplexTensor x = RandomTensor({4, 3}, rng);
  EXPECT_EQ(fc.Forward(x, Mode::kInference), x);
}

TEST(ComplexLinearTest, RotationByI) {
  ComplexLinear fc(1, 1);
  fc.weight().set(0, {0, 1});
  const ComplexTensor x = ComplexTensor::Filled({1, 1}, {2.0, -3.0});
  EXPECT_EQ(fc.Forward(x, Mode::kInference).at(0), (Complex{3.0, 2.0}));
}

TEST(ComplexLinearTest, MatchesScalarDotProducts) {
  std::mt19937_64 rng(2);
  ComplexLinear fc(4, 3);
  RandomizeParams(fc.Params(), rng);
  const ComplexTensor x = RandomTensor({5, 4}, rng);
  const ComplexTensor y = fc.Forward(x, Mode::kInference);
  for (std::size_t b = 0; b < 5; ++b) {
    for (std::size_t o = 0; o < 3; ++o) {
      Complex acc = fc.bias().at(o);
      for (std::size_t i = 0; i < 4; ++i) {
        acc = acc + fc.weight().at(o * 4 + i) * x.at(b * 4 + i);
      }
      EXPECT_NEAR(y.re()[b * 3 + o], acc.re, 1e-12);
      EXPECT_NEAR(y.im()[b * 3 + o], acc.im, 1e-12);
    }
  }
}

TEST(ComplexLinearTest, ScalarGradientMatchesHandDerivation) {
  ComplexLinear fc(1, 1);
  const Complex w{0.7, -1.3};
  const Complex x{2.0, 0.5};
  fc.weight().set(0, w);
  const ComplexTensor in = ComplexTensor::Filled({1, 1}, x);

  fc.Forward(in, Mode::kTraining);
  ComplexTensor dx = fc.Backward(ComplexTensor::Filled({1, 1}, {1, 0}));
  // out_r = x_r w_r - x_i w_i + b_r
  EXPECT_DOUBLE_EQ(fc.weight_grad().re()[0], x.re);
  EXPECT_DOUBLE_EQ(fc.weight_grad().im()[0], -x.im);
  EXPECT_DOUBLE_EQ(dx.re()[0], w.re);
  EXPECT_DOUBLE_EQ(dx.im()[0], -w.im);
  EXPECT_DOUBLE_EQ(fc.bias_grad().re()[0], 1.0);

  fc.ZeroGrad();
  fc.Forward(in, Mode::kTraining);
  dx = fc.Backward(ComplexTensor::Filled({1, 1}, {0, 1}));
  // out_i = x_r w_i + x_i w_r + b_i
  EXPECT_DOUBLE_EQ(fc.weight_grad().re()[0], x.im);
  EXPECT_DOUBLE_EQ(fc.weight_grad().im()[0], x.re);
  EXPECT_DOUBLE_EQ(dx.re()[0], w.im);
  EXPECT_DOUBLE_EQ(dx.im()[0], w.re);
  EXPECT_DOUBLE_EQ(fc.bias_grad().im()[0], 1.0);
}

TEST(ComplexConv2dTest, UnitKernels) {
  std::mt19937_64 rng(3);
  const ComplexTensor x = RandomTensor({2, 1, 5, 4}, rng);
  ComplexConv2d conv(1, 1, {.kernel = 1});
  conv.weight().set(0, {1, 0});
  EXPECT_EQ(conv.Forward(x, Mode::kInference), x);

  conv.weight().set(0, {0, 1});
  const ComplexTensor y = conv.Forward(x, Mode::kInference);
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_EQ(y.re()[i], -x.im()[i]);
    EXPECT_EQ(y.im()[i], x.re()[i]);
  }
}

TEST(ComplexConv2dTest, BoxKernelOnConstantInput) {
  ComplexConv2d conv(1, 1, {.kernel = 2});
  conv.weight().Fill({1, 0});
  const ComplexTensor x = ComplexTensor::Filled({1, 1, 4, 4}, {1.5, 0});
  const ComplexTensor y = conv.Forward(x, Mode::kInference);
  ASSERT_EQ(y.shape(), (Shape{1, 1, 3, 3}));
  for (std::size_t i = 0; i < y.size(); ++i) {
    EXPECT_EQ(y.at(i), (Complex{6.0, 0.0}));
  }
}

TEST(ComplexConv2dTest, MatchesScalarLoopOracle) {
  std::mt19937_64 rng(4);
  for (const ConvGeometry g : {ConvGeometry{3, 1, 0}, ConvGeometry{4, 2, 1},
                               ConvGeometry{3, 2, 2}}) {
    ComplexConv2d conv(2, 3, g);
    RandomizeParams(conv.Params(), rng);
    const ComplexTensor x = RandomTensor({2, 2, 7, 6}, rng);
    const ComplexTensor expected =
        NaiveConv(x, conv.weight(), conv.bias(), g);
    const ComplexTensor y = conv.Forward(x, Mode::kInference);
    ASSERT_EQ(y.shape(), expected.shape());
    EXPECT_LE(MaxAbsDiff(y, expected), 1e-12);
  }
}

TEST(ComplexConv2dTest, DegenerateOutputNamesDimensions) {
  ComplexConv2d conv(1, 1, {.kernel = 5});
  try {
    conv.Forward(ComplexTensor({1, 1, 3, 8}), Mode::kInference);
    FAIL() << "expected ShapeError";
  } catch (const ShapeError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("height"), std::string::npos) << msg;
    EXPECT_NE(msg.find("input 3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("kernel 5"), std::string::npos) << msg;
  }
  EXPECT_THROW(ComplexConv2d(1, 1, {.kernel = 1, .stride = 0}),
               std::invalid_argument);
}

TEST(ComplexDeconv2dTest, UnitKernelIsIdentity) {
  std::mt19937_64 rng(5);
  ComplexDeconv2d deconv(1, 1, {.kernel = 1});
  deconv.weight().set(0, {1, 0});
  const ComplexTensor x = RandomTensor({3, 1, 4, 4}, rng);
  EXPECT_EQ(deconv.Forward(x, Mode::kInference), x);
}

TEST(ComplexDeconv2dTest, OutputSize) {
  ComplexDeconv2d deconv(2, 1, {.kernel = 3, .stride = 2});
  const ComplexTensor y =
      deconv.Forward(ComplexTensor({1, 2, 4, 4}), Mode::kInference);
  EXPECT_EQ(y.shape(), (Shape{1, 1, 9, 9}));
  EXPECT_EQ(DeconvOutputSize(4, {4, 2, 1}, "h"), 8u);
  EXPECT_THROW(DeconvOutputSize(1, {2, 1, 1}, "h"), ShapeError);
}

TEST(ComplexDeconv2dTest, MatchesScalarLoopOracle) {
  std::mt19937_64 rng(6);
  for (const ConvGeometry g : {ConvGeometry{3, 1, 0}, ConvGeometry{4, 2, 1},
                               ConvGeometry{3, 2, 0}}) {
    ComplexDeconv2d deconv(3, 2, g);
    RandomizeParams(deconv.Params(), rng);
    const ComplexTensor x = RandomTensor({2, 3, 4, 5}, rng);
    const ComplexTensor expected =
        NaiveDeconv(x, deconv.weight(), deconv.bias(), g);
    const ComplexTensor y = deconv.Forward(x, Mode::kInference);
    ASSERT_EQ(y.shape(), expected.shape());
    EXPECT_LE(MaxAbsDiff(y, expected), 1e-12);
  }
}

TEST(ComplexDeconv2dTest, AdjointOfConvolution) {
  std::mt19937_64 rng(7);
  const ConvGeometry g{4, 2, 1};
  ComplexConv2d conv(3, 2, g);
  ComplexDeconv2d deconv(2, 3, g);
  std::normal_distribution<double> n;
  for (double& v : conv.weight().re()) v = n(rng);
  // Shared real kernel; both layers use the [2, 3, k, k] layout.
  std::copy(conv.weight().re().begin(), conv.weight().re().end(),
            deconv.weight().re().begin());

  const ComplexTensor x = RandomTensor({2, 3, 8, 8}, rng);
  const ComplexTensor y = RandomTensor({2, 2, 4, 4}, rng);
  const double lhs = Contract(conv.Forward(x, Mode::kInference), y);
  const double rhs = Contract(x, deconv.Forward(y, Mode::kInference));
  EXPECT_NEAR(lhs, rhs, 1e-10 * std::max(1.0, std::abs(lhs)));
}

TEST(CReluTest, Examples) {
  CRelu act;
  ComplexTensor x({3});
  x.set(0, {3, 4});
  x.set(1, {-1, -2});
  x.set(2, {-1, 2});
  const ComplexTensor y = act.Forward(x, Mode::kInference);
  EXPECT_EQ(y.at(0), (Complex{3, 4}));
  EXPECT_EQ(y.at(1), (Complex{0, 0}));
  EXPECT_EQ(y.at(2), (Complex{0, 2}));
}

TEST(CReluTest, Idempotent) {
  std::mt19937_64 rng(8);
  CRelu act;
  const ComplexTensor x = RandomTensor({4, 2, 3, 3}, rng);
  const ComplexTensor once = act.Forward(x, Mode::kInference);
  EXPECT_EQ(act.Forward(once, Mode::kInference), once);
}

TEST(BackwardTest, ZeroUpstreamGivesZeroGradients) {
  std::mt19937_64 rng(9);
  ComplexConv2d conv(2, 2, {3, 1, 1});
  RandomizeParams(conv.Params(), rng);
  const ComplexTensor x = RandomTensor({2, 2, 5, 5}, rng);
  const ComplexTensor y = conv.Forward(x, Mode::kTraining);
  conv.ZeroGrad();
  const ComplexTensor dx = conv.Backward(ComplexTensor(y.shape()));
  for (double v : dx.re()) EXPECT_EQ(v, 0.0);
  for (double v : dx.im()) EXPECT_EQ(v, 0.0);
  for (auto& p : conv.Params()) {
    for (double v : p.grad) EXPECT_EQ(v, 0.0);
  }
}

TEST(BackwardTest, MissingCacheThrows) {
  ComplexLinear fc(2, 2);
  EXPECT_THROW(fc.Backward(ComplexTensor({1, 2})), std::logic_error);
  ComplexConv2d conv(1, 1, {1});
  EXPECT_THROW(conv.Backward(ComplexTensor({1, 1, 1, 1})), std::logic_error);
  ComplexDeconv2d deconv(1, 1, {1});
  EXPECT_THROW(deconv.Backward(ComplexTensor({1, 1, 1, 1})),
               std::logic_error);
  CRelu act;
  EXPECT_THROW(act.Backward(ComplexTensor({1})), std::logic_error);
  ComplexBatchNorm bn(1);
  EXPECT_THROW(bn.Backward(ComplexTensor({2, 1})), std::logic_error);
}

TEST(GradientCheckTest, ComplexLinear) {
  std::mt19937_64 rng(10);
  ComplexLinear fc(5, 3);
  RandomizeParams(fc.Params(), rng);
  const auto r = CheckLayerGradients(fc, RandomTensor({4, 5}, rng),
                                     Mode::kTraining, rng);
  EXPECT_LT(r.worst(), kGradTol);
}

TEST(GradientCheckTest, ComplexConv2d) {
  std::mt19937_64 rng(11);
  ComplexConv2d conv(2, 3, {4, 2, 1});
  RandomizeParams(conv.Params(), rng);
  const auto r = CheckLayerGradients(conv, RandomTensor({2, 2, 6, 6}, rng),
                                     Mode::kTraining, rng);
  EXPECT_LT(r.worst(), kGradTol);
}

TEST(GradientCheckTest, ComplexDeconv2d) {
  std::mt19937_64 rng(12);
  ComplexDeconv2d deconv(3, 2, {4, 2, 1});
  RandomizeParams(deconv.Params(), rng);
  const auto r = CheckLayerGradients(deconv, RandomTensor({2, 3, 3, 3}, rng),
                                     Mode::kTraining, rng);
  EXPECT_LT(r.worst(), kGradTol);
}

TEST(GradientCheckTest, CRelu) {
  std::mt19937_64 rng(13);
  CRelu act;
  ComplexTensor x = RandomTensor({3, 2, 4}, rng);
  // Keep every entry away from the kink so central differences are exact.
  for (double& v : x.re()) v += v >= 0 ? 0.1 : -0.1;
  for (double& v : x.im()) v += v >= 0 ? 0.1 : -0.1;
  const auto r = CheckLayerGradients(act, x, Mode::kTraining, rng);
  EXPECT_LT(r.worst(), kGradTol);
}

TEST(RealLinearTest, GradientCheck) {
  std::mt19937_64 rng(14);
  RealLinear fc(6, 3);
  fc.Initialize(rng);
  RealTensor x({4, 6});
  std::normal_distribution<double> n;
  for (double& v : x.data()) v = n(rng);
  RealTensor w({4, 3});
  for (double& v : w.data()) v = n(rng);
  auto loss = [&] {
    const RealTensor y = fc.Forward(x);
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += y[i] * w[i];
    return s;
  };
  fc.ZeroGrad();
  fc.Forward(x);
  const RealTensor dx = fc.Backward(w);
  EXPECT_LT(testing::MaxRelativeError(
                dx.data(), testing::NumericGradient(x.data(), loss)),
            kGradTol);
  for (auto& p : fc.Params()) {
    const std::vector<double> analytic(p.grad.begin(), p.grad.end());
    EXPECT_LT(testing::MaxRelativeError(
                  analytic, testing::NumericGradient(p.value, loss)),
              kGradTol)
        << p.name;
  }
}

}  // namespace
}  // namespace cvgan
