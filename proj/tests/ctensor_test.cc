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

#include "cvgan/ctensor.h"

#include <gtest/gtest.h>

#include <random>

#include "test_util.h"

namespace cvgan {
namespace {

using testing::MaxAbsDiff;
using testing::NaiveMatmul;
using testing::RandomTensor;

TEST(ComplexScalarTest, Multiplication) {
  const Complex c{2.5, -1.25};
  EXPECT_EQ((Complex{1, 0} * c), c);
  EXPECT_EQ((Complex{0, 1} * Complex{0, 1}), (Complex{-1, 0}));
  EXPECT_EQ((Complex{1, 2} * Complex{3, 4}), (Complex{-5, 10}));
}

TEST(ComplexScalarTest, AdditionAndSubtraction) {
  const Complex z{0.75, -3.5};
  EXPECT_EQ(z + Complex{}, z);
  EXPECT_EQ((Complex{1, 2} + Complex{3, 4}), (Complex{4, 6}));
  EXPECT_EQ(z - z, Complex{});
}

TEST(ComplexScalarTest, AlgebraicProperties) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  auto draw = [&] { return Complex{u(rng), u(rng)}; };
  auto near = [](Complex a, Complex b, double tol) {
    return std::abs(a.re - b.re) <= tol && std::abs(a.im - b.im) <= tol;
  };
  for (int trial = 0; trial < 2000; ++trial) {
    const Complex a = draw(), b = draw(), c = draw();
    const double scale = Abs(a) * Abs(b) * Abs(c) + 1.0;
    EXPECT_TRUE(near(a * b, b * a, 1e-12 * scale));
    EXPECT_TRUE(near((a * b) * c, a * (b * c), 1e-12 * scale));
    EXPECT_TRUE(near(a * (b + c), a * b + a * c, 1e-12 * scale));
    const double lhs = Abs(a * b), rhs = Abs(a) * Abs(b);
    EXPECT_NEAR(lhs, rhs, 1e-12 * rhs);
  }
}

TEST(ComplexTensorTest, ConstructionChecksSize) {
  EXPECT_THROW(ComplexTensor({2, 3}, std::vector<double>(5),
                             std::vector<double>(6)),
               ShapeError);
  ComplexTensor t({2, 3});
  EXPECT_EQ(t.size(), 6u);
  EXPECT_THROW(t.Reshape({4, 2}), ShapeError);
  t.Reshape({3, 2});
  EXPECT_EQ(t.shape(), (Shape{3, 2}));
}

TEST(ComplexTensorTest, ElementwiseExamples) {
  std::mt19937_64 rng(3);
  const ComplexTensor x = RandomTensor({3, 4}, rng);
  const ComplexTensor ones = ComplexTensor::Filled({3, 4}, {1, 0});
  EXPECT_EQ(ones * x, x);
  const ComplexTensor zero = x + Negate(x);
  for (std::size_t i = 0; i < zero.size(); ++i) {
    EXPECT_EQ(zero.at(i), Complex{});
  }
  const ComplexTensor a = ComplexTensor::Filled({2, 2}, {1, 1});
  const ComplexTensor sq = a * a;
  for (std::size_t i = 0; i < sq.size(); ++i) {
    EXPECT_EQ(sq.at(i), (Complex{0, 2}));
  }
  EXPECT_EQ((Complex{0, 1} * a).at(0), (Complex{-1, 1}));
}

TEST(ComplexTensorTest, ShapeMismatchNamesBothShapes) {
  const ComplexTensor a({2, 3}), b({3, 2});
  try {
    (void)(a + b);
    FAIL() << "expected ShapeError";
  } catch (const ShapeError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("[2, 3]"), std::string::npos) << msg;
    EXPECT_NE(msg.find("[3, 2]"), std::string::npos) << msg;
  }
}

TEST(ComplexMatmulTest, IdentityAndImaginaryUnit) {
  std::mt19937_64 rng(5);
  const ComplexTensor a = RandomTensor({3, 3}, rng);
  ComplexTensor eye({3, 3});
  for (std::size_t i = 0; i < 3; ++i) eye.set(i * 3 + i, {1, 0});
  EXPECT_LE(MaxAbsDiff(ComplexMatmul(a, eye), a), 1e-15);

  const ComplexTensor i_mat = ComplexTensor::Filled({1, 1}, {0, 1});
  EXPECT_EQ(ComplexMatmul(i_mat, i_mat).at(0), (Complex{-1, 0}));
}

TEST(ComplexMatmulTest, MatchesScalarLoopOracle) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> dim(1, 7);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = dim(rng), k = dim(rng), n = dim(rng);
    const ComplexTensor a = RandomTensor({m, k}, rng);
    const ComplexTensor b = RandomTensor({k, n}, rng);
    EXPECT_LE(MaxAbsDiff(ComplexMatmul(a, b), NaiveMatmul(a, b)), 1e-12);
  }
}

TEST(ComplexMatmulTest, RejectsInnerDimensionMismatch) {
  EXPECT_THROW(ComplexMatmul(ComplexTensor({2, 3}), ComplexTensor({2, 3})),
               ShapeError);
  EXPECT_THROW(ComplexMatmul(ComplexTensor({2}), ComplexTensor({2, 3})),
               ShapeError);
}

TEST(ConcatRealImagTest, Layout) {
  const ComplexTensor scalar = ComplexTensor::Filled({}, {3, 4});
  const RealTensor s = ConcatRealImag(scalar);
  EXPECT_EQ(s.shape(), (Shape{2}));
  EXPECT_EQ(s[0], 3.0);
  EXPECT_EQ(s[1], 4.0);

  std::mt19937_64 rng(9);
  ComplexTensor real_only = RandomTensor({2, 5}, rng);
  for (double& v : real_only.im()) v = 0.0;
  const RealTensor r = ConcatRealImag(real_only);
  for (std::size_t b = 0; b < 2; ++b)
    for (std::size_t c = 5; c < 10; ++c) EXPECT_EQ(r[b * 10 + c], 0.0);

  const ComplexTensor x = RandomTensor({4, 3}, rng);
  const RealTensor y = ConcatRealImag(x);
  ASSERT_EQ(y.shape(), (Shape{4, 6}));
  for (std::size_t b = 0; b < 4; ++b)
    for (std::size_t c = 0; c < 3; ++c) {
      EXPECT_EQ(y[b * 6 + c], x.re()[b * 3 + c]);
      EXPECT_EQ(y[b * 6 + 3 + c], x.im()[b * 3 + c]);
    }
  EXPECT_EQ(SplitRealImag(y, x.shape()), x);
}

}  // namespace
}  // namespace cvgan
