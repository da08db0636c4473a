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
#include <cmath>
#include <string>

#include "cvgan/gan.h"

namespace cvgan {
namespace {

double Sigmoid(double u) {
  if (u >= 0.0) return 1.0 / (1.0 + std::exp(-u));
  const double e = std::exp(u);
  return e / (1.0 + e);
}

double Clamp(double p) {
  return std::clamp(p, kProbabilityClamp, 1.0 - kProbabilityClamp);
}

void CheckLogits(const RealTensor& logits, std::size_t width,
                 const char* what) {
  if (logits.rank() != 2 || (logits.dim(0) > 0 && logits.dim(1) != width)) {
    throw ShapeError(std::string(what) + " logits " +
                     ShapeToString(logits.shape()) + " are not [B, " +
                     std::to_string(width) + "]");
  }
}

std::span<const double> Row(const RealTensor& t, std::size_t i) {
  return t.data().subspan(i * t.dim(1), t.dim(1));
}

// Writes du/dl for u = l[K] - LogSumExp(l[0..K)) scaled by s into grad.
void AccumulateFakeLogitGradient(std::span<const double> logits, double s,
                                 std::span<double> grad) {
  const std::size_t k = logits.size() - 1;
  const double lse = LogSumExp(logits.first(k));
  for (std::size_t j = 0; j < k; ++j) {
    grad[j] -= s * std::exp(logits[j] - lse);
  }
  grad[k] += s;
}

double FakeLogitMargin(std::span<const double> logits) {
  return logits.back() - LogSumExp(logits.first(logits.size() - 1));
}

}  // namespace

double LogSumExp(std::span<const double> logits) {
  if (logits.empty()) {
    throw std::invalid_argument("log-sum-exp of an empty vector");
  }
  const double max = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double l : logits) sum += std::exp(l - max);
  return std::log(sum) + max;
}

double FakeProbability(std::span<const double> logits) {
  if (logits.size() < 2) {
    throw std::invalid_argument("fake probability needs K+1 >= 2 logits");
  }
  return Sigmoid(FakeLogitMargin(logits));
}

DiscriminatorLoss ComputeDiscriminatorLoss(const RealTensor& labeled_logits,
                                           std::span<const int> labels,
                                           const RealTensor& unlabeled_logits,
                                           const RealTensor& fake_logits) {
  const std::size_t width = labeled_logits.rank() == 2
                                ? labeled_logits.dim(1)
                                : unlabeled_logits.dim(1);
  CheckLogits(labeled_logits, width, "labeled");
  CheckLogits(unlabeled_logits, width, "unlabeled");
  CheckLogits(fake_logits, width, "fake");
  if (labels.size() != labeled_logits.dim(0)) {
    throw ShapeError("got " + std::to_string(labels.size()) + " labels for " +
                     std::to_string(labeled_logits.dim(0)) +
                     " labeled logits");
  }
  const int k = static_cast<int>(width) - 1;

  DiscriminatorLoss out;
  out.grad_labeled = RealTensor(labeled_logits.shape());
  out.grad_unlabeled = RealTensor(unlabeled_logits.shape());
  out.grad_fake = RealTensor(fake_logits.shape());

  const std::size_t nl = labeled_logits.dim(0);
  for (std::size_t i = 0; i < nl; ++i) {
    const int y = labels[i];
    if (y < 1 || y > k) {
      throw std::out_of_range("label " + std::to_string(y) +
                              " outside 1.." + std::to_string(k));
    }
    const auto row = Row(labeled_logits, i);
    const double lse = LogSumExp(row);
    out.loss.l_labeled += (lse - row[y - 1]) / static_cast<double>(nl);
    auto grad = out.grad_labeled.data().subspan(i * width, width);
    for (std::size_t j = 0; j < width; ++j) {
      grad[j] = std::exp(row[j] - lse) / static_cast<double>(nl);
    }
    grad[y - 1] -= 1.0 / static_cast<double>(nl);
  }

  // -log(1 - p): d/du = p.
  const std::size_t nu = unlabeled_logits.dim(0);
  for (std::size_t i = 0; i < nu; ++i) {
    const auto row = Row(unlabeled_logits, i);
    const double p = FakeProbability(row);
    out.loss.l_unlabeled -= std::log(1.0 - Clamp(p)) / static_cast<double>(nu);
    AccumulateFakeLogitGradient(
        row, p / static_cast<double>(nu),
        out.grad_unlabeled.data().subspan(i * width, width));
  }

  // -log p: d/du = -(1 - p).
  const std::size_t nf = fake_logits.dim(0);
  for (std::size_t i = 0; i < nf; ++i) {
    const auto row = Row(fake_logits, i);
    const double p = FakeProbability(row);
    out.loss.l_generated -= std::log(Clamp(p)) / static_cast<double>(nf);
    AccumulateFakeLogitGradient(
        row, -(1.0 - p) / static_cast<double>(nf),
        out.grad_fake.data().subspan(i * width, width));
  }

  out.loss.l_total =
      out.loss.l_labeled + out.loss.l_unlabeled + out.loss.l_generated;
  return out;
}

GeneratorLoss ComputeGeneratorLoss(const RealTensor& fake_logits) {
  if (fake_logits.rank() != 2 || fake_logits.dim(1) < 2) {
    throw ShapeError("fake logits " + ShapeToString(fake_logits.shape()) +
                     " are not [B, K+1]");
  }
  GeneratorLoss out;
  out.grad_fake = RealTensor(fake_logits.shape());
  const std::size_t n = fake_logits.dim(0);
  const std::size_t width = fake_logits.dim(1);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = Row(fake_logits, i);
    const double p = FakeProbability(row);
    out.loss -= std::log(1.0 - Clamp(p)) / static_cast<double>(n);
    AccumulateFakeLogitGradient(row, p / static_cast<double>(n),
                                out.grad_fake.data().subspan(i * width, width));
  }
  return out;
}

}  // namespace cvgan
