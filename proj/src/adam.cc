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

#include <cmath>
#include <string>

#include "cvgan/gan.h"

namespace cvgan {

void Adam::Initialize(const std::vector<ParamView>& params) {
  m_.clear();
  v_.clear();
  for (const auto& p : params) {
    m_.emplace_back(p.value.size(), 0.0);
    v_.emplace_back(p.value.size(), 0.0);
  }
  step_[0] = 0.0;
}

void Adam::Step(const std::vector<ParamView>& params) {
  if (m_.empty()) Initialize(params);
  if (params.size() != m_.size()) {
    throw ShapeError("adam state holds " + std::to_string(m_.size()) +
                     " tensors, got " + std::to_string(params.size()));
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i].value.size() != m_[i].size() ||
        params[i].grad.size() != m_[i].size()) {
      throw ShapeError("adam moment for " + params[i].name + " has " +
                       std::to_string(m_[i].size()) + " elements, parameter " +
                       std::to_string(params[i].value.size()) +
                       ", gradient " + std::to_string(params[i].grad.size()));
    }
  }
  step_[0] += 1.0;
  const double t = step_[0];
  const double c1 = 1.0 - std::pow(config_.beta1, t);
  const double c2 = 1.0 - std::pow(config_.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto value = params[i].value;
    const auto grad = params[i].grad;
    auto& m = m_[i];
    auto& v = v_[i];
    for (std::size_t j = 0; j < value.size(); ++j) {
      const double g = grad[j];
      m[j] = config_.beta1 * m[j] + (1.0 - config_.beta1) * g;
      v[j] = config_.beta2 * v[j] + (1.0 - config_.beta2) * g * g;
      value[j] -= config_.lr * (m[j] / c1) /
                  (std::sqrt(v[j] / c2) + config_.epsilon);
    }
  }
}

std::vector<BufferView> Adam::Buffers(const std::vector<ParamView>& params) {
  if (m_.empty()) Initialize(params);
  std::vector<BufferView> out;
  for (std::size_t i = 0; i < params.size() && i < m_.size(); ++i) {
    out.push_back({params[i].name + ".m", params[i].shape, m_[i]});
    out.push_back({params[i].name + ".v", params[i].shape, v_[i]});
  }
  out.push_back({"step", {1}, step_});
  return out;
}

}  // namespace cvgan
