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

#ifndef CVGAN_SRC_GEMM_H_
#define CVGAN_SRC_GEMM_H_

#include <cstddef>

namespace cvgan::internal {

// Row-major C = alpha * op(A) * op(B) + beta * C, op(A) is m x k and op(B)
// is k x n.
void Gemm(bool trans_a, bool trans_b, std::size_t m, std::size_t n,
          std::size_t k, double alpha, const double* a, const double* b,
          double beta, double* c);

}  // namespace cvgan::internal

#endif  // CVGAN_SRC_GEMM_H_
