// Copyright 2026 The popsim Authors
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

#pragma once

#include <random>

#include "popsim/operator_algebra.hpp"

namespace popsim::testing {

inline ComplexMatrix random_hermitian(std::mt19937_64& rng, Eigen::Index dim) {
  std::normal_distribution<double> normal;
  ComplexMatrix a(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c) a(r, c) = Complex(normal(rng), normal(rng));
  return (a + a.adjoint()) / 2.0;
}

inline ComplexMatrix diag(std::initializer_list<Complex> d) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(d.size()),
                                        static_cast<Eigen::Index>(d.size()));
  Eigen::Index k = 0;
  for (const auto& v : d) m(k, k) = v, ++k;
  return m;
}

}  // namespace popsim::testing
