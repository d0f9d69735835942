// Copyright 2026 The coarsemed Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Glue between library objects and the oracle's plain matrices.

#pragma once

#include <cstdint>
#include <vector>

#include "coarsemed/controlled_map.hpp"
#include "coarsemed/median.hpp"
#include "oracles.hpp"

namespace support {

// Integer-valued spaces only; infinite distances map to oracle::kInf.
inline oracle::Mat to_mat(const coarsemed::FiniteMetricSpace& X) {
  const int n = static_cast<int>(X.size());
  oracle::Mat d(n, std::vector<std::int64_t>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const auto v = X.dist(a, b);
      d[a][b] = v.is_infinite() ? oracle::kInf : v.numerator();
    }
  return d;
}

inline oracle::Op op_of(const coarsemed::TernaryOp& mu) {
  return [mu](int a, int b, int c) { return static_cast<int>(mu(a, b, c)); };
}

inline std::vector<int> table_of(const coarsemed::ControlledMap& f) {
  return {f.table().begin(), f.table().end()};
}

inline coarsemed::Dist D(std::int64_t v) { return coarsemed::Dist(v); }

}  // namespace support
