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

#pragma once

#include <cstdint>
#include <vector>

#include "coarsemed/metric_space.hpp"

// Fixture spaces: unit-edge graph metrics unless stated otherwise.
namespace coarsemed::gen {

SpacePtr path(std::size_t n, const Dist& edge_length = Dist(1));
SpacePtr cycle(std::size_t n);
SpacePtr grid(std::size_t rows, std::size_t cols);
SpacePtr hypercube(std::size_t dim);
// Centre 0 with leaves 1..k.
SpacePtr star(std::size_t leaves);
// parent[i] < i for i >= 1; parent[0] ignored.
SpacePtr tree_from_parents(const std::vector<Point>& parent, std::string name);
// Random recursive tree on n vertices; deterministic in seed.
std::vector<Point> random_tree_parents(std::size_t n, std::uint64_t seed);
SpacePtr random_tree(std::size_t n, std::uint64_t seed);

}  // namespace coarsemed::gen
