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

#include "coarsemed/generators.hpp"

#include <random>
#include <string>

namespace coarsemed::gen {

namespace {

std::vector<std::string> index_labels(std::size_t n) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  return labels;
}

}  // namespace

SpacePtr path(std::size_t n, const Dist& edge_length) {
  std::vector<WeightedEdge> edges;
  for (Point i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, edge_length});
  const std::string suffix = edge_length == Dist(1) ? "" : "[" + edge_length.to_string() + "]";
  return FiniteMetricSpace::from_graph("P" + std::to_string(n) + suffix, index_labels(n), edges);
}

SpacePtr cycle(std::size_t n) {
  std::vector<WeightedEdge> edges;
  for (Point i = 0; i < n; ++i) edges.push_back({i, static_cast<Point>((i + 1) % n), Dist(1)});
  return FiniteMetricSpace::from_graph("C" + std::to_string(n), index_labels(n), edges);
}

SpacePtr grid(std::size_t rows, std::size_t cols) {
  std::vector<std::string> labels;
  std::vector<WeightedEdge> edges;
  auto id = [cols](std::size_t r, std::size_t c) { return static_cast<Point>(r * cols + c); };
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      labels.push_back("(" + std::to_string(r) + "," + std::to_string(c) + ")");
      if (r + 1 < rows) edges.push_back({id(r, c), id(r + 1, c), Dist(1)});
      if (c + 1 < cols) edges.push_back({id(r, c), id(r, c + 1), Dist(1)});
    }
  }
  return FiniteMetricSpace::from_graph("G" + std::to_string(rows) + "x" + std::to_string(cols),
                                       std::move(labels), edges);
}

SpacePtr hypercube(std::size_t dim) {
  const std::size_t n = std::size_t{1} << dim;
  std::vector<std::string> labels;
  std::vector<WeightedEdge> edges;
  for (std::size_t v = 0; v < n; ++v) {
    std::string bits;
    for (std::size_t k = dim; k-- > 0;) bits += ((v >> k) & 1) ? '1' : '0';
    labels.push_back(bits.empty() ? "e" : bits);
    for (std::size_t k = 0; k < dim; ++k) {
      const std::size_t w = v ^ (std::size_t{1} << k);
      if (v < w) edges.push_back({static_cast<Point>(v), static_cast<Point>(w), Dist(1)});
    }
  }
  return FiniteMetricSpace::from_graph("Q" + std::to_string(dim), std::move(labels), edges);
}

SpacePtr star(std::size_t leaves) {
  std::vector<WeightedEdge> edges;
  for (Point i = 1; i <= leaves; ++i) edges.push_back({0, i, Dist(1)});
  return FiniteMetricSpace::from_graph("S" + std::to_string(leaves), index_labels(leaves + 1), edges);
}

SpacePtr tree_from_parents(const std::vector<Point>& parent, std::string name) {
  std::vector<WeightedEdge> edges;
  for (Point i = 1; i < parent.size(); ++i) edges.push_back({parent[i], i, Dist(1)});
  return FiniteMetricSpace::from_graph(std::move(name), index_labels(parent.size()), edges);
}

std::vector<Point> random_tree_parents(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Point> parent(n, 0);
  for (std::size_t i = 1; i < n; ++i) parent[i] = static_cast<Point>(rng() % i);
  return parent;
}

SpacePtr random_tree(std::size_t n, std::uint64_t seed) {
  return tree_from_parents(random_tree_parents(n, seed),
                           "T" + std::to_string(n) + "s" + std::to_string(seed));
}

}  // namespace coarsemed::gen
