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
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "coarsemed/dist.hpp"

namespace coarsemed {

using Point = std::uint32_t;
using Subset = std::vector<Point>;

// Distances are stored as integers over a per-space common denominator
// ("raw" values). kInfRaw encodes an infinite distance.
inline constexpr std::int64_t kInfRaw = std::numeric_limits<std::int64_t>::max();

inline std::int64_t raw_add(std::int64_t a, std::int64_t b) {
  return (a == kInfRaw || b == kInfRaw) ? kInfRaw : a + b;
}

struct WeightedEdge {
  Point a;
  Point b;
  Dist weight;
};

class FiniteMetricSpace;
using SpacePtr = std::shared_ptr<const FiniteMetricSpace>;

// A finite extended metric space. Either a dense distance table or an
// implicit l-infinity product of other spaces (points enumerated in
// lexicographic order, first factor most significant).
class FiniteMetricSpace {
  struct Key {};

 public:
  // Validates the metric axioms.
  static SpacePtr from_matrix(std::string name, std::vector<std::string> labels,
                              const std::vector<std::vector<Dist>>& table);
  // Shortest-path metric of a weighted graph; infinite across components.
  static SpacePtr from_graph(std::string name, std::vector<std::string> labels,
                             const std::vector<WeightedEdge>& edges);
  // Trusted constructor: raw must already be a metric at the given scale.
  static SpacePtr from_raw(std::string name, std::vector<std::string> labels, std::int64_t scale,
                           std::vector<std::int64_t> raw);
  static SpacePtr linf_product(std::vector<SpacePtr> factors, std::string name = {});
  // Dense copy of the induced metric on a subset, in subset order.
  static SpacePtr restrict(const FiniteMetricSpace& ambient, const Subset& subset, std::string name);

  FiniteMetricSpace(Key, std::string name, std::vector<std::string> labels, std::int64_t scale,
                    std::vector<std::int64_t> raw, std::vector<SpacePtr> factors, std::size_t n);

  const std::string& name() const { return name_; }
  std::size_t size() const { return n_; }
  std::string label(Point p) const;
  std::vector<std::string> labels() const;

  std::int64_t scale() const { return scale_; }
  std::int64_t raw(Point a, Point b) const {
    if (!factors_.empty()) return product_raw(a, b);
    return raw_[static_cast<std::size_t>(a) * n_ + b];
  }
  Dist dist(Point a, Point b) const { return to_dist(raw(a, b)); }
  // Row-major raw table, or nullptr for implicit products.
  const std::int64_t* dense_data() const { return factors_.empty() ? raw_.data() : nullptr; }
  Dist to_dist(std::int64_t raw) const;
  // Largest raw value r with r / scale <= t.
  std::int64_t raw_floor(const Dist& t) const;
  // Smallest raw value r with r / scale >= t.
  std::int64_t raw_ceil(const Dist& t) const;

  bool is_product() const { return !factors_.empty(); }
  const std::vector<SpacePtr>& factors() const { return factors_; }
  std::vector<Point> decode(Point p) const;
  Point encode(std::span<const Point> coords) const;

  Dist diameter() const;  // over finite pairs
  bool connected() const;
  // Sorted distinct finite raw distances (including 0).
  std::vector<std::int64_t> distinct_finite_raw() const;
  // Throws InputError naming the first violated axiom.
  void validate() const;

 private:
  std::int64_t product_raw(Point a, Point b) const;

  std::string name_;
  std::vector<std::string> labels_;
  std::int64_t scale_ = 1;
  std::vector<std::int64_t> raw_;
  std::vector<SpacePtr> factors_;
  std::vector<std::int64_t> factor_mult_;
  std::size_t n_ = 0;
};

// Point sets and maps compare by label sequence.
bool same_points(const FiniteMetricSpace& a, const FiniteMetricSpace& b);

// sup_{u in U} d(u, V). V must be nonempty.
Dist excess(const Subset& U, const Subset& V, const FiniteMetricSpace& ambient);
Dist hausdorff_distance(const Subset& U, const Subset& V, const FiniteMetricSpace& ambient);
// Closed r-neighbourhood of U.
Subset neighbourhood(const Subset& U, const Dist& r, const FiniteMetricSpace& ambient);

}  // namespace coarsemed
