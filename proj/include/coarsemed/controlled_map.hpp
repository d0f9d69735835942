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

#include <optional>
#include <span>
#include <vector>

#include "coarsemed/metric_space.hpp"

namespace coarsemed {

struct ControlSample {
  Dist threshold;
  Dist bound;
};

// Non-decreasing step function. Evaluation at t returns the bound at the
// smallest threshold >= t, or the final bound past the last threshold.
class ControlFunction {
 public:
  ControlFunction() = default;
  explicit ControlFunction(std::vector<ControlSample> samples,
                           std::optional<Dist> infinite_fiber_diameter = std::nullopt);

  Dist operator()(const Dist& t) const;
  const std::vector<ControlSample>& samples() const { return samples_; }
  // Largest image distance over pairs at infinite distance, if any exist.
  const std::optional<Dist>& infinite_fiber_diameter() const { return infinite_fiber_; }

  // Step function dominating every member; exact at the union of thresholds.
  static ControlFunction pointwise_max(std::span<const ControlFunction> members);

 private:
  std::vector<ControlSample> samples_;
  std::optional<Dist> infinite_fiber_;
};

// Minimal empirical modulus of a map given by table.
ControlFunction upper_control_of(const FiniteMetricSpace& domain, const FiniteMetricSpace& codomain,
                                 std::span<const Point> table);

class ControlledMap {
 public:
  ControlledMap(SpacePtr domain, SpacePtr codomain, std::vector<Point> table);

  const SpacePtr& domain() const { return domain_; }
  const SpacePtr& codomain() const { return codomain_; }
  const std::vector<Point>& table() const { return table_; }
  const ControlFunction& control() const { return control_; }
  Point operator()(Point p) const { return table_[p]; }

 private:
  SpacePtr domain_;
  SpacePtr codomain_;
  std::vector<Point> table_;
  ControlFunction control_;
};

ControlledMap identity_map(const SpacePtr& space);
// Underlying identity between two spaces on the same point list.
ControlledMap underlying_identity(const SpacePtr& from, const SpacePtr& to);
// g after f.
ControlledMap compose(const ControlledMap& g, const ControlledMap& f);

// Minimal kappa with f(x) within kappa of g(x) for all x.
Dist closeness_defect(const ControlledMap& f, const ControlledMap& g);

struct EquivalenceReport {
  Dist kappa_gf;  // closeness of g.f to the identity of X
  Dist kappa_fg;  // closeness of f.g to the identity of Y
  bool finite() const { return kappa_gf.is_finite() && kappa_fg.is_finite(); }
};

EquivalenceReport certify_coarse_equivalence(const ControlledMap& f, const ControlledMap& g);

}  // namespace coarsemed
