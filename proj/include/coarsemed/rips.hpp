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
#include <utility>
#include <vector>

#include "coarsemed/controlled_map.hpp"

namespace coarsemed {

// Graph on the points of base with p ~ q iff d(p, q) <= scale, carrying its
// combinatorial path metric.
struct RipsGraph {
  SpacePtr base;
  Dist scale;
  SpacePtr metric;

  std::vector<std::pair<Point, Point>> edges() const;
};

RipsGraph rips_graph(const SpacePtr& base, const Dist& scale);

// Underlying identity Rips_s X -> X. Checks that its control stays below s * t.
ControlledMap xi_map(const RipsGraph& rips);

struct DistortionEntry {
  Dist sigma;
  Dist tau;
  // max of metric_sigma / metric_tau over distinct pairs finite at both
  // scales; 1 when there are none.
  Dist ratio;
  // pairs finite at tau but infinite at sigma
  std::size_t disconnected_pairs = 0;
  bool infinite_flag() const { return disconnected_pairs > 0; }
};

struct DistortionTable {
  std::vector<Dist> scales;
  std::vector<DistortionEntry> entries;  // all sigma <= tau, row-major
  // Smallest scale with no infinity flag against the largest scale.
  std::optional<Dist> recommended_scale;

  const DistortionEntry& at(std::size_t i, std::size_t j) const;
};

DistortionTable filtration_distortion(const SpacePtr& space, std::vector<Dist> scales);

}  // namespace coarsemed
