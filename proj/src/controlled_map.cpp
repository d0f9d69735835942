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

#include "coarsemed/controlled_map.hpp"

#include <algorithm>
#include <map>

#include "coarsemed/errors.hpp"

namespace coarsemed {

ControlFunction::ControlFunction(std::vector<ControlSample> samples, std::optional<Dist> infinite_fiber)
    : samples_(std::move(samples)), infinite_fiber_(std::move(infinite_fiber)) {
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (samples_[i].threshold.is_infinite()) throw std::invalid_argument("control threshold must be finite");
    if (i == 0) continue;
    if (!(samples_[i - 1].threshold < samples_[i].threshold)) {
      throw std::invalid_argument("control thresholds must be strictly increasing");
    }
    if (samples_[i].bound < samples_[i - 1].bound) {
      throw std::invalid_argument("control bounds must be non-decreasing");
    }
  }
}

Dist ControlFunction::operator()(const Dist& t) const {
  if (samples_.empty()) return Dist(0);
  auto it = std::lower_bound(samples_.begin(), samples_.end(), t,
                             [](const ControlSample& s, const Dist& v) { return s.threshold < v; });
  if (it == samples_.end()) return samples_.back().bound;
  return it->bound;
}

ControlFunction ControlFunction::pointwise_max(std::span<const ControlFunction> members) {
  std::vector<Dist> thresholds;
  std::optional<Dist> fiber;
  for (const auto& m : members) {
    for (const auto& s : m.samples()) thresholds.push_back(s.threshold);
    if (m.infinite_fiber_diameter()) {
      fiber = fiber ? max(*fiber, *m.infinite_fiber_diameter()) : *m.infinite_fiber_diameter();
    }
  }
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
  std::vector<ControlSample> samples;
  samples.reserve(thresholds.size());
  for (const auto& t : thresholds) {
    Dist bound(0);
    for (const auto& m : members) bound = max(bound, m(t));
    samples.push_back({t, bound});
  }
  return ControlFunction(std::move(samples), fiber);
}

ControlFunction upper_control_of(const FiniteMetricSpace& domain, const FiniteMetricSpace& codomain,
                                 std::span<const Point> table) {
  const std::size_t n = domain.size();
  if (table.size() != n) throw InputError("map table is not total on its domain");
  for (Point p : table) {
    if (p >= codomain.size()) throw InputError("map value out of codomain range");
  }
  const auto thresholds = domain.distinct_finite_raw();
  std::vector<std::int64_t> best(thresholds.size(), 0);
  std::int64_t fiber = -1;
  for (Point a = 0; a < n; ++a) {
    for (Point b = a + 1; b < n; ++b) {
      const auto d = domain.raw(a, b);
      const auto img = codomain.raw(table[a], table[b]);
      if (d == kInfRaw) {
        fiber = std::max(fiber, img);
        continue;
      }
      const auto k = static_cast<std::size_t>(
          std::lower_bound(thresholds.begin(), thresholds.end(), d) - thresholds.begin());
      best[k] = std::max(best[k], img);
    }
  }
  std::vector<ControlSample> samples;
  samples.reserve(thresholds.size());
  std::int64_t running = 0;
  for (std::size_t k = 0; k < thresholds.size(); ++k) {
    running = std::max(running, best[k]);
    samples.push_back({domain.to_dist(thresholds[k]), codomain.to_dist(running)});
  }
  std::optional<Dist> fiber_diam;
  if (fiber >= 0) fiber_diam = codomain.to_dist(fiber);
  return ControlFunction(std::move(samples), fiber_diam);
}

ControlledMap::ControlledMap(SpacePtr domain, SpacePtr codomain, std::vector<Point> table)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), table_(std::move(table)) {
  control_ = upper_control_of(*domain_, *codomain_, table_);
}

ControlledMap identity_map(const SpacePtr& space) { return underlying_identity(space, space); }

ControlledMap underlying_identity(const SpacePtr& from, const SpacePtr& to) {
  if (from->size() != to->size()) throw InputError("underlying identity between spaces of different sizes");
  std::vector<Point> table(from->size());
  for (Point p = 0; p < table.size(); ++p) table[p] = p;
  return ControlledMap(from, to, std::move(table));
}

ControlledMap compose(const ControlledMap& g, const ControlledMap& f) {
  if (!same_points(*f.codomain(), *g.domain())) {
    throw InputError("composition type mismatch: '" + f.codomain()->name() + "' vs '" +
                     g.domain()->name() + "'");
  }
  std::vector<Point> table(f.table().size());
  for (Point p = 0; p < table.size(); ++p) table[p] = g(f(p));
  return ControlledMap(f.domain(), g.codomain(), std::move(table));
}

Dist closeness_defect(const ControlledMap& f, const ControlledMap& g) {
  if (!same_points(*f.domain(), *g.domain()) || !same_points(*f.codomain(), *g.codomain())) {
    throw InputError("closeness of maps with different domains or codomains");
  }
  const auto& cod = *f.codomain();
  std::int64_t worst = 0;
  for (Point p = 0; p < f.table().size(); ++p) worst = std::max(worst, cod.raw(f(p), g(p)));
  return cod.to_dist(worst);
}

EquivalenceReport certify_coarse_equivalence(const ControlledMap& f, const ControlledMap& g) {
  const auto gf = compose(g, f);
  const auto fg = compose(f, g);
  return {closeness_defect(gf, identity_map(f.domain())), closeness_defect(fg, identity_map(f.codomain()))};
}

}  // namespace coarsemed
