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

#include "coarsemed/rips.hpp"

#include <algorithm>

#include "coarsemed/errors.hpp"
#include "coarsemed/parallel.hpp"

namespace coarsemed {

std::vector<std::pair<Point, Point>> RipsGraph::edges() const {
  std::vector<std::pair<Point, Point>> out;
  const auto& m = *metric;
  for (Point a = 0; a < m.size(); ++a) {
    for (Point b = a + 1; b < m.size(); ++b) {
      if (m.raw(a, b) == 1) out.emplace_back(a, b);
    }
  }
  return out;
}

RipsGraph rips_graph(const SpacePtr& base, const Dist& scale) {
  const auto& X = *base;
  const std::size_t n = X.size();
  const std::int64_t bound = X.raw_floor(scale);
  std::vector<std::vector<Point>> adj(n);
  for (Point a = 0; a < n; ++a) {
    for (Point b = 0; b < n; ++b) {
      if (a == b) continue;
      const auto d = X.raw(a, b);
      if (d <= bound && (d != kInfRaw || scale.is_infinite())) adj[a].push_back(b);
    }
  }
  std::vector<std::int64_t> raw(n * n, kInfRaw);
  parallel_chunks(n, [&](std::size_t begin, std::size_t end, std::size_t) {
    std::vector<Point> queue;
    for (std::size_t s = begin; s < end; ++s) {
      std::int64_t* row = raw.data() + s * n;
      queue.assign(1, static_cast<Point>(s));
      row[s] = 0;
      for (std::size_t head = 0; head < queue.size(); ++head) {
        const Point u = queue[head];
        for (Point v : adj[u]) {
          if (row[v] == kInfRaw) {
            row[v] = row[u] + 1;
            queue.push_back(v);
          }
        }
      }
    }
  });
  auto metric = FiniteMetricSpace::from_raw("Rips_" + scale.to_string() + "(" + X.name() + ")", X.labels(), 1,
                                            std::move(raw));
  return {base, scale, std::move(metric)};
}

ControlledMap xi_map(const RipsGraph& rips) {
  auto xi = underlying_identity(rips.metric, rips.base);
  for (const auto& s : xi.control().samples()) {
    if (s.bound > rips.scale * s.threshold) {
      throw AssertionFailure("xi_lipschitz", "control " + s.bound.to_string() + " at t=" +
                                                 s.threshold.to_string() + " exceeds scale*t");
    }
  }
  return xi;
}

const DistortionEntry& DistortionTable::at(std::size_t i, std::size_t j) const {
  if (i > j || j >= scales.size()) throw std::out_of_range("distortion index");
  // Row i holds entries (i, i), ..., (i, m-1).
  const std::size_t m = scales.size();
  const std::size_t offset = i * m - i * (i - 1) / 2;
  return entries[offset + (j - i)];
}

DistortionTable filtration_distortion(const SpacePtr& space, std::vector<Dist> scales) {
  if (scales.empty()) throw InputError("filtration_distortion needs at least one scale");
  if (!std::is_sorted(scales.begin(), scales.end())) throw InputError("scales must be sorted");
  std::vector<RipsGraph> graphs;
  graphs.reserve(scales.size());
  for (const auto& s : scales) graphs.push_back(rips_graph(space, s));
  const std::size_t n = space->size();
  DistortionTable table;
  table.scales = scales;
  for (std::size_t i = 0; i < scales.size(); ++i) {
    for (std::size_t j = i; j < scales.size(); ++j) {
      const auto& ms = *graphs[i].metric;
      const auto& mt = *graphs[j].metric;
      DistortionEntry e{scales[i], scales[j], Dist(1)};
      for (Point a = 0; a < n; ++a) {
        for (Point b = a + 1; b < n; ++b) {
          const auto dt = mt.raw(a, b);
          if (dt == kInfRaw) continue;
          const auto ds = ms.raw(a, b);
          if (ds == kInfRaw) {
            ++e.disconnected_pairs;
            continue;
          }
          e.ratio = max(e.ratio, Dist(ds, dt));
        }
      }
      table.entries.push_back(e);
    }
  }
  const std::size_t last = scales.size() - 1;
  for (std::size_t i = 0; i <= last; ++i) {
    if (!table.at(i, last).infinite_flag()) {
      table.recommended_scale = scales[i];
      break;
    }
  }
  return table;
}

}  // namespace coarsemed
