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

#include "coarsemed/metric_space.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>

#include "coarsemed/errors.hpp"

namespace coarsemed {

namespace {

std::int64_t checked_lcm(std::int64_t a, std::int64_t b) {
  const std::int64_t g = std::gcd(a, b);
  const __int128 l = static_cast<__int128>(a / g) * b;
  if (l > (static_cast<__int128>(1) << 52)) {
    throw InputError("common denominator of distances exceeds 2^52");
  }
  return static_cast<std::int64_t>(l);
}

std::int64_t scaled(const Dist& d, std::int64_t scale) {
  if (d.is_infinite()) return kInfRaw;
  return d.numerator() * (scale / d.denominator());
}

void check_labels(const std::vector<std::string>& labels) {
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) throw InputError("duplicate point label '" + l + "'");
  }
}

}  // namespace

FiniteMetricSpace::FiniteMetricSpace(Key, std::string name, std::vector<std::string> labels,
                                     std::int64_t scale, std::vector<std::int64_t> raw,
                                     std::vector<SpacePtr> factors, std::size_t n)
    : name_(std::move(name)),
      labels_(std::move(labels)),
      scale_(scale),
      raw_(std::move(raw)),
      factors_(std::move(factors)),
      n_(n) {
  for (const auto& f : factors_) factor_mult_.push_back(scale_ / f->scale());
}

SpacePtr FiniteMetricSpace::from_matrix(std::string name, std::vector<std::string> labels,
                                        const std::vector<std::vector<Dist>>& table) {
  const std::size_t n = labels.size();
  if (table.size() != n) throw InputError("distance matrix has " + std::to_string(table.size()) +
                                          " rows for " + std::to_string(n) + " points");
  std::int64_t scale = 1;
  for (const auto& row : table) {
    if (row.size() != n) throw InputError("distance matrix row of wrong length");
    for (const auto& d : row) {
      if (d.is_finite()) scale = checked_lcm(scale, d.denominator());
    }
  }
  std::vector<std::int64_t> raw(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) raw[i * n + j] = scaled(table[i][j], scale);
  }
  auto space = from_raw(std::move(name), std::move(labels), scale, std::move(raw));
  space->validate();
  return space;
}

SpacePtr FiniteMetricSpace::from_graph(std::string name, std::vector<std::string> labels,
                                       const std::vector<WeightedEdge>& edges) {
  const std::size_t n = labels.size();
  std::int64_t scale = 1;
  for (const auto& e : edges) {
    if (e.a >= n || e.b >= n) throw InputError("edge endpoint out of range");
    if (e.a == e.b) throw InputError("self-loop edge at point " + std::to_string(e.a));
    if (e.weight.is_infinite() || e.weight == Dist(0)) {
      throw InputError("edge weights must be finite and positive");
    }
    scale = checked_lcm(scale, e.weight.denominator());
  }
  std::vector<std::vector<std::pair<Point, std::int64_t>>> adj(n);
  for (const auto& e : edges) {
    const auto w = scaled(e.weight, scale);
    adj[e.a].emplace_back(e.b, w);
    adj[e.b].emplace_back(e.a, w);
  }
  std::vector<std::int64_t> raw(n * n, kInfRaw);
  using Item = std::pair<std::int64_t, Point>;
  for (Point s = 0; s < n; ++s) {
    std::int64_t* row = raw.data() + static_cast<std::size_t>(s) * n;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    row[s] = 0;
    queue.emplace(0, s);
    while (!queue.empty()) {
      auto [d, u] = queue.top();
      queue.pop();
      if (d > row[u]) continue;
      for (auto [v, w] : adj[u]) {
        if (d + w < row[v]) {
          row[v] = d + w;
          queue.emplace(d + w, v);
        }
      }
    }
  }
  return from_raw(std::move(name), std::move(labels), scale, std::move(raw));
}

SpacePtr FiniteMetricSpace::from_raw(std::string name, std::vector<std::string> labels,
                                     std::int64_t scale, std::vector<std::int64_t> raw) {
  const std::size_t n = labels.size();
  if (raw.size() != n * n) throw InputError("raw distance table has wrong size");
  check_labels(labels);
  return std::make_shared<const FiniteMetricSpace>(Key{}, std::move(name), std::move(labels), scale,
                                                   std::move(raw), std::vector<SpacePtr>{}, n);
}

SpacePtr FiniteMetricSpace::linf_product(std::vector<SpacePtr> factors, std::string name) {
  if (factors.empty()) throw InputError("product of an empty list of spaces");
  std::int64_t scale = 1;
  std::size_t n = 1;
  std::string joined;
  for (const auto& f : factors) {
    scale = checked_lcm(scale, f->scale());
    if (f->size() != 0 && n > std::numeric_limits<Point>::max() / f->size()) {
      throw BudgetExceeded("product space has more than 2^32 points");
    }
    n *= f->size();
    joined += (joined.empty() ? "" : " x ") + f->name();
  }
  if (name.empty()) name = joined;
  return std::make_shared<const FiniteMetricSpace>(Key{}, std::move(name), std::vector<std::string>{},
                                                   scale, std::vector<std::int64_t>{}, std::move(factors), n);
}

SpacePtr FiniteMetricSpace::restrict(const FiniteMetricSpace& ambient, const Subset& subset, std::string name) {
  const std::size_t m = subset.size();
  std::vector<std::string> labels;
  labels.reserve(m);
  for (Point p : subset) {
    if (p >= ambient.size()) throw InputError("subset point out of range");
    labels.push_back(ambient.label(p));
  }
  std::vector<std::int64_t> raw(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) raw[i * m + j] = ambient.raw(subset[i], subset[j]);
  }
  return from_raw(std::move(name), std::move(labels), ambient.scale(), std::move(raw));
}

std::string FiniteMetricSpace::label(Point p) const {
  if (factors_.empty()) return labels_[p];
  const auto coords = decode(p);
  std::string out = "(";
  for (std::size_t k = 0; k < coords.size(); ++k) {
    if (k) out += ",";
    out += factors_[k]->label(coords[k]);
  }
  return out + ")";
}

std::vector<std::string> FiniteMetricSpace::labels() const {
  if (factors_.empty()) return labels_;
  std::vector<std::string> out;
  out.reserve(n_);
  for (Point p = 0; p < n_; ++p) out.push_back(label(p));
  return out;
}

Dist FiniteMetricSpace::to_dist(std::int64_t raw) const {
  if (raw == kInfRaw) return Dist::infinity();
  return Dist(raw, scale_);
}

std::int64_t FiniteMetricSpace::raw_floor(const Dist& t) const {
  if (t.is_infinite()) return kInfRaw;
  const __int128 num = static_cast<__int128>(t.numerator()) * scale_;
  return static_cast<std::int64_t>(num / t.denominator());
}

std::int64_t FiniteMetricSpace::raw_ceil(const Dist& t) const {
  if (t.is_infinite()) return kInfRaw;
  const __int128 num = static_cast<__int128>(t.numerator()) * scale_;
  return static_cast<std::int64_t>((num + t.denominator() - 1) / t.denominator());
}

std::vector<Point> FiniteMetricSpace::decode(Point p) const {
  std::vector<Point> coords(factors_.size());
  for (std::size_t k = factors_.size(); k-- > 0;) {
    const auto radix = static_cast<Point>(factors_[k]->size());
    coords[k] = p % radix;
    p /= radix;
  }
  return coords;
}

Point FiniteMetricSpace::encode(std::span<const Point> coords) const {
  if (coords.size() != factors_.size()) throw std::invalid_argument("encode: wrong coordinate count");
  Point p = 0;
  for (std::size_t k = 0; k < coords.size(); ++k) {
    p = p * static_cast<Point>(factors_[k]->size()) + coords[k];
  }
  return p;
}

std::int64_t FiniteMetricSpace::product_raw(Point a, Point b) const {
  std::int64_t best = 0;
  for (std::size_t k = factors_.size(); k-- > 0;) {
    const auto radix = static_cast<Point>(factors_[k]->size());
    const std::int64_t d = factors_[k]->raw(a % radix, b % radix);
    if (d == kInfRaw) return kInfRaw;
    best = std::max(best, d * factor_mult_[k]);
    a /= radix;
    b /= radix;
  }
  return best;
}

Dist FiniteMetricSpace::diameter() const {
  std::int64_t best = 0;
  for (Point a = 0; a < n_; ++a) {
    for (Point b = a + 1; b < n_; ++b) {
      const auto d = raw(a, b);
      if (d != kInfRaw) best = std::max(best, d);
    }
  }
  return to_dist(best);
}

bool FiniteMetricSpace::connected() const {
  for (Point a = 0; a < n_; ++a) {
    for (Point b = a + 1; b < n_; ++b) {
      if (raw(a, b) == kInfRaw) return false;
    }
  }
  return true;
}

std::vector<std::int64_t> FiniteMetricSpace::distinct_finite_raw() const {
  std::vector<std::int64_t> values{0};
  for (Point a = 0; a < n_; ++a) {
    for (Point b = a + 1; b < n_; ++b) {
      const auto d = raw(a, b);
      if (d != kInfRaw) values.push_back(d);
    }
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

void FiniteMetricSpace::validate() const {
  auto where = [this](Point a, Point b) { return " at (" + label(a) + ", " + label(b) + ")"; };
  for (Point a = 0; a < n_; ++a) {
    if (raw(a, a) != 0) throw InputError("nonzero self-distance" + where(a, a));
    for (Point b = a + 1; b < n_; ++b) {
      if (raw(a, b) != raw(b, a)) throw InputError("asymmetric distance" + where(a, b));
      if (raw(a, b) <= 0) throw InputError("non-positive distance between distinct points" + where(a, b));
    }
  }
  for (Point a = 0; a < n_; ++a) {
    for (Point b = 0; b < n_; ++b) {
      const auto ab = raw(a, b);
      if (ab == kInfRaw) continue;
      for (Point c = 0; c < n_; ++c) {
        const auto ac = raw(a, c);
        const auto cb = raw(c, b);
        if (ac == kInfRaw || cb == kInfRaw) continue;
        if (ab > ac + cb) {
          throw InputError("triangle inequality fails for (" + label(a) + ", " + label(c) + ", " +
                           label(b) + ")");
        }
      }
    }
  }
}

bool same_points(const FiniteMetricSpace& a, const FiniteMetricSpace& b) {
  if (&a == &b) return true;
  if (a.size() != b.size()) return false;
  for (Point p = 0; p < a.size(); ++p) {
    if (a.label(p) != b.label(p)) return false;
  }
  return true;
}

Dist excess(const Subset& U, const Subset& V, const FiniteMetricSpace& ambient) {
  if (V.empty()) throw InputError("distance to an empty subset");
  std::int64_t worst = 0;
  for (Point u : U) {
    std::int64_t nearest = kInfRaw;
    for (Point v : V) nearest = std::min(nearest, ambient.raw(u, v));
    worst = std::max(worst, nearest);
  }
  return ambient.to_dist(worst);
}

Dist hausdorff_distance(const Subset& U, const Subset& V, const FiniteMetricSpace& ambient) {
  if (U.empty() || V.empty()) throw InputError("Hausdorff distance of an empty subset");
  return max(excess(U, V, ambient), excess(V, U, ambient));
}

Subset neighbourhood(const Subset& U, const Dist& r, const FiniteMetricSpace& ambient) {
  const auto bound = ambient.raw_floor(r);
  Subset out;
  for (Point p = 0; p < ambient.size(); ++p) {
    for (Point u : U) {
      if (ambient.raw(p, u) <= bound) {
        out.push_back(p);
        break;
      }
    }
  }
  return out;
}

}  // namespace coarsemed
