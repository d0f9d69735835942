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

#include "coarsemed/median.hpp"

#include <algorithm>

#include "coarsemed/errors.hpp"
#include "coarsemed/parallel.hpp"

namespace coarsemed {

namespace {

std::shared_ptr<const std::vector<Point>> tabulate(std::size_t n, const TernaryOp::Rule& rule) {
  auto table = std::make_shared<std::vector<Point>>(n * n * n);
  parallel_chunks(n, [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t a = begin; a < end; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        Point* row = table->data() + (a * n + b) * n;
        for (std::size_t c = 0; c < n; ++c) {
          row[c] = rule(static_cast<Point>(a), static_cast<Point>(b), static_cast<Point>(c));
        }
      }
    }
  });
  for (Point v : *table) {
    if (v >= n) throw InputError("ternary operator value out of range");
  }
  return table;
}

bool fits_table(std::size_t n) { return n == 0 || n <= TernaryOp::kMaxTabulated / n / n; }

}  // namespace

TernaryOp::TernaryOp(SpacePtr space, std::string kind, Rule rule)
    : space_(std::move(space)), kind_(std::move(kind)), n_(space_->size()), rule_(std::move(rule)) {
  if (fits_table(n_)) table_ = tabulate(n_, rule_);
}

TernaryOp::TernaryOp(SpacePtr space, std::string kind, std::vector<Point> table)
    : space_(std::move(space)), kind_(std::move(kind)), n_(space_->size()) {
  if (table.size() != n_ * n_ * n_) {
    throw InputError("median table has " + std::to_string(table.size()) + " entries, expected n^3 = " +
                     std::to_string(n_ * n_ * n_));
  }
  for (Point v : table) {
    if (v >= n_) throw InputError("median table value " + std::to_string(v) + " out of range");
  }
  table_ = std::make_shared<const std::vector<Point>>(std::move(table));
}

std::span<const Point> TernaryOp::table() const {
  if (!table_) return {};
  return {table_->data(), table_->size()};
}

TernaryOp TernaryOp::with_space(SpacePtr other, std::string kind) const {
  if (other->size() != n_) throw InputError("with_space: point count mismatch");
  TernaryOp out = *this;
  out.space_ = std::move(other);
  out.kind_ = std::move(kind);
  return out;
}

TernaryOp graph_median(const SpacePtr& space) {
  const Point n = static_cast<Point>(space->size());
  return TernaryOp(space, "graph-median", [space, n](Point x, Point y, Point z) -> Point {
    const auto& X = *space;
    auto between = [&X](Point a, Point m, Point b) {
      const auto ab = X.raw(a, b);
      return ab != kInfRaw && raw_add(X.raw(a, m), X.raw(m, b)) == ab;
    };
    if (x == y || x == z) return x;
    if (y == z) return y;
    for (Point m = 0; m < n; ++m) {
      if (between(x, m, y) && between(y, m, z) && between(z, m, x)) return m;
    }
    throw InputError("graph-median: points " + X.label(x) + ", " + X.label(y) + ", " + X.label(z) +
                     " have no median; '" + X.name() + "' is not a median graph");
  });
}

TernaryOp one_median(const SpacePtr& space) {
  const Point n = static_cast<Point>(space->size());
  return TernaryOp(space, "one-median", [space, n](Point x, Point y, Point z) -> Point {
    const auto& X = *space;
    Point best = 0;
    std::int64_t best_sum = kInfRaw;
    for (Point m = 0; m < n; ++m) {
      const auto s = raw_add(raw_add(X.raw(m, x), X.raw(m, y)), X.raw(m, z));
      if (s < best_sum) {
        best_sum = s;
        best = m;
      }
    }
    return best;
  });
}

ProductMedian product_median(const std::vector<TernaryOp>& factors) {
  if (factors.empty()) throw InputError("product_median of an empty list");
  if (factors.size() == 1) return {factors.front().space(), factors.front()};
  std::vector<SpacePtr> spaces;
  for (const auto& f : factors) spaces.push_back(f.space());
  auto product = FiniteMetricSpace::linf_product(spaces);
  std::vector<Point> radix;
  for (const auto& s : spaces) radix.push_back(static_cast<Point>(s->size()));
  TernaryOp op(product, "product", [factors, radix](Point a, Point b, Point c) -> Point {
    // Decode from the least significant factor, then re-encode.
    Point out = 0;
    Point mult = 1;
    for (std::size_t k = factors.size(); k-- > 0;) {
      const Point r = radix[k];
      out += mult * factors[k](a % r, b % r, c % r);
      mult *= r;
      a /= r;
      b /= r;
      c /= r;
    }
    return out;
  });
  return {product, std::move(op)};
}

Dist symmetry_discrepancy(const TernaryOp& mu, Point x1, Point x2, Point x3, unsigned perm) {
  const Point xs[3] = {x1, x2, x3};
  const auto* p = kPermutations[perm];
  return mu.space()->dist(mu(xs[p[0]], xs[p[1]], xs[p[2]]), mu(x1, x2, x3));
}

Dist localisation_discrepancy(const TernaryOp& mu, Point x, Point y) {
  return mu.space()->dist(mu(x, x, y), x);
}

Dist four_point_discrepancy(const TernaryOp& mu, Point x1, Point x2, Point x3, Point w) {
  return mu.space()->dist(mu(mu(x1, w, x2), w, x3), mu(x1, w, mu(x2, w, x3)));
}

Dist five_point_discrepancy(const TernaryOp& mu, Point v, Point w, Point x, Point y, Point z) {
  return mu.space()->dist(mu(v, w, mu(x, y, z)), mu(mu(v, w, x), mu(v, w, y), z));
}

Defect cmp_defect(const ControlledMap& f, const TernaryOp& mu_dom, const TernaryOp& mu_cod) {
  if (!same_points(*f.domain(), *mu_dom.space()) || !same_points(*f.codomain(), *mu_cod.space())) {
    throw InputError("cmp_defect: medians do not live on the map's domain and codomain");
  }
  const auto& Y = *f.codomain();
  const std::size_t n = f.domain()->size();
  auto best = parallel_max<3>(n, [&](std::size_t begin, std::size_t end, RawExtremum<3>& local) {
    for (Point x = static_cast<Point>(begin); x < end; ++x) {
      for (Point y = 0; y < n; ++y) {
        for (Point z = 0; z < n; ++z) {
          local.offer(Y.raw(f(mu_dom(x, y, z)), mu_cod(f(x), f(y), f(z))), {x, y, z});
        }
      }
    }
  });
  if (n == 0) return {Dist(0), {}};
  return {Y.to_dist(best.value), {best.witness[0], best.witness[1], best.witness[2]}};
}

CoarseInterval coarse_interval(const TernaryOp& mu, Point x, Point y, const Dist& L) {
  const auto& X = *mu.space();
  const auto bound = X.raw_floor(L);
  CoarseInterval out{x, y, L, {}};
  for (Point z = 0; z < X.size(); ++z) {
    if (X.raw(mu(x, y, z), z) <= bound) out.members.push_back(z);
  }
  return out;
}

}  // namespace coarsemed
