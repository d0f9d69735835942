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

#include "coarsemed/hhs.hpp"

#include <algorithm>
#include <set>

#include "coarsemed/errors.hpp"
#include "coarsemed/generators.hpp"
#include "coarsemed/parallel.hpp"

namespace coarsemed {

Dist Family::common_C() const {
  Dist c(0);
  for (const auto& cert : certificates) c = max(c, cert.c);
  return c;
}

ControlFunction Family::common_rho() const {
  std::vector<ControlFunction> rhos;
  for (const auto& cert : certificates) rhos.push_back(cert.rho);
  return ControlFunction::pointwise_max(rhos);
}

bool Family::orthogonal(std::size_t i, std::size_t j) const {
  const auto key = std::minmax(i, j);
  return std::find(orth.begin(), orth.end(), std::pair<std::size_t, std::size_t>(key.first, key.second)) != orth.end();
}

const ConstraintData* Family::constraint(std::size_t i, std::size_t j) const {
  for (const auto& c : constraints) {
    if ((c.u == i && c.v == j) || (c.u == j && c.v == i)) return &c;
  }
  return nullptr;
}

void Family::validate() const {
  const std::size_t k = indices.size();
  if (spaces.size() != k || medians.size() != k || certificates.size() != k) {
    throw InputError("family needs a space, median and certificate per index");
  }
  std::set<std::string> labels(indices.begin(), indices.end());
  if (labels.size() != k) throw InputError("family indices must be distinct");
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& [a, b] : orth) {
    if (a >= k || b >= k) throw InputError("orth: index out of range");
    if (a == b) throw InputError("orth: an index is never orthogonal to itself");
    if (a > b) throw InputError("orth: pairs are stored with the smaller index first");
    if (!seen.insert({a, b}).second) throw InputError("orth: duplicate pair");
  }
  const Dist C = common_C();
  const Dist floor_B = C + common_rho()(C);
  std::set<std::pair<std::size_t, std::size_t>> constrained;
  for (const auto& c : constraints) {
    const auto who = "constraint (" + (c.u < k ? indices[c.u] : "?") + "," + (c.v < k ? indices[c.v] : "?") + ")";
    if (c.u >= k || c.v >= k || c.u == c.v) throw InputError(who + ": bad direction");
    const auto key = std::minmax(c.u, c.v);
    if (orthogonal(c.u, c.v)) throw InputError(who + ": pair is orthogonal");
    if (!constrained.insert({key.first, key.second}).second) throw InputError(who + ": pair constrained twice");
    if (c.theta.size() != spaces[c.v]->size()) throw InputError(who + ": theta must be total on C_v");
    for (const auto t : c.theta) {
      if (t >= spaces[c.u]->size()) throw InputError(who + ": theta value out of range");
    }
    if (c.O >= spaces[c.v]->size()) throw InputError(who + ": O out of range");
    if (c.B < floor_B) throw InputError(who + ": B = " + c.B.to_string() + " < C + rho(C) = " + floor_B.to_string());
    if (c.K < c.B) throw InputError(who + ": K < B");
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      if (!orthogonal(i, j) && !constrained.count({i, j})) {
        throw InputError("pair (" + indices[i] + "," + indices[j] + ") is neither orthogonal nor constrained");
      }
    }
  }
}

Dist hyperbolicity(const FiniteMetricSpace& X) {
  const std::size_t n = X.size();
  auto best = parallel_max<4>(n, [&](std::size_t begin, std::size_t end, RawExtremum<4>& local) {
    for (Point x = static_cast<Point>(begin); x < end; ++x) {
      for (Point y = x + 1; y < n; ++y) {
        const auto dxy = X.raw(x, y);
        if (dxy == kInfRaw) continue;
        for (Point z = y + 1; z < n; ++z) {
          const auto dxz = X.raw(x, z);
          const auto dyz = X.raw(y, z);
          if (dxz == kInfRaw) continue;
          for (Point w = z + 1; w < n; ++w) {
            const auto dxw = X.raw(x, w);
            if (dxw == kInfRaw) continue;
            std::int64_t s[3] = {dxy + X.raw(z, w), dxz + X.raw(y, w), dxw + dyz};
            std::sort(s, s + 3);
            local.offer(s[2] - s[1], {x, y, z, w});
          }
        }
      }
    }
  });
  if (best.value <= 0) return Dist(0);
  return X.to_dist(best.value) / 2;
}

TernaryOp delta_centre_median(const SpacePtr& X) {
  if (!X->connected()) throw InputError("delta-centre median needs a connected space");
  auto op = one_median(X);
  return op.with_space(X, "delta-centre");
}

BCIIReport bcii_defect(const TernaryOp& mu_v, const MedianCertificate& cert_v, const FiniteMetricSpace& CU,
                       const std::vector<Point>& theta, Point O) {
  const auto& CV = *mu_v.space();
  const std::size_t n = CV.size();
  if (theta.size() != n) throw InputError("bcii: theta must be total on C_v");
  if (O >= n) throw InputError("bcii: O out of range");
  Dist worst(0);
  std::vector<Point> witness;
  for (Point x = 0; x < n; ++x) {
    for (Point y = 0; y < n; ++y) {
      const Dist v = min(CV.dist(mu_v(x, y, O), O), CU.dist(theta[x], theta[y]));
      if (v > worst || witness.empty()) {
        worst = v;
        witness = {x, y};
      }
    }
  }
  BCIIReport r{{worst, witness}, worst};
  r.min_valid_B = max(worst, cert_v.c + cert_v.rho(cert_v.c));
  return r;
}

ConstraintSpace constraint_space(const SpacePtr& first, const SpacePtr& second, const ConstraintData* data,
                                 bool u_first) {
  ConstraintSpace out;
  out.first = 0;
  out.second = 1;
  out.orthogonal = data == nullptr;
  out.ambient = FiniteMetricSpace::linf_product({first, second});
  const auto& CU = u_first ? *first : *second;
  const auto& CV = u_first ? *second : *first;
  std::int64_t ku = 0;
  std::int64_t kv = 0;
  if (data) {
    if (data->theta.size() != CV.size()) throw InputError("constraint: theta must be total on C_v");
    if (data->O >= CV.size()) throw InputError("constraint: O out of range");
    if (data->K < data->B) throw InputError("constraint: K < B");
    ku = CU.raw_floor(data->K);
    kv = CV.raw_floor(data->K);
  }
  for (Point a = 0; a < first->size(); ++a) {
    for (Point b = 0; b < second->size(); ++b) {
      if (data) {
        const Point xu = u_first ? a : b;
        const Point xv = u_first ? b : a;
        if (CU.raw(xu, data->theta[xv]) > ku && CV.raw(xv, data->O) > kv) continue;
      }
      out.points.push_back(static_cast<Point>(static_cast<std::size_t>(a) * second->size() + b));
    }
  }
  out.space = FiniteMetricSpace::restrict(*out.ambient, out.points, "R(" + first->name() + "," + second->name() + ")");
  return out;
}

ConstraintSpace constraint_space(const Family& F, std::size_t i, std::size_t j) {
  if (i >= j || j >= F.indices.size()) throw InputError("constraint_space: need i < j");
  const auto* data = F.orthogonal(i, j) ? nullptr : F.constraint(i, j);
  if (!F.orthogonal(i, j) && !data) throw InputError("constraint_space: pair has no constraint data");
  if (data) {
    const Dist C = F.common_C();
    if (data->B < C + F.common_rho()(C)) throw InputError("constraint_space: B < C + rho(C)");
  }
  auto out = constraint_space(F.spaces[i], F.spaces[j], data, data ? data->u == i : true);
  out.first = i;
  out.second = j;
  out.space = FiniteMetricSpace::restrict(*out.ambient, out.points, "R(" + F.indices[i] + "," + F.indices[j] + ")");
  return out;
}

PairwiseReport pairwise_subalgebra_defect(const Family& F, const ConstraintSpace& R) {
  if (R.points.empty()) throw InputError("pairwise_subalgebra_defect: empty constraint space");
  const auto prod = product_median({F.medians[R.first], F.medians[R.second]});
  const auto op = prod.op.with_space(R.ambient, "product-median");
  PairwiseReport r{subalgebra_defect(op, R.points), Dist(0), Dist(0), Dist(0), Dist(0)};
  if (R.orthogonal) return r;
  const auto* data = F.constraint(R.first, R.second);
  if (!data) throw InputError("pairwise_subalgebra_defect: pair has no constraint data");
  const Dist C = F.common_C();
  const auto rho = F.common_rho();
  r.L = nested_interval_constant(data->B, C, rho);
  r.tripod = tripod_defect(F.medians[data->v], r.L).value;
  r.branch = rho(data->K + data->K + data->B) + data->K + data->B;
  r.bound = max(r.tripod, r.branch);
  return r;
}

bool HHSDiagram::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const BoundCheck& c) { return c.pass(); });
}

namespace {

// Largest d(f p, f q) / d(p, q) over distinct finite pairs.
Dist lipschitz_ratio(const ControlledMap& f) {
  const auto& X = *f.domain();
  const auto& Y = *f.codomain();
  Dist::Rational best(0);
  for (Point p = 0; p < X.size(); ++p) {
    for (Point q = p + 1; q < X.size(); ++q) {
      const auto dx = X.raw(p, q);
      const auto dy = Y.raw(f(p), f(q));
      if (dx == kInfRaw) continue;
      if (dy == kInfRaw) return Dist::infinity();
      const Dist::Rational r(static_cast<std::int64_t>(dy) * X.scale(), static_cast<std::int64_t>(dx) * Y.scale());
      best = std::max(best, r);
    }
  }
  return Dist(best);
}

}  // namespace

HHSDiagram build_hhs_diagram(const Family& F, const EnumerationBudget& budget) {
  F.validate();
  const std::size_t k = F.indices.size();
  Shape shape{F.indices, {}};
  std::vector<SpacePtr> objects = F.spaces;
  std::vector<TernaryOp> medians = F.medians;
  std::vector<MedianCertificate> certs = F.certificates;
  std::vector<ControlledMap> maps;
  HHSDiagram out{{}, {}, {}, {}, Dist(0), {}};

  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      auto R = constraint_space(F, i, j);
      const std::string label = "{" + F.indices[i] + "," + F.indices[j] + "}";
      if (R.points.empty()) throw InputError("constraint space " + label + " is empty");
      const auto prod = product_median({F.medians[i], F.medians[j]});
      auto induced = induce_median(prod.op.with_space(R.ambient, "product-median"), R.points, R.space->name());
      out.max_R = max(out.max_R, induced.R);
      out.pairwise.push_back(pairwise_subalgebra_defect(F, R));

      const std::size_t vertex = shape.vertices.size();
      shape.vertices.push_back(label);
      std::vector<Point> to_i(R.points.size());
      std::vector<Point> to_j(R.points.size());
      for (std::size_t p = 0; p < R.points.size(); ++p) {
        to_i[p] = static_cast<Point>(R.points[p] / F.spaces[j]->size());
        to_j[p] = static_cast<Point>(R.points[p] % F.spaces[j]->size());
      }
      shape.arrows.push_back({vertex, i, label + "->" + F.indices[i]});
      shape.arrows.push_back({vertex, j, label + "->" + F.indices[j]});
      maps.emplace_back(induced.space, F.spaces[i], std::move(to_i));
      maps.emplace_back(induced.space, F.spaces[j], std::move(to_j));
      objects.push_back(induced.space);
      medians.push_back(induced.op);
      certs.push_back(median_certificate(induced.op, budget));
      out.pairs.push_back(std::move(R));
      out.pair_medians.push_back(std::move(induced));
    }
  }

  auto uc = UCDiagram::make(std::move(shape), std::move(objects), std::move(maps));
  for (std::size_t a = 0; a < uc.maps.size(); ++a) {
    out.checks.push_back({"lipschitz:" + uc.shape.arrows[a].label, Dist(1), lipschitz_ratio(uc.maps[a])});
  }
  out.diagram = MedianDiagram::make(std::move(uc), std::move(medians), std::move(certs));
  out.checks.push_back({"arrow_cmp", out.max_R, out.diagram.c});
  for (std::size_t p = 0; p < out.pairs.size(); ++p) {
    if (out.pairs[p].orthogonal) continue;
    out.checks.push_back({"pairwise:" + out.diagram.diagram.shape.vertices[k + p], out.pairwise[p].bound,
                          out.pairwise[p].defect.value});
  }
  return out;
}

namespace {

Point max_degree_vertex(const FiniteMetricSpace& T) {
  Point best = 0;
  std::size_t best_deg = 0;
  for (Point p = 0; p < T.size(); ++p) {
    std::size_t deg = 0;
    for (Point q = 0; q < T.size(); ++q) deg += T.raw(p, q) == T.scale();
    if (deg > best_deg) {
      best = p;
      best_deg = deg;
    }
  }
  return best;
}

void add_member(Family& F, std::string label, SpacePtr space, const EnumerationBudget& budget) {
  auto mu = graph_median(space);
  F.certificates.push_back(median_certificate(mu, budget));
  F.indices.push_back(std::move(label));
  F.spaces.push_back(std::move(space));
  F.medians.push_back(std::move(mu));
}

}  // namespace

Family toy_family(const std::string& kind, const ToyParams& params) {
  if (params.k == 0 || params.n == 0) throw InputError("toy family needs k >= 1 and n >= 1");
  if (params.n > 64) throw BudgetExceeded("toy family trees are capped at 64 vertices");
  Family F;
  if (kind == "product-of-trees") {
    for (std::size_t i = 0; i < params.k; ++i) {
      add_member(F, "U" + std::to_string(i + 1), gen::random_tree(params.n, params.seed + i), params.budget);
    }
  } else if (kind == "tree-collapse-chain") {
    // Build from the largest tree downwards; each smaller tree is a ball in
    // the next one and theta is the nearest-point retraction onto it.
    std::vector<SpacePtr> trees(params.k);
    std::vector<std::vector<Point>> thetas(params.k);
    std::vector<Point> bases(params.k);
    trees[params.k - 1] = gen::random_tree(params.n, params.seed);
    for (std::size_t i = params.k - 1; i > 0; --i) {
      const auto& T = *trees[i];
      const Point O = max_degree_vertex(T);
      const auto radius = T.raw_floor(Dist(static_cast<std::int64_t>(params.depth)));
      Subset ball;
      for (Point p = 0; p < T.size(); ++p) {
        if (T.raw(O, p) <= radius) ball.push_back(p);
      }
      std::vector<Point> theta(T.size());
      for (Point p = 0; p < T.size(); ++p) {
        std::int64_t best = kInfRaw;
        for (Point b = 0; b < ball.size(); ++b) {
          if (T.raw(p, ball[b]) < best) {
            best = T.raw(p, ball[b]);
            theta[p] = b;
          }
        }
      }
      trees[i - 1] = FiniteMetricSpace::restrict(T, ball, T.name() + "|B" + std::to_string(params.depth));
      thetas[i] = std::move(theta);
      bases[i] = O;
    }
    for (std::size_t i = 0; i < params.k; ++i) add_member(F, "U" + std::to_string(i + 1), trees[i], params.budget);
    for (std::size_t i = 1; i < params.k; ++i) {
      const auto r = bcii_defect(F.medians[i], F.certificates[i], *F.spaces[i - 1], thetas[i], bases[i]);
      const Dist C = F.common_C();
      const Dist B = max(r.min_valid_B, C + F.common_rho()(C));
      F.constraints.push_back({i - 1, i, thetas[i], bases[i], B, B});
    }
  } else {
    throw InputError("unknown toy family kind '" + kind + "'");
  }
  const std::size_t core = F.indices.size();
  for (std::size_t e = 0; e < params.extra_orthogonal; ++e) {
    add_member(F, "U" + std::to_string(core + e + 1), gen::random_tree(params.n, params.seed + 1000 + e), params.budget);
  }
  const bool chain = kind == "tree-collapse-chain";
  for (std::size_t i = 0; i < F.indices.size(); ++i) {
    for (std::size_t j = i + 1; j < F.indices.size(); ++j) {
      if (chain && j == i + 1 && j < core) continue;
      F.orth.emplace_back(i, j);
    }
  }
  F.validate();
  return F;
}

}  // namespace coarsemed
