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

#include <algorithm>
#include <tuple>

#include "coarsemed/diagram.hpp"
#include "coarsemed/errors.hpp"
#include "coarsemed/parallel.hpp"

namespace coarsemed {

ClosureReport median_tuple_closure(const MedianDiagram& m, const Dist& kappa, const TupleBudget& budget) {
  return median_tuple_closure(m, tuple_space(m.diagram, kappa, budget));
}

ClosureReport median_tuple_closure(const MedianDiagram& m, const TupleSpace& t) {
  if (t.empty()) throw InputError("tuple space at kappa = " + t.kappa.to_string() + " is empty");
  const auto& d = m.diagram;
  ClosureReport report;
  report.kappa = t.kappa;
  report.kappa_prime = Dist(0);
  report.tuples = t.size();
  const Dist rk = m.common_rho(t.kappa);
  report.bound = m.c + rk;
  report.weak_bound = max(m.common_C, m.c) + rk;

  // A triple of tuples only matters through its (i, j) coordinates, and
  // every triple of realised coordinate pairs comes from some tuple triple.
  for (std::size_t a = 0; a < d.shape.arrows.size(); ++a) {
    const auto& arrow = d.shape.arrows[a];
    const auto& Y = *d.objects[arrow.to];
    const auto& mi = m.medians[arrow.from];
    const auto& mj = m.medians[arrow.to];
    const auto& phi = d.maps[a];
    struct Pair {
      Point xi;
      Point xj;
      std::size_t first;
    };
    std::vector<Pair> pairs;
    for (std::size_t s = 0; s < t.size(); ++s) pairs.push_back({t.coordinate(s, arrow.from), t.coordinate(s, arrow.to), s});
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const Pair& p, const Pair& q) { return std::tie(p.xi, p.xj) < std::tie(q.xi, q.xj); });
    pairs.erase(std::unique(pairs.begin(), pairs.end(),
                            [](const Pair& p, const Pair& q) { return p.xi == q.xi && p.xj == q.xj; }),
                pairs.end());
    const std::size_t n = pairs.size();
    auto best = parallel_max<3>(n, [&](std::size_t begin, std::size_t end, RawExtremum<3>& local) {
      for (std::size_t p = begin; p < end; ++p) {
        for (std::size_t q = 0; q < n; ++q) {
          for (std::size_t r = 0; r < n; ++r) {
            const Point lhs = mj(pairs[p].xj, pairs[q].xj, pairs[r].xj);
            const Point rhs = phi(mi(pairs[p].xi, pairs[q].xi, pairs[r].xi));
            local.offer(Y.raw(lhs, rhs), {static_cast<Point>(p), static_cast<Point>(q), static_cast<Point>(r)});
          }
        }
      }
    });
    if (best.value < 0) continue;
    const Dist value = Y.to_dist(best.value);
    if (value > report.kappa_prime || !report.arrow) {
      report.kappa_prime = value;
      report.arrow = a;
      report.witness.clear();
      for (const auto w : best.witness) report.witness.push_back(t.tuples[pairs[w].first]);
    }
  }
  return report;
}

bool AssembledCone::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const BoundCheck& c) { return c.pass(); });
}

AssembledCone assemble_median_cone(const MedianDiagram& m, const Dist& kappa, const Dist& sigma,
                                   const EnumerationBudget& budget, const TupleBudget& tuple_budget) {
  if (sigma <= Dist(0)) throw InputError("Rips scale must be positive");
  const auto& d = m.diagram;
  auto T = tuple_space(d, kappa, tuple_budget);
  if (T.empty()) throw InputError("tuple space at kappa = " + kappa.to_string() + " is empty");
  if (!T.space) throw BudgetExceeded("tuple space too large to carry a metric");
  auto closure = median_tuple_closure(m, T);

  const auto product = product_median(m.medians);
  const auto op = product.op.with_space(T.ambient, "product-median");
  auto induced = induce_median(op, T.tuples, T.space->name());
  auto induced_cert = median_certificate(induced.op, budget);
  auto rips = rips_median(induced.op, induced_cert, sigma, budget);

  std::vector<ControlledMap> legs;
  std::vector<Defect> leg_cmp;
  for (std::size_t j = 0; j < d.objects.size(); ++j) {
    std::vector<Point> table(T.size());
    for (std::size_t s = 0; s < T.size(); ++s) table[s] = T.coordinate(s, j);
    legs.emplace_back(rips.rips.metric, d.objects[j], std::move(table));
    leg_cmp.push_back(cmp_defect(legs.back(), rips.psi, m.medians[j]));
  }
  const Dist defect = cone_defect(d, legs);

  std::optional<Dist> closure_excess;
  const Dist outer = max(kappa, closure.kappa_prime);
  if (outer == kappa) {
    closure_excess = Dist(0);
  } else {
    try {
      TupleBudget wide = tuple_budget;
      wide.materialize = 0;
      const auto T2 = tuple_space(d, outer, wide);
      closure_excess = excess(T2.tuples, T.tuples, *T.ambient);
    } catch (const BudgetExceeded&) {
    }
  }

  const Dist rk = m.common_rho(kappa);
  std::vector<BoundCheck> checks;
  checks.push_back({"closure", closure.bound, closure.kappa_prime});
  checks.push_back({"closure_weak", closure.weak_bound, closure.kappa_prime});
  if (closure_excess) checks.push_back({"induced_R", *closure_excess, induced.R});
  for (std::size_t j = 0; j < legs.size(); ++j) {
    const auto& v = d.shape.vertices[j];
    checks.push_back({"leg_cmp:" + v, induced.R + m.c + rk, leg_cmp[j].value});
    checks.push_back({"leg_cmp_sharp:" + v, induced.R, leg_cmp[j].value});
  }
  checks.push_back({"cone_defect", kappa, defect});
  checks.push_back({"nu_C_finite", Dist::infinity(), rips.certificate.c, true});
  checks.push_back({"rips_lipschitz", Dist(1), rips.lipschitz_step});

  return {std::move(T),       std::move(closure), std::move(induced), std::move(induced_cert), std::move(rips),
          std::move(legs),    std::move(leg_cmp), defect,             closure_excess,          std::move(checks)};
}

}  // namespace coarsemed
