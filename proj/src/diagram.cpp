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

#include "coarsemed/diagram.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "coarsemed/errors.hpp"

namespace coarsemed {

void Shape::validate() const {
  std::set<std::string> seen;
  for (const auto& v : vertices) {
    if (!seen.insert(v).second) throw InputError("duplicate vertex label '" + v + "'");
  }
  seen.clear();
  for (const auto& a : arrows) {
    if (a.from >= vertices.size() || a.to >= vertices.size()) {
      throw InputError("arrow '" + a.label + "' has an endpoint outside the shape");
    }
    if (!seen.insert(a.label).second) throw InputError("duplicate arrow label '" + a.label + "'");
  }
}

std::size_t Shape::vertex_index(const std::string& label) const {
  const auto it = std::find(vertices.begin(), vertices.end(), label);
  if (it == vertices.end()) throw InputError("unknown vertex '" + label + "'");
  return static_cast<std::size_t>(it - vertices.begin());
}

std::size_t Shape::arrow_index(const std::string& label) const {
  for (std::size_t i = 0; i < arrows.size(); ++i) {
    if (arrows[i].label == label) return i;
  }
  throw InputError("unknown arrow '" + label + "'");
}

UCDiagram UCDiagram::make(Shape shape, std::vector<SpacePtr> objects, std::vector<ControlledMap> maps) {
  shape.validate();
  if (objects.size() != shape.vertices.size()) throw InputError("diagram needs one object per vertex");
  if (maps.size() != shape.arrows.size()) throw InputError("diagram needs one map per arrow");
  for (std::size_t a = 0; a < maps.size(); ++a) {
    const auto& arrow = shape.arrows[a];
    if (!same_points(*maps[a].domain(), *objects[arrow.from]) || !same_points(*maps[a].codomain(), *objects[arrow.to])) {
      throw InputError("map '" + arrow.label + "' is not typed by its arrow");
    }
  }
  std::vector<ControlFunction> controls;
  for (const auto& m : maps) controls.push_back(m.control());
  UCDiagram d{std::move(shape), std::move(objects), std::move(maps), {}};
  d.common_control = ControlFunction::pointwise_max(controls);
  return d;
}

namespace {

void check_legs(const UCDiagram& d, const std::vector<ControlledMap>& legs) {
  if (legs.size() != d.objects.size()) throw InputError("cone needs one leg per vertex");
  for (std::size_t j = 0; j < legs.size(); ++j) {
    if (!same_points(*legs[j].codomain(), *d.objects[j])) {
      throw InputError("leg " + d.shape.vertices[j] + " does not land in its object");
    }
    if (legs[j].domain()->size() != legs[0].domain()->size()) throw InputError("legs have different apexes");
  }
}

std::string kappa_name(const Dist& kappa) { return "Tuple^" + kappa.to_string(); }

}  // namespace

Dist cone_defect(const UCDiagram& d, const std::vector<ControlledMap>& legs) {
  check_legs(d, legs);
  Dist worst(0);
  for (std::size_t a = 0; a < d.shape.arrows.size(); ++a) {
    const auto& arrow = d.shape.arrows[a];
    const auto& target = *d.objects[arrow.to];
    std::int64_t raw = 0;
    for (Point z = 0; z < legs[arrow.from].domain()->size(); ++z) {
      raw = std::max(raw, target.raw(legs[arrow.to](z), d.maps[a](legs[arrow.from](z))));
    }
    worst = max(worst, target.to_dist(raw));
  }
  return worst;
}

Cone make_cone(const UCDiagram& d, std::vector<ControlledMap> legs) {
  const Dist k = cone_defect(d, legs);
  SpacePtr apex = legs.empty() ? nullptr : legs.front().domain();
  return {std::move(apex), std::move(legs), k};
}

Point TupleSpace::coordinate(std::size_t tuple, std::size_t vertex) const {
  Point p = tuples[tuple];
  const auto& f = ambient->factors();
  for (std::size_t k = f.size(); k-- > vertex + 1;) p /= static_cast<Point>(f[k]->size());
  return p % static_cast<Point>(f[vertex]->size());
}

ControlledMap TupleSpace::projection(std::size_t vertex) const {
  if (!space) throw BudgetExceeded("tuple space too large to carry a metric");
  std::vector<Point> table(size());
  for (std::size_t t = 0; t < size(); ++t) table[t] = coordinate(t, vertex);
  return ControlledMap(space, ambient->factors()[vertex], std::move(table));
}

std::optional<std::size_t> TupleSpace::find(Point ambient_point) const {
  const auto it = std::lower_bound(tuples.begin(), tuples.end(), ambient_point);
  if (it == tuples.end() || *it != ambient_point) return std::nullopt;
  return static_cast<std::size_t>(it - tuples.begin());
}

TupleSpace tuple_space(const UCDiagram& d, const Dist& kappa, const TupleBudget& budget) {
  const std::size_t k = d.objects.size();
  if (k == 0) throw InputError("diagram has no vertices");
  TupleSpace out;
  out.kappa = kappa;
  out.ambient = FiniteMetricSpace::linf_product(d.objects, "prod");

  std::vector<std::int64_t> slack(k);
  for (std::size_t j = 0; j < k; ++j) slack[j] = d.objects[j]->raw_floor(kappa);

  // For arrow a: i -> j, ball[j][y] lists points within kappa of y and
  // pre[a][y] lists x in D_i with D_a(x) within kappa of y.
  std::vector<std::vector<std::vector<Point>>> ball(k);
  for (std::size_t j = 0; j < k; ++j) {
    const auto& X = *d.objects[j];
    ball[j].resize(X.size());
    for (Point y = 0; y < X.size(); ++y) {
      for (Point x = 0; x < X.size(); ++x) {
        if (X.raw(x, y) <= slack[j]) ball[j][y].push_back(x);
      }
    }
  }
  const auto& arrows = d.shape.arrows;
  std::vector<std::vector<std::vector<Point>>> pre(arrows.size());
  for (std::size_t a = 0; a < arrows.size(); ++a) {
    const auto& Y = *d.objects[arrows[a].to];
    pre[a].resize(Y.size());
    for (Point x = 0; x < d.objects[arrows[a].from]->size(); ++x) {
      const Point fx = d.maps[a](x);
      for (Point y : ball[arrows[a].to][fx]) pre[a][y].push_back(x);
    }
    for (auto& list : pre[a]) std::sort(list.begin(), list.end());
  }

  // Greedy order: most arrows to placed vertices, then smaller object.
  std::vector<std::size_t> order;
  std::vector<char> placed(k, 0);
  while (order.size() < k) {
    std::size_t best = k;
    std::size_t best_links = 0;
    for (std::size_t v = 0; v < k; ++v) {
      if (placed[v]) continue;
      std::size_t links = 0;
      for (const auto& a : arrows) {
        if ((a.from == v && placed[a.to]) || (a.to == v && placed[a.from])) ++links;
      }
      if (best == k || links > best_links ||
          (links == best_links && d.objects[v]->size() < d.objects[best]->size())) {
        best = v;
        best_links = links;
      }
    }
    placed[best] = 1;
    order.push_back(best);
  }
  std::vector<std::size_t> position(k);
  for (std::size_t i = 0; i < k; ++i) position[order[i]] = i;

  // Arrows checked once both endpoints are placed, keyed by the later one.
  std::vector<std::vector<std::size_t>> closing(k);
  for (std::size_t a = 0; a < arrows.size(); ++a) {
    closing[std::max(position[arrows[a].from], position[arrows[a].to])].push_back(a);
  }

  std::vector<Point> x(k);
  std::uint64_t examined = 0;
  std::function<void(std::size_t)> place = [&](std::size_t depth) {
    if (depth == k) {
      out.tuples.push_back(out.ambient->encode(x));
      return;
    }
    const std::size_t v = order[depth];
    const std::vector<Point>* candidates = nullptr;
    for (const auto a : closing[depth]) {
      const auto& arrow = arrows[a];
      const std::vector<Point>* list = nullptr;
      if (arrow.from == v && arrow.to != v) list = &pre[a][x[arrow.to]];
      if (arrow.to == v && arrow.from != v) list = &ball[v][d.maps[a](x[arrow.from])];
      if (list && (!candidates || list->size() < candidates->size())) candidates = list;
    }
    const std::size_t n = candidates ? candidates->size() : d.objects[v]->size();
    for (std::size_t i = 0; i < n; ++i) {
      if (++examined > budget.candidates) {
        throw BudgetExceeded("tuple space enumeration exceeded " + std::to_string(budget.candidates) + " candidates");
      }
      x[v] = candidates ? (*candidates)[i] : static_cast<Point>(i);
      bool ok = true;
      for (const auto a : closing[depth]) {
        const auto& arrow = arrows[a];
        if (d.objects[arrow.to]->raw(x[arrow.to], d.maps[a](x[arrow.from])) > slack[arrow.to]) {
          ok = false;
          break;
        }
      }
      if (ok) place(depth + 1);
    }
  };
  place(0);
  std::sort(out.tuples.begin(), out.tuples.end());
  out.candidates_examined = examined;
  if (out.size() <= budget.materialize) {
    out.space = FiniteMetricSpace::restrict(*out.ambient, out.tuples, kappa_name(kappa));
  }
  const Dist defect = tuple_defect(d, out);
  if (!(defect <= kappa)) {
    throw AssertionFailure("projection_cone_defect", defect.to_string() + " > " + kappa.to_string());
  }
  return out;
}

Dist tuple_defect(const UCDiagram& d, const TupleSpace& t) {
  Dist worst(0);
  for (std::size_t a = 0; a < d.shape.arrows.size(); ++a) {
    const auto& arrow = d.shape.arrows[a];
    const auto& Y = *d.objects[arrow.to];
    std::int64_t raw = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      raw = std::max(raw, Y.raw(t.coordinate(i, arrow.to), d.maps[a](t.coordinate(i, arrow.from))));
    }
    worst = max(worst, Y.to_dist(raw));
  }
  return worst;
}

Factorization factor_through_tuples(const UCDiagram& d, const Cone& cone, const TupleBudget& budget) {
  const Dist kappa = cone_defect(d, cone.legs);
  auto T = tuple_space(d, kappa, budget);
  if (!T.space) throw BudgetExceeded("tuple space too large to carry a metric");
  const std::size_t k = d.objects.size();
  const auto apex = cone.legs.front().domain();
  std::vector<Point> table(apex->size());
  std::vector<Point> coords(k);
  for (Point z = 0; z < apex->size(); ++z) {
    for (std::size_t j = 0; j < k; ++j) coords[j] = cone.legs[j](z);
    const auto idx = T.find(T.ambient->encode(coords));
    if (!idx) throw AssertionFailure("factor_membership", "image of apex point " + apex->label(z) + " is not a tuple");
    table[z] = static_cast<Point>(*idx);
  }
  ControlledMap f(apex, T.space, std::move(table));
  for (std::size_t j = 0; j < k; ++j) {
    for (Point z = 0; z < apex->size(); ++z) {
      if (T.coordinate(f(z), j) != cone.legs[j](z)) {
        throw AssertionFailure("factor_exact", "projection differs from leg " + d.shape.vertices[j]);
      }
    }
  }
  return {std::move(T), std::move(f)};
}

std::vector<StabilizationRow> tuple_stabilization(const UCDiagram& d, std::vector<Dist> grid, const TupleBudget& budget) {
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  std::vector<TupleSpace> spaces;
  for (const auto& kappa : grid) spaces.push_back(tuple_space(d, kappa, budget));
  std::vector<StabilizationRow> rows;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = i; j < grid.size(); ++j) {
      StabilizationRow row{grid[i], grid[j], spaces[i].size(), spaces[j].size(), std::nullopt};
      if (!spaces[i].empty()) row.excess = excess(spaces[j].tuples, spaces[i].tuples, *spaces[i].ambient);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

RipsApex rips_tuple_apex(const UCDiagram& d, const Dist& kappa, const Dist& sigma, const TupleBudget& budget) {
  if (sigma <= Dist(0)) throw InputError("Rips scale must be positive");
  auto T = tuple_space(d, kappa, budget);
  if (T.empty()) throw InputError("tuple space at kappa = " + kappa.to_string() + " is empty");
  if (!T.space) throw BudgetExceeded("tuple space too large to carry a metric");
  auto rips = rips_graph(T.space, sigma);
  (void)xi_map(rips);
  std::vector<ControlledMap> legs;
  for (std::size_t j = 0; j < d.objects.size(); ++j) {
    std::vector<Point> table(T.size());
    for (std::size_t t = 0; t < T.size(); ++t) table[t] = T.coordinate(t, j);
    legs.emplace_back(rips.metric, d.objects[j], std::move(table));
  }
  auto cone = make_cone(d, std::move(legs));
  if (!(cone.defect <= kappa)) {
    throw AssertionFailure("rips_cone_defect", cone.defect.to_string() + " > " + kappa.to_string());
  }
  return {std::move(T), std::move(rips), std::move(cone)};
}

Dist compat_order_defect(const Subset& U, const Subset& V, const FiniteMetricSpace& ambient) {
  return excess(U, V, ambient);
}

MedianDiagram MedianDiagram::make(UCDiagram diagram, std::vector<TernaryOp> medians, const EnumerationBudget& budget) {
  std::vector<MedianCertificate> certs;
  for (const auto& mu : medians) certs.push_back(median_certificate(mu, budget));
  return make(std::move(diagram), std::move(medians), std::move(certs));
}

MedianDiagram MedianDiagram::make(UCDiagram diagram, std::vector<TernaryOp> medians,
                                  std::vector<MedianCertificate> certificates) {
  const std::size_t k = diagram.objects.size();
  if (medians.size() != k || certificates.size() != k) throw InputError("median diagram needs one median per vertex");
  for (std::size_t j = 0; j < k; ++j) {
    if (!same_points(*medians[j].space(), *diagram.objects[j])) {
      throw InputError("median of vertex " + diagram.shape.vertices[j] + " lives on another space");
    }
  }
  MedianDiagram m{std::move(diagram), std::move(medians), std::move(certificates), Dist(0), {}, Dist(0), {}};
  std::vector<ControlFunction> rhos;
  for (const auto& cert : m.certificates) {
    m.common_C = max(m.common_C, cert.c);
    rhos.push_back(cert.rho);
  }
  m.common_rho = ControlFunction::pointwise_max(rhos);
  const auto& arrows = m.diagram.shape.arrows;
  for (std::size_t a = 0; a < arrows.size(); ++a) {
    m.arrow_cmp.push_back(cmp_defect(m.diagram.maps[a], m.medians[arrows[a].from], m.medians[arrows[a].to]));
    m.c = max(m.c, m.arrow_cmp.back().value);
  }
  if (m.c.is_infinite()) throw InputError("arrow maps are not coarse median preserving (infinite cmp defect)");
  return m;
}

}  // namespace coarsemed
