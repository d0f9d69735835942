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
#include <optional>
#include <string>
#include <vector>

#include "coarsemed/controlled_map.hpp"
#include "coarsemed/median.hpp"
#include "coarsemed/rips.hpp"

namespace coarsemed {

struct Arrow {
  std::size_t from;
  std::size_t to;
  std::string label;
};

// Directed multigraph. Arrow labels are unique.
struct Shape {
  std::vector<std::string> vertices;
  std::vector<Arrow> arrows;

  void validate() const;
  std::size_t vertex_index(const std::string& label) const;
  std::size_t arrow_index(const std::string& label) const;
};

struct UCDiagram {
  Shape shape;
  std::vector<SpacePtr> objects;   // one per vertex
  std::vector<ControlledMap> maps; // one per arrow
  ControlFunction common_control;  // pointwise max of the arrow controls

  // Checks typing and fills common_control.
  static UCDiagram make(Shape shape, std::vector<SpacePtr> objects, std::vector<ControlledMap> maps);
};

// Smallest kappa with leg_j kappa-close to D_phi . leg_i for every arrow.
Dist cone_defect(const UCDiagram& d, const std::vector<ControlledMap>& legs);

struct Cone {
  SpacePtr apex;
  std::vector<ControlledMap> legs;
  Dist defect;
};

Cone make_cone(const UCDiagram& d, std::vector<ControlledMap> legs);

struct TupleBudget {
  std::uint64_t candidates = 2'000'000;
  // largest tuple space whose induced metric is stored densely
  std::size_t materialize = 4096;
};

struct TupleSpace {
  Dist kappa;
  SpacePtr ambient;  // l-infinity product of the objects
  Subset tuples;     // increasing ambient indices
  SpacePtr space;    // induced metric, null when above the materialize cap
  std::uint64_t candidates_examined = 0;

  bool empty() const { return tuples.empty(); }
  std::size_t size() const { return tuples.size(); }
  Point coordinate(std::size_t tuple, std::size_t vertex) const;
  // Projection to a vertex; requires the induced metric.
  ControlledMap projection(std::size_t vertex) const;
  std::optional<std::size_t> find(Point ambient_point) const;
};

// Tuples (x_j) with d(x_j, D_phi x_i) <= kappa for every arrow phi: i -> j.
TupleSpace tuple_space(const UCDiagram& d, const Dist& kappa, const TupleBudget& budget = {});

// Largest d(x_j, D_phi x_i) over the tuples and arrows (0 without arrows).
Dist tuple_defect(const UCDiagram& d, const TupleSpace& t);

struct Factorization {
  TupleSpace tuples;  // at kappa = cone defect
  ControlledMap f;    // apex -> tuples
};

// z -> (leg_j z)_j. Throws AssertionFailure unless pi_j . f equals leg_j.
Factorization factor_through_tuples(const UCDiagram& d, const Cone& cone, const TupleBudget& budget = {});

struct StabilizationRow {
  Dist kappa;
  Dist kappa_prime;
  std::size_t size = 0;
  std::size_t size_prime = 0;
  // sup over Tuple^kappa' of the distance to Tuple^kappa
  std::optional<Dist> excess;  // empty when Tuple^kappa is empty
};

std::vector<StabilizationRow> tuple_stabilization(const UCDiagram& d, std::vector<Dist> grid,
                                                  const TupleBudget& budget = {});

struct RipsApex {
  TupleSpace tuples;
  RipsGraph rips;
  Cone cone;  // legs pi_j . xi_sigma
};

RipsApex rips_tuple_apex(const UCDiagram& d, const Dist& kappa, const Dist& sigma, const TupleBudget& budget = {});

// Smallest r with U inside the closed r-neighbourhood of V.
Dist compat_order_defect(const Subset& U, const Subset& V, const FiniteMetricSpace& ambient);

struct MedianDiagram {
  UCDiagram diagram;
  std::vector<TernaryOp> medians;
  std::vector<MedianCertificate> certificates;
  Dist common_C;
  ControlFunction common_rho;
  Dist c;                          // max arrow cmp defect
  std::vector<Defect> arrow_cmp;  // per arrow

  static MedianDiagram make(UCDiagram diagram, std::vector<TernaryOp> medians, const EnumerationBudget& budget = {});
  // Reuses already computed certificates.
  static MedianDiagram make(UCDiagram diagram, std::vector<TernaryOp> medians,
                            std::vector<MedianCertificate> certificates);
};

struct BoundCheck {
  std::string name;
  Dist bound;
  Dist value;
  bool strict = false;  // value < bound
  bool pass() const { return strict ? value < bound : value <= bound; }
};

struct ClosureReport {
  Dist kappa;
  Dist kappa_prime;  // minimal closure constant
  Dist bound;        // c + rho(kappa)
  Dist weak_bound;   // max(C, c) + rho(kappa)
  std::optional<std::size_t> arrow;  // arrow realising kappa_prime
  std::vector<Point> witness;        // ambient tuples realising kappa_prime
  std::size_t tuples = 0;
  bool pass() const { return kappa_prime <= bound; }
};

ClosureReport median_tuple_closure(const MedianDiagram& m, const Dist& kappa, const TupleBudget& budget = {});
// Same computation on an already built tuple space.
ClosureReport median_tuple_closure(const MedianDiagram& m, const TupleSpace& t);

struct AssembledCone {
  TupleSpace tuples;
  ClosureReport closure;
  InducedMedian induced;  // product median retracted onto the tuples
  MedianCertificate induced_certificate;
  RipsMedian rips;        // W = rips.rips.metric, nu = rips.psi
  std::vector<ControlledMap> legs;
  std::vector<Defect> leg_cmp;
  Dist cone_defect;
  std::optional<Dist> closure_excess;  // excess of Tuple^max(kappa, kappa') over Tuple^kappa
  std::vector<BoundCheck> checks;

  const SpacePtr& apex() const { return rips.rips.metric; }
  const TernaryOp& nu() const { return rips.psi; }
  bool pass() const;
};

AssembledCone assemble_median_cone(const MedianDiagram& m, const Dist& kappa, const Dist& sigma,
                                   const EnumerationBudget& budget = {}, const TupleBudget& tuple_budget = {});

}  // namespace coarsemed
