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
#include <utility>
#include <vector>

#include "coarsemed/diagram.hpp"
#include "coarsemed/median.hpp"

namespace coarsemed {

// theta maps C_v into C_u; O is a point of C_v.
struct ConstraintData {
  std::size_t u;
  std::size_t v;
  std::vector<Point> theta;
  Point O;
  Dist B;
  Dist K;
};

struct Family {
  std::vector<std::string> indices;
  std::vector<SpacePtr> spaces;
  std::vector<TernaryOp> medians;
  std::vector<MedianCertificate> certificates;
  std::vector<std::pair<std::size_t, std::size_t>> orth;  // unordered, stored with first < second
  std::vector<ConstraintData> constraints;

  Dist common_C() const;
  ControlFunction common_rho() const;
  bool orthogonal(std::size_t i, std::size_t j) const;
  const ConstraintData* constraint(std::size_t i, std::size_t j) const;
  // Structure of orth and constraints plus B >= C + rho(C) and K >= B.
  void validate() const;
};

// Four-point hyperbolicity constant, taken over quadruples inside one component.
Dist hyperbolicity(const FiniteMetricSpace& X);

// Sum-of-distances minimiser standing in for a delta-centre. Requires a
// connected space.
TernaryOp delta_centre_median(const SpacePtr& X);

struct BCIIReport {
  Defect defect;  // witness: x y
  Dist min_valid_B;  // max(defect, C + rho(C))
};

// max over ordered pairs of min(d(mu(x, y, O), O), d(theta x, theta y)).
BCIIReport bcii_defect(const TernaryOp& mu_v, const MedianCertificate& cert_v, const FiniteMetricSpace& CU,
                       const std::vector<Point>& theta, Point O);

struct ConstraintSpace {
  std::size_t first;   // index of the first factor
  std::size_t second;  // index of the second factor
  bool orthogonal = false;
  SpacePtr ambient;  // C_first x C_second
  Subset points;
  SpacePtr space;
};

// Pairs with x_u within K of theta(x_v) or x_v within K of O; the full
// product without data.
ConstraintSpace constraint_space(const SpacePtr& first, const SpacePtr& second, const ConstraintData* data,
                                 bool u_first = true);
// Pair space of F for i < j.
ConstraintSpace constraint_space(const Family& F, std::size_t i, std::size_t j);

struct PairwiseReport {
  Defect defect;
  Dist L;            // interval-chain constant at L = B
  Dist tripod;       // tripod defect of C_v at L
  Dist branch;       // rho(2K + B) + K + B
  Dist bound;        // max(tripod, branch); 0 for orthogonal pairs
  bool pass() const { return defect.value <= bound; }
};

PairwiseReport pairwise_subalgebra_defect(const Family& F, const ConstraintSpace& R);

struct HHSDiagram {
  MedianDiagram diagram;
  std::vector<ConstraintSpace> pairs;
  std::vector<InducedMedian> pair_medians;
  std::vector<PairwiseReport> pairwise;
  Dist max_R;
  std::vector<BoundCheck> checks;
  bool pass() const;
};

// Vertices: one per index, then one per pair i < j; arrows project each pair
// vertex onto its two factors.
HHSDiagram build_hhs_diagram(const Family& F, const EnumerationBudget& budget = {});

struct ToyParams {
  std::size_t k = 2;            // number of indices
  std::size_t n = 5;            // size of the largest tree
  std::uint64_t seed = 0;
  std::size_t depth = 1;        // collapse radius for the chain
  std::size_t extra_orthogonal = 0;
  EnumerationBudget budget;
};

// "product-of-trees" or "tree-collapse-chain".
Family toy_family(const std::string& kind, const ToyParams& params);

}  // namespace coarsemed
