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
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coarsemed/controlled_map.hpp"
#include "coarsemed/rips.hpp"

namespace coarsemed {

// A total ternary operator on a space. Small operators (n^3 <= kMaxTabulated)
// are tabulated at construction; larger ones evaluate their rule on demand.
class TernaryOp {
 public:
  using Rule = std::function<Point(Point, Point, Point)>;
  static constexpr std::size_t kMaxTabulated = std::size_t{1} << 24;

  TernaryOp(SpacePtr space, std::string kind, Rule rule);
  TernaryOp(SpacePtr space, std::string kind, std::vector<Point> table);

  Point operator()(Point a, Point b, Point c) const {
    if (table_) return (*table_)[(static_cast<std::size_t>(a) * n_ + b) * n_ + c];
    return rule_(a, b, c);
  }

  const SpacePtr& space() const { return space_; }
  const std::string& kind() const { return kind_; }
  bool tabulated() const { return table_ != nullptr; }
  // Flattened n^3 table (empty when not tabulated).
  std::span<const Point> table() const;
  // The same operator on another metric over the same point list.
  TernaryOp with_space(SpacePtr other, std::string kind) const;

 private:
  SpacePtr space_;
  std::string kind_;
  std::size_t n_ = 0;
  Rule rule_;
  std::shared_ptr<const std::vector<Point>> table_;
};

// Median graphs: the lowest-index point of I(x,y) n I(y,z) n I(z,x).
// Throws InputError when some triple has an empty interval intersection.
TernaryOp graph_median(const SpacePtr& space);
// Minimiser of d(., x) + d(., y) + d(., z), lowest index on ties.
TernaryOp one_median(const SpacePtr& space);

struct ProductMedian {
  SpacePtr space;  // implicit l-infinity product
  TernaryOp op;
};

ProductMedian product_median(const std::vector<TernaryOp>& factors);

// Extremal value of a scan together with the tuple attaining it (the
// lexicographically least such tuple in exhaustive mode).
struct Defect {
  Dist value;
  std::vector<Point> witness;
  bool exhaustive = true;  // false: subsampled lower bound
  bool vacuous = false;    // no tuple satisfied the scan's premise
};

struct EnumerationBudget {
  // work units (pairs of triples) for the exact control of a median
  std::uint64_t rho_pairs = 200'000'000;
  // quintuples for the five-point scan before it falls back to sampling
  std::uint64_t five_point = 1'500'000'000;
  std::uint64_t subsample_count = 20'000'000;
  std::optional<std::uint64_t> subsample_seed;
};

struct MedianCertificate {
  Defect sym;   // witness: x1 x2 x3 permutation-index
  Defect loc;   // witness: x y
  Defect four;  // witness: x1 x2 x3 w
  Dist c;
  // Control of the median on the l-infinity triple space.
  ControlFunction rho;
  // Thresholds up to rho_exact_through are exact; later samples are the
  // image diameter (a valid but not minimal bound).
  bool rho_exact = true;
  Dist rho_exact_through;
};

// Permutations of three slots in lexicographic order; index 0 is identity.
inline constexpr unsigned kPermutations[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                                 {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};

Dist symmetry_discrepancy(const TernaryOp& mu, Point x1, Point x2, Point x3, unsigned perm);
Dist localisation_discrepancy(const TernaryOp& mu, Point x, Point y);
Dist four_point_discrepancy(const TernaryOp& mu, Point x1, Point x2, Point x3, Point w);
Dist five_point_discrepancy(const TernaryOp& mu, Point v, Point w, Point x, Point y, Point z);

ControlFunction median_control(const TernaryOp& mu, const EnumerationBudget& budget, bool* exact = nullptr,
                               Dist* exact_through = nullptr);
MedianCertificate median_certificate(const TernaryOp& mu, const EnumerationBudget& budget = {});

// max over domain triples of d(f(mu_dom(x,y,z)), mu_cod(fx, fy, fz)).
Defect cmp_defect(const ControlledMap& f, const TernaryOp& mu_dom, const TernaryOp& mu_cod);

struct CoarseInterval {
  Point x;
  Point y;
  Dist L;
  Subset members;
};

CoarseInterval coarse_interval(const TernaryOp& mu, Point x, Point y, const Dist& L);

struct IntervalGrid {
  std::vector<Dist> L;
  std::vector<Dist> r;
};

// L in {0, C, 2C}, r in {0, 1, 2}.
IntervalGrid default_interval_grid(const MedianCertificate& cert);

struct IntervalCheck {
  std::string name;  // endpoints | median-membership | neighbourhood | nested
  Dist L;
  Dist r;
  Dist bound;
  Dist observed;
  std::vector<Point> witness;
  bool pass() const { return observed <= bound; }
};

struct IntervalLemmaReport {
  std::vector<IntervalCheck> checks;
  bool pass() const;
};

// Chained constant for nested intervals: L + 3C + rho(L) + rho(C) + rho(C + L).
Dist nested_interval_constant(const Dist& L, const Dist& C, const ControlFunction& rho);

IntervalLemmaReport interval_lemma_check(const TernaryOp& mu, const MedianCertificate& cert,
                                         const IntervalGrid& grid);

Defect five_point_defect(const TernaryOp& mu, const EnumerationBudget& budget = {});

// Largest d(O, mu(x,y,z)) over O in [x,y]_L n [y,z]_L n [z,x]_L.
Defect tripod_defect(const TernaryOp& mu, const Dist& L);

struct InducedMedian {
  Subset subset;  // points of the ambient space, in order
  SpacePtr space;
  TernaryOp op;
  Dist R;
  std::vector<Point> witness;  // ambient triple realising R
};

// max over U^3 of d(mu(u, v, w), U); witness is the ambient triple.
Defect subalgebra_defect(const TernaryOp& mu, const Subset& U);

// Nearest-point retraction of mu onto U (lowest index on ties).
InducedMedian induce_median(const TernaryOp& mu, const Subset& U, std::string name = {});

struct TransferredMedian {
  TernaryOp nu;
  MedianCertificate certificate;
  EquivalenceReport equivalence;
  Defect cmp;  // of f : (W, nu) -> (X, mu)
};

// nu(a, b, c) = g(mu(fa, fb, fc)) for a coarse equivalence f : W -> X with
// coarse inverse g.
TransferredMedian transfer_median(const ControlledMap& f, const ControlledMap& g, const TernaryOp& mu,
                                  const EnumerationBudget& budget = {});

struct RipsMedian {
  RipsGraph rips;
  TernaryOp psi;
  MedianCertificate certificate;
  Dist target_scale;    // rho(sigma)
  Dist lipschitz_step;  // max image distance in Rips_{rho(sigma)} over adjacent triples
};

// Largest distance in target between images of adjacent triples of domain
// (both graph metrics on the same points). A value <= 1 means 1-Lipschitz.
Dist adjacent_triple_step(const TernaryOp& op, const FiniteMetricSpace& domain, const FiniteMetricSpace& target);

RipsMedian rips_median(const TernaryOp& mu, const MedianCertificate& cert, const Dist& sigma,
                       const EnumerationBudget& budget = {});

}  // namespace coarsemed
