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


#include <doctest.h>

#include <random>

#include "coarsemed/errors.hpp"
#include "coarsemed/generators.hpp"
#include "coarsemed/median.hpp"
#include "support.hpp"

using namespace coarsemed;
using support::D;

namespace {

// Frozen from the oracle's exhaustive scans of the 6-cycle 1-median.
constexpr std::int64_t kC6Sym = 0, kC6Loc = 0, kC6Four = 1, kC6C = 1;
constexpr std::int64_t kC6Rho[4] = {0, 3, 3, 3};
constexpr std::int64_t kC6Five = 1;
constexpr std::int64_t kC6TripodAtC = 3;

std::vector<SpacePtr> median_graphs() {
  return {gen::path(6), gen::star(4), gen::random_tree(12, 1), gen::random_tree(17, 8), gen::grid(3, 3),
          gen::grid(2, 4), gen::hypercube(3)};
}

}  // namespace

TEST_CASE("graph median agrees with the interval-intersection oracle") {
  for (const auto& X : median_graphs()) {
    CAPTURE(X->name());
    const auto d = support::to_mat(*X);
    auto mu = graph_median(X);
    int mismatches = 0;
    for (int a = 0; a < static_cast<int>(X->size()); ++a)
      for (int b = 0; b < static_cast<int>(X->size()); ++b)
        for (int c = 0; c < static_cast<int>(X->size()); ++c)
          mismatches += static_cast<int>(mu(a, b, c)) != oracle::graph_median(d, a, b, c);
    CHECK(mismatches == 0);
  }
}

TEST_CASE("graph median refuses the 6-cycle") { CHECK_THROWS_AS(graph_median(gen::cycle(6)), InputError); }

TEST_CASE("one-median agrees with the oracle") {
  auto X = gen::cycle(7);
  const auto d = support::to_mat(*X);
  auto mu = one_median(X);
  for (int a = 0; a < 7; ++a)
    for (int b = 0; b < 7; ++b)
      for (int c = 0; c < 7; ++c) CHECK(static_cast<int>(mu(a, b, c)) == oracle::one_median(d, a, b, c));
}

TEST_CASE("exact medians on median graphs have zero defects") {
  for (const auto& X : median_graphs()) {
    CAPTURE(X->name());
    auto mu = graph_median(X);
    auto cert = median_certificate(mu);
    CHECK(cert.c == Dist(0));
    CHECK(five_point_defect(mu).value == Dist(0));
    CHECK(tripod_defect(mu, Dist(0)).value == Dist(0));
  }
}

TEST_CASE("6-cycle 1-median certificate matches the oracle") {
  auto X = gen::cycle(6);
  auto mu = one_median(X);
  auto cert = median_certificate(mu);
  const auto d = oracle::cycle(6);
  const auto o = oracle::certificate(d, oracle::one_median_op(d));
  CHECK(o.sym == kC6Sym);
  CHECK(o.loc == kC6Loc);
  CHECK(o.four == kC6Four);
  CHECK(cert.sym.value == D(kC6Sym));
  CHECK(cert.loc.value == D(kC6Loc));
  CHECK(cert.four.value == D(kC6Four));
  CHECK(cert.c == D(kC6C));
  CHECK(cert.rho_exact);
  for (std::int64_t t = 0; t <= 3; ++t) {
    CHECK(oracle::median_rho(d, oracle::one_median_op(d), t) == kC6Rho[t]);
    CHECK(cert.rho(D(t)) == D(kC6Rho[t]));
  }
}

TEST_CASE("certificate witnesses re-evaluate to their defects") {
  auto mu = one_median(gen::cycle(6));
  auto cert = median_certificate(mu);
  const auto& w = cert.four.witness;
  REQUIRE(w.size() == 4);
  CHECK(four_point_discrepancy(mu, w[0], w[1], w[2], w[3]) == cert.four.value);
  const auto& s = cert.sym.witness;
  REQUIRE(s.size() == 4);
  CHECK(symmetry_discrepancy(mu, s[0], s[1], s[2], s[3]) == cert.sym.value);
  const auto& l = cert.loc.witness;
  REQUIRE(l.size() == 2);
  CHECK(localisation_discrepancy(mu, l[0], l[1]) == cert.loc.value);
}

TEST_CASE("four-point witness is the lexicographically least") {
  auto mu = one_median(gen::cycle(6));
  auto cert = median_certificate(mu);
  std::vector<Point> first;
  for (Point a = 0; a < 6 && first.empty(); ++a)
    for (Point b = 0; b < 6 && first.empty(); ++b)
      for (Point c = 0; c < 6 && first.empty(); ++c)
        for (Point w = 0; w < 6 && first.empty(); ++w)
          if (four_point_discrepancy(mu, a, b, c, w) == cert.four.value) first = {a, b, c, w};
  CHECK(cert.four.witness == first);
}

TEST_CASE("6-cycle five-point and tripod defects match the oracle") {
  auto mu = one_median(gen::cycle(6));
  const auto d = oracle::cycle(6);
  CHECK(oracle::five_point(d, oracle::one_median_op(d)) == kC6Five);
  CHECK(five_point_defect(mu).value == D(kC6Five));
  CHECK(five_point_defect(mu).exhaustive);
  CHECK(oracle::tripod(d, oracle::one_median_op(d), kC6C) == kC6TripodAtC);
  CHECK(tripod_defect(mu, D(kC6C)).value == D(kC6TripodAtC));
}

TEST_CASE("five-point scan subsamples only above thirty points with a seed") {
  auto mu = graph_median(gen::random_tree(31, 3));
  EnumerationBudget b;
  b.subsample_seed = 7;
  b.subsample_count = 1000;
  auto d = five_point_defect(mu, b);
  CHECK_FALSE(d.exhaustive);
  CHECK(d.value == Dist(0));
  auto small = five_point_defect(graph_median(gen::random_tree(30, 3)), b);
  CHECK(small.exhaustive);
}

TEST_CASE("collapse P5 to P3 has the oracle cmp defect") {
  auto X = gen::path(5);
  auto Y = gen::path(3);
  ControlledMap f(X, Y, {0, 1, 1, 2, 2});
  const auto expect = oracle::cmp(oracle::path(3), oracle::graph_median_op(oracle::path(5)),
                                  oracle::graph_median_op(oracle::path(3)), {0, 1, 1, 2, 2});
  CHECK(expect == 0);
  CHECK(cmp_defect(f, graph_median(X), graph_median(Y)).value == D(expect));
  CHECK(cmp_defect(identity_map(X), graph_median(X), graph_median(X)).value == Dist(0));
}

TEST_CASE("product median is factorwise") {
  auto T = gen::random_tree(5, 2);
  auto C = gen::cycle(6);
  auto p = product_median({graph_median(T), one_median(C)});
  auto cert = median_certificate(p.op);
  CHECK(cert.c == D(kC6C));
  for (std::size_t k = 0; k < 2; ++k) {
    std::vector<Point> proj;
    for (Point q = 0; q < p.space->size(); ++q) proj.push_back(p.space->decode(q)[k]);
    ControlledMap pi(p.space, p.space->factors()[k], proj);
    auto mu_k = k == 0 ? graph_median(T) : one_median(C);
    CHECK(cmp_defect(pi, p.op, mu_k).value == Dist(0));
  }
  CHECK_THROWS_AS(product_median({}), InputError);
}

TEST_CASE("coarse intervals of a tree at L = 0 are geodesics") {
  auto X = gen::random_tree(14, 6);
  auto mu = graph_median(X);
  const auto d = support::to_mat(*X);
  for (Point x = 0; x < 14; x += 3)
    for (Point y = 0; y < 14; y += 2) {
      Subset geodesic;
      for (Point z = 0; z < 14; ++z)
        if (d[x][z] + d[z][y] == d[x][y]) geodesic.push_back(z);
      CHECK(coarse_interval(mu, x, y, Dist(0)).members == geodesic);
    }
  CHECK(coarse_interval(mu, 0, 5, X->diameter()).members.size() == 14);
}

TEST_CASE("interval checks pass on P5 and the 6-cycle") {
  for (const auto& mu : {graph_median(gen::path(5)), one_median(gen::cycle(6))}) {
    auto cert = median_certificate(mu);
    auto rep = interval_lemma_check(mu, cert, default_interval_grid(cert));
    CHECK(rep.pass());
    for (const auto& c : rep.checks) {
      CAPTURE(c.name);
      CHECK(c.observed <= c.bound);
    }
  }
}

TEST_CASE("P5 neighbourhood of a geodesic lies in the 2-interval") {
  auto X = gen::path(5);
  auto mu = graph_median(X);
  for (Point x = 0; x < 5; ++x)
    for (Point y = 0; y < 5; ++y) {
      auto wide = coarse_interval(mu, x, y, Dist(2)).members;
      for (Point z : neighbourhood(coarse_interval(mu, x, y, Dist(0)).members, Dist(1), *X))
        CHECK(std::find(wide.begin(), wide.end(), z) != wide.end());
    }
}

TEST_CASE("nested interval constant on the 6-cycle") {
  auto mu = one_median(gen::cycle(6));
  auto cert = median_certificate(mu);
  // L + 3C + rho(L) + rho(C) + rho(C + L) at L = C = 1.
  CHECK(nested_interval_constant(D(1), cert.c, cert.rho) == D(1 + 3 + 3 + 3 + 3));
}

TEST_CASE("induced medians") {
  auto X = gen::path(5);
  auto mu = graph_median(X);
  auto all = induce_median(mu, {0, 1, 2, 3, 4});
  CHECK(all.R == Dist(0));
  CHECK(std::equal(all.op.table().begin(), all.op.table().end(), mu.table().begin()));
  auto ends = induce_median(mu, {0, 4});
  CHECK(ends.R == Dist(0));
  CHECK(subalgebra_defect(mu, {0, 4}).value == Dist(0));
  auto mid = induce_median(mu, {0, 2});
  CHECK(mid.R == Dist(0));
  const auto c7 = oracle::cycle(7);
  const std::vector<int> U = {0, 3, 5};
  std::int64_t expect = 0;
  for (int a : U)
    for (int b : U)
      for (int c : U) expect = std::max(expect, oracle::excess(c7, {oracle::one_median(c7, a, b, c)}, U));
  auto gap = induce_median(one_median(gen::cycle(7)), {0, 3, 5});
  CHECK(gap.R == D(expect));
  CHECK_THROWS_AS(induce_median(mu, {}), InputError);
}

TEST_CASE("a geodesic of a tree is a subalgebra with the gate median") {
  auto X = gen::random_tree(16, 12);
  auto mu = graph_median(X);
  const auto d = support::to_mat(*X);
  Subset U;
  for (Point z = 0; z < 16; ++z)
    if (d[3][z] + d[z][14] == d[3][14]) U.push_back(z);
  auto ind = induce_median(mu, U);
  CHECK(ind.R == Dist(0));
  for (Point a = 0; a < U.size(); ++a)
    for (Point b = 0; b < U.size(); ++b)
      for (Point c = 0; c < U.size(); ++c) CHECK(U[ind.op(a, b, c)] == mu(U[a], U[b], U[c]));
}

TEST_CASE("inducing twice is idempotent") {
  auto mu = one_median(gen::cycle(8));
  auto first = induce_median(mu, {0, 1, 3, 4, 6});
  auto again = induce_median(first.op, {0, 1, 2, 3, 4});
  CHECK(again.R == Dist(0));
  CHECK(std::equal(again.op.table().begin(), again.op.table().end(), first.op.table().begin()));
}

TEST_CASE("transfer along the identity reproduces the median") {
  auto X = gen::random_tree(9, 4);
  auto mu = graph_median(X);
  auto t = transfer_median(identity_map(X), identity_map(X), mu);
  CHECK(std::equal(t.nu.table().begin(), t.nu.table().end(), mu.table().begin()));
  CHECK(t.certificate.c == Dist(0));
  CHECK(t.cmp.value == Dist(0));
}

TEST_CASE("transfer along xi_2 on P5 matches psi_2") {
  auto X = gen::path(5);
  auto mu = graph_median(X);
  auto cert = median_certificate(mu);
  auto R = rips_graph(X, Dist(2));
  auto xi = xi_map(R);
  auto back = underlying_identity(X, R.metric);
  auto t = transfer_median(xi, back, mu);
  auto psi = rips_median(mu, cert, Dist(2));
  std::int64_t worst = 0;
  for (Point p = 0; p < 5; ++p)
    for (Point q = 0; q < 5; ++q)
      for (Point r = 0; r < 5; ++r) worst = std::max(worst, R.metric->raw(t.nu(p, q, r), psi.psi(p, q, r)));
  CHECK(worst == 0);
}

TEST_CASE("transfer along an isometry conjugates the median") {
  const auto parents = gen::random_tree_parents(9, 5);
  auto X = gen::tree_from_parents(parents, "X");
  // Relabel by reversing the point order.
  std::vector<WeightedEdge> edges;
  for (Point i = 1; i < 9; ++i) edges.push_back({8 - parents[i], 8 - i, Dist(1)});
  std::vector<std::string> labels;
  for (int i = 8; i >= 0; --i) labels.push_back(std::to_string(i));
  auto W = FiniteMetricSpace::from_graph("W", labels, edges);
  ControlledMap f(W, X, {8, 7, 6, 5, 4, 3, 2, 1, 0});
  ControlledMap g(X, W, {8, 7, 6, 5, 4, 3, 2, 1, 0});
  auto mu = graph_median(X);
  auto t = transfer_median(f, g, mu);
  CHECK(t.certificate.c == Dist(0));
  auto direct = graph_median(W);
  CHECK(std::equal(t.nu.table().begin(), t.nu.table().end(), direct.table().begin()));
}

TEST_CASE("transfer refuses an infinite equivalence") {
  auto X = FiniteMetricSpace::from_graph("split", {"a", "b"}, {});
  auto Y = FiniteMetricSpace::from_graph("pt", {"*"}, {});
  ControlledMap f(X, Y, {0, 0});
  ControlledMap g(Y, X, {0});
  CHECK_THROWS_AS(transfer_median(f, g, graph_median(Y)), InputError);
}

TEST_CASE("rips median at scale one keeps the certificate") {
  auto X = gen::grid(2, 3);
  auto mu = graph_median(X);
  auto cert = median_certificate(mu);
  auto r = rips_median(mu, cert, Dist(1));
  CHECK(r.certificate.c == cert.c);
  CHECK(r.lipschitz_step <= Dist(1));
  CHECK(std::equal(r.psi.table().begin(), r.psi.table().end(), mu.table().begin()));
}

TEST_CASE("psi_2 on P5 has certificate C at most one") {
  auto X = gen::path(5);
  auto mu = graph_median(X);
  auto r = rips_median(mu, median_certificate(mu), Dist(2));
  const auto o = oracle::certificate(oracle::rips(oracle::path(5), 2), oracle::graph_median_op(oracle::path(5)));
  CHECK(r.certificate.c == D(o.c()));
  CHECK(r.certificate.c <= Dist(1));
  CHECK(r.target_scale == Dist(2));
  CHECK(r.lipschitz_step <= Dist(1));
}

TEST_CASE("psi at a scale beyond the diameter has C at most one") {
  for (const auto& mu : {one_median(gen::cycle(7)), graph_median(gen::random_tree(9, 1))}) {
    const auto diam = mu.space()->diameter();
    auto r = rips_median(mu, median_certificate(mu), diam);
    CHECK(r.certificate.c <= Dist(1));
  }
}

TEST_CASE("rips median refuses scale zero") {
  auto mu = graph_median(gen::path(3));
  CHECK_THROWS_AS(rips_median(mu, median_certificate(mu), Dist(0)), InputError);
}

TEST_CASE("closeness stability under random perturbation") {
  auto X = gen::random_tree(9, 11);
  auto mu = graph_median(X);
  auto base = median_certificate(mu);
  std::mt19937_64 rng(5);
  for (int round = 0; round < 6; ++round) {
    std::vector<Point> table(mu.table().begin(), mu.table().end());
    for (auto& v : table) {
      if (rng() % 4 == 0) v = static_cast<Point>(rng() % X->size());
    }
    TernaryOp nu(X, "perturbed", table);
    Dist kappa(0);
    for (std::size_t i = 0; i < table.size(); ++i) kappa = max(kappa, X->dist(table[i], mu.table()[i]));
    auto c = median_certificate(nu);
    CHECK(c.sym.value <= base.sym.value + Dist(2) * kappa);
    CHECK(c.loc.value <= base.loc.value + kappa);
    CHECK(c.four.value <= base.four.value + Dist(2) * kappa + Dist(2) * base.rho(kappa));
  }
}
