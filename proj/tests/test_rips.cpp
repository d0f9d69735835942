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

#include "coarsemed/errors.hpp"
#include "coarsemed/generators.hpp"
#include "coarsemed/rips.hpp"
#include "support.hpp"

using namespace coarsemed;
using support::D;

TEST_CASE("Rips_1 of a unit-edge path is the path") {
  auto X = gen::path(3);
  auto R = rips_graph(X, Dist(1));
  CHECK(support::to_mat(*R.metric) == oracle::path(3));
  CHECK(R.edges().size() == 2);
}

TEST_CASE("Rips metrics match a BFS oracle") {
  for (auto X : {gen::cycle(9), gen::grid(3, 4), gen::random_tree(18, 2)}) {
    const auto d = support::to_mat(*X);
    for (std::int64_t s : {1, 2, 3}) {
      CAPTURE(X->name());
      CAPTURE(s);
      CHECK(support::to_mat(*rips_graph(X, D(s)).metric) == oracle::rips(d, s));
    }
  }
}

TEST_CASE("xi on Rips_2 of P5 has control 2t") {
  auto X = gen::path(5);
  auto xi = xi_map(rips_graph(X, Dist(2)));
  CHECK(xi.control()(D(1)) == D(2));
  CHECK(xi.control()(D(2)) == D(4));
  for (const auto& s : xi.control().samples()) CHECK(s.bound <= Dist(2) * s.threshold);
}

TEST_CASE("filtration distortion on P5") {
  auto t = filtration_distortion(gen::path(5), {Dist(1), Dist(2)});
  CHECK(t.at(0, 1).ratio == Dist(2));
  CHECK(t.at(0, 0).ratio == Dist(1));
  CHECK_FALSE(t.at(0, 1).infinite_flag());
  REQUIRE(t.recommended_scale);
  CHECK(*t.recommended_scale == Dist(1));
}

TEST_CASE("Rips graphs of a gapped space flag infinite pairs") {
  auto X = gen::path(3, Dist(2));
  auto t = filtration_distortion(X, {Dist(1), Dist(2)});
  CHECK(t.at(0, 1).disconnected_pairs == 3);
  CHECK(t.at(0, 1).infinite_flag());
  REQUIRE(t.recommended_scale);
  CHECK(*t.recommended_scale == Dist(2));
  CHECK_THROWS_AS(filtration_distortion(X, {Dist(2), Dist(1)}), InputError);
}

TEST_CASE("Rips metrics are monotone in the scale") {
  auto X = gen::random_tree(25, 5);
  auto a = rips_graph(X, Dist(1));
  auto b = rips_graph(X, Dist(2));
  auto c = rips_graph(X, Dist(5, 2));
  for (Point p = 0; p < X->size(); ++p)
    for (Point q = 0; q < X->size(); ++q) {
      CHECK(b.metric->dist(p, q) <= a.metric->dist(p, q));
      CHECK(c.metric->dist(p, q) <= b.metric->dist(p, q));
    }
}
