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


// Acceptance run: one PASS/FAIL line per criterion, exact rational
// comparisons throughout. argv[1] is the path of the coarsemed binary; an
// optional argv[2] selects a single criterion.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "coarsemed/diagram.hpp"
#include "coarsemed/errors.hpp"
#include "coarsemed/generators.hpp"
#include "coarsemed/hhs.hpp"
#include "coarsemed/median.hpp"
#include "support.hpp"

using namespace coarsemed;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

void require(Outcome& o, bool ok, const std::string& what) {
  if (ok) return;
  if (o.pass) o.detail = "first failure: " + what;
  o.pass = false;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<SpacePtr> tree_fixtures() {
  std::vector<SpacePtr> out;
  const std::size_t sizes[5] = {16, 28, 40, 52, 64};
  for (std::uint64_t s = 1; s <= 5; ++s) out.push_back(gen::random_tree(sizes[s - 1], s));
  return out;
}

std::vector<SpacePtr> grid_fixtures() {
  std::vector<SpacePtr> out;
  for (std::size_t r = 2; r <= 6; ++r)
    for (std::size_t c = r; c <= 6; c += 2) out.push_back(gen::grid(r, c));
  return out;
}

std::vector<SpacePtr> cube_fixtures() { return {gen::hypercube(2), gen::hypercube(3), gen::hypercube(4)}; }

// Nearest-point retraction of a tree onto the ball of the given radius about
// its highest-degree vertex, with the ball as a space of its own.
struct Collapse {
  SpacePtr ball;
  std::vector<Point> map;
};

Collapse collapse_onto_ball(const SpacePtr& T, std::int64_t radius) {
  Point O = 0;
  std::size_t best_degree = 0;
  for (Point p = 0; p < T->size(); ++p) {
    std::size_t deg = 0;
    for (Point q = 0; q < T->size(); ++q) deg += T->dist(p, q) == Dist(1);
    if (deg > best_degree) {
      best_degree = deg;
      O = p;
    }
  }
  Subset ball;
  for (Point p = 0; p < T->size(); ++p)
    if (T->dist(O, p) <= Dist(radius)) ball.push_back(p);
  std::vector<Point> map(T->size());
  for (Point p = 0; p < T->size(); ++p) {
    Dist near = Dist::infinity();
    for (Point b = 0; b < ball.size(); ++b)
      if (T->dist(p, ball[b]) < near) {
        near = T->dist(p, ball[b]);
        map[p] = b;
      }
  }
  return {FiniteMetricSpace::restrict(*T, ball, T->name() + "|B" + std::to_string(radius)), map};
}

// A seeded chain A -> B (-> C) of trees and collapses. Odd seeds nudge a few
// images to a neighbour so the arrows are only coarsely median preserving.
UCDiagram seeded_chain(std::uint64_t seed, std::size_t objects) {
  std::mt19937_64 rng(seed);
  auto A = gen::random_tree(10 + seed % 5, seed);
  auto ab = collapse_onto_ball(A, 2);
  std::vector<SpacePtr> spaces = {A, ab.ball};
  std::vector<std::vector<Point>> maps = {ab.map};
  if (objects == 3) {
    auto bc = collapse_onto_ball(ab.ball, 1);
    spaces.push_back(bc.ball);
    maps.push_back(bc.map);
  }
  if (seed % 2 == 1) {
    for (std::size_t m = 0; m < maps.size(); ++m) {
      const auto& Y = *spaces[m + 1];
      for (int k = 0; k < 2; ++k) {
        const Point p = static_cast<Point>(rng() % maps[m].size());
        for (Point q = 0; q < Y.size(); ++q)
          if (Y.dist(maps[m][p], q) == Dist(1)) {
            maps[m][p] = q;
            break;
          }
      }
    }
  }
  Shape shape;
  for (std::size_t i = 0; i < spaces.size(); ++i) shape.vertices.push_back("T" + std::to_string(i));
  std::vector<ControlledMap> arrows;
  for (std::size_t m = 0; m < maps.size(); ++m) {
    shape.arrows.push_back({m, m + 1, "f" + std::to_string(m)});
    arrows.emplace_back(spaces[m], spaces[m + 1], maps[m]);
  }
  return UCDiagram::make(shape, spaces, arrows);
}

std::vector<TernaryOp> exact_medians(const UCDiagram& d) {
  std::vector<TernaryOp> out;
  for (const auto& X : d.objects) out.push_back(graph_median(X));
  return out;
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<SpacePtr> all = tree_fixtures();
  for (auto& g : grid_fixtures()) all.push_back(g);
  for (auto& q : cube_fixtures()) all.push_back(q);
  for (const auto& X : all) {
    auto mu = graph_median(X);
    auto cert = median_certificate(mu);
    auto E = five_point_defect(mu);
    auto R = tripod_defect(mu, Dist(0));
    require(o, cert.c == Dist(0), X->name() + " C=" + cert.c.to_string());
    require(o, E.exhaustive && E.value == Dist(0), X->name() + " E=" + E.value.to_string());
    require(o, R.value == Dist(0), X->name() + " R=" + R.value.to_string());
  }
  const double secs = seconds_since(t0);
  require(o, secs < 60.0, "suite took " + std::to_string(secs) + " s");
  if (o.pass) {
    std::ostringstream s;
    s.precision(3);
    s << all.size() << " fixtures, C = E = R = 0 exactly, " << secs << " s < 60 s";
    o.detail = s.str();
  }
  return o;
}

Outcome criterion2() {
  Outcome o;
  std::size_t triples = 0;
  std::vector<SpacePtr> fixtures = tree_fixtures();
  for (auto& g : grid_fixtures()) fixtures.push_back(g);
  for (const auto& X : fixtures) {
    auto dc = delta_centre_median(X);
    auto mu = graph_median(X);
    const auto a = dc.table();
    const auto b = mu.table();
    std::size_t diff = 0;
    for (std::size_t i = 0; i < a.size(); ++i) diff += a[i] != b[i];
    triples += a.size();
    require(o, diff == 0, X->name() + ": " + std::to_string(diff) + " triples differ");
  }
  auto C6 = gen::cycle(6);
  auto cert = median_certificate(delta_centre_median(C6));
  const auto d6 = oracle::cycle(6);
  const auto oc = oracle::certificate(d6, oracle::one_median_op(d6));
  require(o, cert.c == Dist(oc.c()), "C6 C=" + cert.c.to_string() + " oracle " + std::to_string(oc.c()));
  require(o, cert.four.value == Dist(oc.four), "C6 C_4pt mismatch");
  if (o.pass)
    o.detail = std::to_string(triples) + " triples equal on " + std::to_string(fixtures.size()) +
               " fixtures; C6 C = " + cert.c.to_string() + " = oracle";
  return o;
}

Outcome criterion3() {
  Outcome o;
  std::vector<TernaryOp> ops;
  for (auto& X : tree_fixtures()) ops.push_back(graph_median(X));
  for (auto& X : grid_fixtures()) ops.push_back(graph_median(X));
  for (auto& X : cube_fixtures()) ops.push_back(graph_median(X));
  ops.push_back(one_median(gen::cycle(6)));
  ops.push_back(one_median(gen::cycle(7)));
  ops.push_back(one_median(gen::cycle(9)));
  ops.push_back(one_median(gen::path(4, Dist(1, 2))));
  std::size_t checks = 0;
  for (const auto& mu : ops) {
    auto cert = median_certificate(mu);
    auto rep = interval_lemma_check(mu, cert, default_interval_grid(cert));
    for (const auto& c : rep.checks) {
      ++checks;
      require(o, c.observed <= c.bound,
              mu.space()->name() + " " + c.name + " L=" + c.L.to_string() + " r=" + c.r.to_string() + ": " +
                  c.observed.to_string() + " > " + c.bound.to_string());
    }
  }
  if (o.pass) o.detail = std::to_string(checks) + " checks on " + std::to_string(ops.size()) + " spaces, 0 failures";
  return o;
}

Outcome criterion4() {
  Outcome o;
  std::size_t instances = 0;
  Dist largest_c(0);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto d = seeded_chain(seed, seed % 3 == 0 ? 2 : 3);
    auto m = MedianDiagram::make(d, exact_medians(d));
    largest_c = max(largest_c, m.c);
    for (const Dist& kappa : {Dist(0), Dist(1), m.c}) {
      auto r = median_tuple_closure(m, kappa);
      ++instances;
      require(o, r.tuples <= 100000, "seed " + std::to_string(seed) + " tuple space too large");
      require(o, r.kappa_prime <= m.c + m.common_rho(kappa),
              "seed " + std::to_string(seed) + " kappa " + kappa.to_string() + ": " + r.kappa_prime.to_string() +
                  " > " + (m.c + m.common_rho(kappa)).to_string());
    }
  }
  if (o.pass)
    o.detail = std::to_string(instances) + " (diagram, kappa) instances, kappa' <= c + rho(kappa); max c = " +
               largest_c.to_string();
  return o;
}

Outcome criterion5() {
  Outcome o;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    ToyParams p;
    p.k = 2;
    p.n = 10 + 2 * (seed % 5);
    p.seed = seed;
    p.depth = seed % 2 == 0 ? 2 : 1;
    auto F = toy_family("tree-collapse-chain", p);
    auto R = constraint_space(F, 0, 1);
    auto rep = pairwise_subalgebra_defect(F, R);
    require(o, rep.defect.value <= rep.bound,
            "seed " + std::to_string(seed) + ": " + rep.defect.value.to_string() + " > " + rep.bound.to_string());
    const auto& c = F.constraints[0];
    require(o, rep.bound == max(rep.tripod, F.common_rho()(c.K + c.K + c.B) + c.K + c.B),
            "seed " + std::to_string(seed) + " bound formula");
  }
  if (o.pass) o.detail = "10 constraint spaces within max(tripod, rho(2K+B)+K+B)";
  return o;
}

Outcome criterion6() {
  Outcome o;
  const std::pair<std::size_t, std::uint64_t> cases[] = {{12, 3}, {10, 8}};
  std::string summary;
  for (const auto& [n, seed] : cases) {
    ToyParams p;
    p.k = 2;
    p.n = n;
    p.seed = seed;
    auto F = toy_family("product-of-trees", p);
    auto H = build_hhs_diagram(F);
    auto a = assemble_median_cone(H.diagram, Dist(0), Dist(1));
    const std::string tag = "n=" + std::to_string(n) + " seed=" + std::to_string(seed);
    require(o, a.rips.certificate.c <= Dist(1), tag + " nu C=" + a.rips.certificate.c.to_string());
    for (std::size_t v = 0; v < a.leg_cmp.size(); ++v)
      require(o, a.leg_cmp[v].value == Dist(0), tag + " leg " + std::to_string(v) + " cmp " + a.leg_cmp[v].value.to_string());
    summary += (summary.empty() ? "" : "; ") + tag + ": " + std::to_string(a.tuples.size()) + " tuples, C = " +
               a.rips.certificate.c.to_string();
  }
  if (o.pass) o.detail = summary + ", all leg cmp = 0";
  return o;
}

Outcome criterion7() {
  Outcome o;
  ToyParams p;
  p.k = 3;
  p.n = 10;
  p.seed = 1;
  p.depth = 1;
  auto F = toy_family("tree-collapse-chain", p);
  Dist K(0);
  for (const auto& c : F.constraints) K = max(K, c.K);
  auto H = build_hhs_diagram(F);
  auto a = assemble_median_cone(H.diagram, K, Dist(1));
  require(o, a.rips.certificate.c.is_finite(), "nu C infinite");
  for (const auto& l : a.leg_cmp) require(o, l.value.is_finite(), "leg cmp infinite");
  for (const auto& c : a.checks) require(o, c.pass(), c.name + ": " + c.value.to_string() + " vs " + c.bound.to_string());
  // Independent re-enumeration of the nu certificate and leg defects.
  const auto W = support::to_mat(*a.apex());
  const auto nu = support::op_of(a.nu());
  const auto oc = oracle::certificate(W, nu);
  require(o, a.rips.certificate.c == Dist(oc.c()), "oracle nu C " + std::to_string(oc.c()));
  for (std::size_t v = 0; v < a.legs.size(); ++v) {
    const auto& X = H.diagram.diagram.objects[v];
    const auto ov = oracle::cmp(support::to_mat(*X), nu, support::op_of(H.diagram.medians[v]), support::table_of(a.legs[v]));
    require(o, a.leg_cmp[v].value == Dist(ov), "oracle leg cmp " + std::to_string(v));
  }
  if (o.pass)
    o.detail = "K = " + K.to_string() + ", " + std::to_string(a.tuples.size()) + " tuples, nu C = " +
               a.rips.certificate.c.to_string() + " (oracle agrees), " + std::to_string(a.checks.size()) +
               " bound assertions pass";
  return o;
}

// Worst Rips_target distance between images of triples adjacent in Rips_sigma.
std::int64_t naive_step(const oracle::Mat& dom, const oracle::Mat& tgt, const oracle::Op& mu) {
  const int n = oracle::size(dom);
  std::int64_t worst = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int a2 = 0; a2 < n; ++a2) {
          if (dom[a][a2] > 1) continue;
          for (int b2 = 0; b2 < n; ++b2) {
            if (dom[b][b2] > 1) continue;
            for (int c2 = 0; c2 < n; ++c2)
              if (dom[c][c2] <= 1) worst = std::max(worst, tgt[mu(a, b, c)][mu(a2, b2, c2)]);
          }
        }
  return worst;
}

Outcome criterion8() {
  Outcome o;
  std::vector<TernaryOp> ops = {graph_median(gen::path(5)),        graph_median(gen::path(7)),
                                graph_median(gen::random_tree(10, 2)), graph_median(gen::random_tree(16, 6)),
                                graph_median(gen::grid(3, 3)),     graph_median(gen::grid(2, 4)),
                                graph_median(gen::hypercube(3)),   one_median(gen::cycle(6)),
                                one_median(gen::cycle(8))};
  std::size_t runs = 0, exact_rho = 0, cross = 0;
  for (const auto& mu : ops) {
    const auto& X = mu.space();
    auto cert = median_certificate(mu);
    std::vector<RipsGraph> graphs;
    for (std::int64_t s = 1; s <= 3; ++s) {
      const std::string tag = X->name() + " sigma=" + std::to_string(s);
      graphs.push_back(rips_graph(X, Dist(s)));
      try {
        auto r = rips_median(mu, cert, Dist(s));
        ++runs;
        exact_rho += cert.rho_exact || Dist(s) <= cert.rho_exact_through;
        require(o, r.lipschitz_step <= Dist(1), tag + " step " + r.lipschitz_step.to_string());
        if (X->size() <= 10) {
          const auto target = rips_graph(X, r.target_scale);
          const auto step = naive_step(support::to_mat(*graphs.back().metric), support::to_mat(*target.metric),
                                       support::op_of(mu));
          require(o, Dist(step) == r.lipschitz_step, tag + " oracle step " + std::to_string(step));
          ++cross;
        }
      } catch (const AssertionFailure& e) {
        require(o, false, tag + " " + e.what());
      }
      auto xi = xi_map(graphs.back());
      for (const auto& smp : xi.control().samples())
        require(o, smp.bound <= Dist(s) * smp.threshold, tag + " xi control at t=" + smp.threshold.to_string());
    }
    for (std::size_t i = 0; i < graphs.size(); ++i)
      for (std::size_t j = i + 1; j < graphs.size(); ++j)
        for (Point p = 0; p < X->size(); ++p)
          for (Point q = 0; q < X->size(); ++q)
            require(o, graphs[j].metric->dist(p, q) <= graphs[i].metric->dist(p, q), X->name() + " monotonicity");
  }
  if (o.pass)
    o.detail = std::to_string(runs) + " (space, sigma) runs 1-Lipschitz (" + std::to_string(cross) +
               " re-enumerated, " + std::to_string(exact_rho) + " with exact rho(sigma)); xi control <= sigma t; "
               "Rips metrics monotone";
  return o;
}

Outcome criterion9() {
  Outcome o;
  std::size_t points = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    std::mt19937_64 rng(seed * 7919);
    auto d = seeded_chain(seed, seed % 2 == 0 ? 3 : 2);
    auto Z = gen::random_tree(4 + seed % 5, seed + 100);
    std::vector<ControlledMap> legs;
    std::vector<Point> first(Z->size());
    for (auto& v : first) v = static_cast<Point>(rng() % d.objects[0]->size());
    legs.emplace_back(Z, d.objects[0], first);
    for (std::size_t a = 0; a < d.maps.size(); ++a) {
      auto next = compose(d.maps[a], legs.back());
      std::vector<Point> t = next.table();
      if (rng() % 2) t[rng() % t.size()] = static_cast<Point>(rng() % d.objects[a + 1]->size());
      legs.emplace_back(Z, d.objects[a + 1], t);
    }
    auto cone = make_cone(d, legs);
    try {
      auto fac = factor_through_tuples(d, cone);
      require(o, fac.tuples.kappa == cone.defect, "seed " + std::to_string(seed) + " kappa");
      for (Point z = 0; z < Z->size(); ++z) {
        ++points;
        for (std::size_t v = 0; v < legs.size(); ++v)
          require(o, fac.tuples.coordinate(fac.f(z), v) == legs[v](z),
                  "seed " + std::to_string(seed) + " z=" + std::to_string(z) + " vertex " + std::to_string(v));
      }
    } catch (const std::exception& e) {
      require(o, false, "seed " + std::to_string(seed) + ": " + e.what());
    }
  }
  if (o.pass) o.detail = "20 cones, " + std::to_string(points) + " apex points, pi o f = legs exactly";
  return o;
}

struct Run {
  int code = -1;
  std::string out;
};

Run run_cli(const std::string& cli, const std::string& args, const fs::path& out_file) {
  const std::string cmd = "cd '" + std::string(COARSEMED_FIXTURES_DIR) + "' && '" + cli + "' " + args + " > '" +
                          out_file.string() + "' 2>/dev/null";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out_file, std::ios::binary);
  r.out.assign(std::istreambuf_iterator<char>(in), {});
  return r;
}

Outcome criterion10(const std::string& cli) {
  Outcome o;
  const fs::path golden = COARSEMED_GOLDEN_DIR;
  const fs::path tmp = fs::temp_directory_path() / ("coarsemed_acc_" + std::to_string(::getpid()));
  fs::create_directories(tmp);
  std::ifstream cases(golden / "cases.txt");
  std::size_t n = 0;
  for (std::string line; std::getline(cases, line);) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string name, args, a;
    int want = 0;
    ss >> name >> want;
    while (ss >> a) args += " " + a;
    const auto r1 = run_cli(cli, args, tmp / (name + ".1"));
    const auto r2 = run_cli(cli, args, tmp / (name + ".2"));
    std::ifstream g(golden / (name + ".json"), std::ios::binary);
    const std::string expect{std::istreambuf_iterator<char>(g), {}};
    require(o, r1.out == r2.out, name + ": runs differ");
    require(o, r1.out == expect, name + ": differs from golden");
    require(o, r1.code == want && r2.code == want, name + ": exit " + std::to_string(r1.code));
    ++n;
  }
  const auto bad = run_cli(cli, "check-median --space c6.json --median one-median --max-C 0", tmp / "failing");
  require(o, bad.code == 1, "failing fixture exit " + std::to_string(bad.code));
  bool named = false;
  try {
    const auto j = nlohmann::json::parse(bad.out);
    for (const auto& x : j.at("assertions")) named |= x.at("name") == "max_C" && !x.at("pass").get<bool>();
  } catch (const std::exception&) {
  }
  require(o, named, "failing fixture does not name max_C");
  fs::remove_all(tmp);
  if (o.pass) o.detail = std::to_string(n) + " golden invocations byte-identical twice; failing fixture exits 1 on max_C";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: coarsemed_acceptance PATH_TO_COARSEMED [CRITERION]\n";
    return 2;
  }
  const std::string cli = fs::absolute(argv[1]).string();
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"median-graph oracle suite", criterion1},
      {"delta-centre surrogate", criterion2},
      {"interval checks at the stated constants", criterion3},
      {"tuple closure bound", criterion4},
      {"pairwise subalgebra bound", criterion5},
      {"orthogonal recipe", criterion6},
      {"constrained recipe", criterion7},
      {"Rips layer", criterion8},
      {"factorization exactness", criterion9},
      {"CLI determinism", [&] { return criterion10(cli); }},
  };
  const std::size_t only = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 0;
  if (only > criteria.size()) {
    std::cerr << "criterion must be 1.." << criteria.size() << "\n";
    return 2;
  }
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && i + 1 != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2fs", seconds_since(t0));
    std::cout << "AC" << (i + 1) << (i + 1 < 10 ? "  " : " ") << (o.pass ? "PASS" : "FAIL") << "  "
              << criteria[i].first << " [" << timing << "]: " << o.detail << std::endl;
    failures += !o.pass;
  }
  if (only == 0)
    std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria failed") << "\n";
  return failures == 0 ? 0 : 1;
}
