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
#include <cmath>
#include <numeric>
#include <random>
#include <tuple>

#include "coarsemed/errors.hpp"
#include "coarsemed/median.hpp"
#include "coarsemed/parallel.hpp"

namespace coarsemed {

namespace {

// Direct table access for the enumeration kernels.
struct View {
  explicit View(const TernaryOp& op)
      : X(*op.space()),
        mu(op),
        n(X.size()),
        D(X.dense_data()),
        T(op.tabulated() ? op.table().data() : nullptr) {}

  Point m(Point a, Point b, Point c) const {
    return T ? T[(static_cast<std::size_t>(a) * n + b) * n + c] : mu(a, b, c);
  }
  std::int64_t d(Point a, Point b) const { return D ? D[static_cast<std::size_t>(a) * n + b] : X.raw(a, b); }

  const FiniteMetricSpace& X;
  const TernaryOp& mu;
  std::size_t n;
  const std::int64_t* D;
  const Point* T;
};

template <std::size_t N>
Defect to_defect(const FiniteMetricSpace& X, const RawExtremum<N>& e) {
  if (e.value < 0) return {Dist(0), {}, true, true};
  return {X.to_dist(e.value), std::vector<Point>(e.witness, e.witness + N)};
}

// e[(x*n + y)*n + z] = d(mu(x,y,z), z)
std::vector<std::int64_t> interval_excess_table(const View& v) {
  const std::size_t n = v.n;
  std::vector<std::int64_t> e(n * n * n);
  for (Point x = 0; x < n; ++x) {
    for (Point y = 0; y < n; ++y) {
      std::int64_t* row = e.data() + (static_cast<std::size_t>(x) * n + y) * n;
      for (Point z = 0; z < n; ++z) row[z] = v.d(v.m(x, y, z), z);
    }
  }
  return e;
}

std::vector<Dist> sorted_unique(std::vector<Dist> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}


// Four-point scan. The first pass runs in the cache-friendly order
// (x1, w, x2, x3); the second finds the lexicographically least
// (x1, x2, x3, w) attaining the maximum.
RawExtremum<4> four_point_scan(const View& v) {
  const std::size_t n = v.n;
  RawExtremum<4> out;
  if (n == 0) return out;
  auto layer = [&](Point x1, std::int64_t target, RawExtremum<4>* hit) {
    std::int64_t best = -1;
    for (Point w = 0; w < n; ++w) {
      const Point* row1 = v.T ? v.T + (static_cast<std::size_t>(x1) * n + w) * n : nullptr;
      for (Point x2 = 0; x2 < n; ++x2) {
        const Point t = row1 ? row1[x2] : v.m(x1, w, x2);
        const Point* rowt = v.T ? v.T + (static_cast<std::size_t>(t) * n + w) * n : nullptr;
        const Point* row2 = v.T ? v.T + (static_cast<std::size_t>(x2) * n + w) * n : nullptr;
        for (Point x3 = 0; x3 < n; ++x3) {
          const Point lhs = rowt ? rowt[x3] : v.m(t, w, x3);
          const Point inner = row2 ? row2[x3] : v.m(x2, w, x3);
          const Point rhs = row1 ? row1[inner] : v.m(x1, w, inner);
          const std::int64_t d = v.d(lhs, rhs);
          if (d > best) best = d;
          if (hit && d == target) {
            const bool earlier = hit->value < 0 || std::tie(x2, x3, w) < std::tie(hit->witness[1], hit->witness[2], hit->witness[3]);
            if (earlier) {
              hit->value = d;
              hit->witness[0] = x1;
              hit->witness[1] = x2;
              hit->witness[2] = x3;
              hit->witness[3] = w;
            }
          }
        }
      }
    }
    return best;
  };
  auto pass = parallel_max<1>(n, [&](std::size_t begin, std::size_t end, RawExtremum<1>& local) {
    for (Point x1 = static_cast<Point>(begin); x1 < end; ++x1) local.offer(layer(x1, -1, nullptr), {x1});
  });
  for (Point x1 = 0; x1 < n && out.value < 0; ++x1) layer(x1, pass.value, &out);
  return out;
}

}  // namespace

ControlFunction median_control(const TernaryOp& mu, const EnumerationBudget& budget, bool* exact,
                               Dist* exact_through) {
  const View v(mu);
  const std::size_t n = v.n;
  if (exact) *exact = true;
  if (exact_through) *exact_through = Dist(0);
  if (n == 0) return ControlFunction();

  const auto thresholds = v.X.distinct_finite_raw();
  std::vector<char> in_image(n, 0);
  for (Point a = 0; a < n; ++a) {
    for (Point b = 0; b < n; ++b) {
      for (Point c = 0; c < n; ++c) in_image[v.m(a, b, c)] = 1;
    }
  }
  std::int64_t image_diam = 0;
  for (Point p = 0; p < n; ++p) {
    for (Point q = p + 1; q < n; ++q) {
      if (in_image[p] && in_image[q]) image_diam = std::max(image_diam, v.d(p, q));
    }
  }

  // order[p] lists points by distance from p; balls are prefixes.
  std::vector<std::vector<Point>> order(n);
  for (Point p = 0; p < n; ++p) {
    order[p].resize(n);
    std::iota(order[p].begin(), order[p].end(), Point{0});
    std::stable_sort(order[p].begin(), order[p].end(),
                     [&](Point a, Point b) { return v.d(p, a) < v.d(p, b); });
  }
  std::vector<std::size_t> ball(n, 0);

  std::vector<ControlSample> samples;
  std::int64_t running = 0;
  long double used = 0;
  bool truncated = false;
  for (const auto t : thresholds) {
    long double total = 0;
    for (Point p = 0; p < n; ++p) {
      while (ball[p] < n && v.d(p, order[p][ball[p]]) <= t) ++ball[p];
      total += static_cast<long double>(ball[p]);
    }
    const long double work = total * total * total;
    if (!truncated && running < image_diam && used + work > static_cast<long double>(budget.rho_pairs)) {
      truncated = true;
      if (exact) *exact = false;
    }
    if (truncated) {
      samples.push_back({v.X.to_dist(t), v.X.to_dist(std::max(running, image_diam))});
      continue;
    }
    if (running < image_diam) {
      used += work;
      auto best = parallel_max<1>(n, [&](std::size_t begin, std::size_t end, RawExtremum<1>& local) {
        for (Point a1 = static_cast<Point>(begin); a1 < end; ++a1) {
          for (Point a2 = 0; a2 < n; ++a2) {
            for (Point a3 = 0; a3 < n; ++a3) {
              const Point ma = v.m(a1, a2, a3);
              std::int64_t best_here = -1;
              for (std::size_t i1 = 0; i1 < ball[a1]; ++i1) {
                const Point b1 = order[a1][i1];
                for (std::size_t i2 = 0; i2 < ball[a2]; ++i2) {
                  const Point b2 = order[a2][i2];
                  for (std::size_t i3 = 0; i3 < ball[a3]; ++i3) {
                    best_here = std::max(best_here, v.d(ma, v.m(b1, b2, order[a3][i3])));
                  }
                }
              }
              local.offer(best_here, {a1});
            }
          }
        }
      });
      running = std::max(running, best.value);
    }
    if (exact_through) *exact_through = v.X.to_dist(t);
    samples.push_back({v.X.to_dist(t), v.X.to_dist(running)});
  }
  return ControlFunction(std::move(samples));
}

MedianCertificate median_certificate(const TernaryOp& mu, const EnumerationBudget& budget) {
  const View v(mu);
  const std::size_t n = v.n;
  MedianCertificate cert;

  auto sym = parallel_max<4>(n, [&](std::size_t begin, std::size_t end, RawExtremum<4>& local) {
    for (Point x1 = static_cast<Point>(begin); x1 < end; ++x1) {
      for (Point x2 = 0; x2 < n; ++x2) {
        for (Point x3 = 0; x3 < n; ++x3) {
          const Point xs[3] = {x1, x2, x3};
          const Point base = v.m(x1, x2, x3);
          for (Point p = 1; p < 6; ++p) {
            const auto* perm = kPermutations[p];
            local.offer(v.d(v.m(xs[perm[0]], xs[perm[1]], xs[perm[2]]), base), {x1, x2, x3, p});
          }
        }
      }
    }
  });
  auto loc = parallel_max<2>(n, [&](std::size_t begin, std::size_t end, RawExtremum<2>& local) {
    for (Point x = static_cast<Point>(begin); x < end; ++x) {
      for (Point y = 0; y < n; ++y) local.offer(v.d(v.m(x, x, y), x), {x, y});
    }
  });
  auto four = four_point_scan(v);
  cert.sym = to_defect(v.X, sym);
  cert.loc = to_defect(v.X, loc);
  cert.four = to_defect(v.X, four);
  cert.sym.vacuous = cert.loc.vacuous = cert.four.vacuous = false;
  cert.c = max(cert.sym.value, max(cert.loc.value, cert.four.value));
  cert.rho = median_control(mu, budget, &cert.rho_exact, &cert.rho_exact_through);
  return cert;
}

IntervalGrid default_interval_grid(const MedianCertificate& cert) {
  return {sorted_unique({Dist(0), cert.c, cert.c + cert.c}), {Dist(0), Dist(1), Dist(2)}};
}

Dist nested_interval_constant(const Dist& L, const Dist& C, const ControlFunction& rho) {
  return L + C + C + C + rho(L) + rho(C) + rho(C + L);
}

bool IntervalLemmaReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const IntervalCheck& c) { return c.pass(); });
}

IntervalLemmaReport interval_lemma_check(const TernaryOp& mu, const MedianCertificate& cert,
                                         const IntervalGrid& grid) {
  const View v(mu);
  const std::size_t n = v.n;
  const auto& X = v.X;
  const auto e = interval_excess_table(v);
  auto E = [&](Point x, Point y, Point z) { return e[(static_cast<std::size_t>(x) * n + y) * n + z]; };
  const Dist C = cert.c;
  IntervalLemmaReport report;

  {
    RawExtremum<2> ends;
    RawExtremum<3> member;
    for (Point x = 0; x < n; ++x) {
      for (Point y = 0; y < n; ++y) {
        ends.offer(std::max(E(x, y, x), E(x, y, y)), {x, y});
        for (Point z = 0; z < n; ++z) member.offer(E(x, y, v.m(x, y, z)), {x, y, z});
      }
    }
    auto d1 = to_defect(X, ends);
    auto d2 = to_defect(X, member);
    report.checks.push_back({"endpoints", C + C, Dist(0), C + C, d1.value, d1.witness});
    report.checks.push_back({"median-membership", C, Dist(0), C + cert.rho(C), d2.value, d2.witness});
  }

  std::vector<std::int64_t> dmin(n);
  for (const auto& L : sorted_unique(grid.L)) {
    const auto lraw = X.raw_floor(L);
    const auto radii = sorted_unique(grid.r);
    std::vector<RawExtremum<3>> worst(radii.size());
    std::vector<std::int64_t> rraw;
    for (const auto& r : radii) rraw.push_back(X.raw_floor(r));
    for (Point x = 0; x < n; ++x) {
      for (Point y = 0; y < n; ++y) {
        std::fill(dmin.begin(), dmin.end(), kInfRaw);
        for (Point z = 0; z < n; ++z) {
          if (E(x, y, z) > lraw) continue;
          for (Point w = 0; w < n; ++w) dmin[w] = std::min(dmin[w], v.d(w, z));
        }
        for (Point w = 0; w < n; ++w) {
          for (std::size_t k = 0; k < radii.size(); ++k) {
            if (dmin[w] <= rraw[k]) worst[k].offer(E(x, y, w), {x, y, w});
          }
        }
      }
    }
    for (std::size_t k = 0; k < radii.size(); ++k) {
      auto d = to_defect(X, worst[k]);
      report.checks.push_back({"neighbourhood", L, radii[k], L + radii[k] + cert.rho(radii[k]), d.value, d.witness});
    }

    auto nested = parallel_max<4>(n, [&](std::size_t begin, std::size_t end, RawExtremum<4>& local) {
      for (Point x = static_cast<Point>(begin); x < end; ++x) {
        for (Point y = 0; y < n; ++y) {
          for (Point z = 0; z < n; ++z) {
            if (E(x, y, z) > lraw) continue;
            for (Point w = 0; w < n; ++w) {
              if (E(x, z, w) <= lraw) local.offer(E(x, y, w), {x, y, z, w});
            }
          }
        }
      }
    });
    auto d = to_defect(X, nested);
    report.checks.push_back({"nested", L, Dist(0), nested_interval_constant(L, C, cert.rho), d.value, d.witness});
  }
  return report;
}

Defect five_point_defect(const TernaryOp& mu, const EnumerationBudget& budget) {
  const View v(mu);
  const std::size_t n = v.n;
  const long double work = std::pow(static_cast<long double>(n), 5);
  const bool sample = n > 30 && (budget.subsample_seed || work > static_cast<long double>(budget.five_point));
  if (!sample) {
    auto best = parallel_max<5>(n, [&](std::size_t begin, std::size_t end, RawExtremum<5>& local) {
      for (Point a = static_cast<Point>(begin); a < end; ++a) {
        for (Point b = 0; b < n; ++b) {
          for (Point x = 0; x < n; ++x) {
            const Point ax = v.m(a, b, x);
            for (Point y = 0; y < n; ++y) {
              const Point ay = v.m(a, b, y);
              if (v.T && v.D) {
                const Point* ab = v.T + (static_cast<std::size_t>(a) * n + b) * n;
                const Point* xy = v.T + (static_cast<std::size_t>(x) * n + y) * n;
                const Point* axy = v.T + (static_cast<std::size_t>(ax) * n + ay) * n;
                for (Point z = 0; z < n; ++z) {
                  const std::int64_t d = v.D[static_cast<std::size_t>(ab[xy[z]]) * n + axy[z]];
                  if (d > local.value) local.offer(d, {a, b, x, y, z});
                }
                continue;
              }
              for (Point z = 0; z < n; ++z) {
                const auto lhs = v.m(a, b, v.m(x, y, z));
                const auto rhs = v.m(ax, ay, z);
                local.offer(v.d(lhs, rhs), {a, b, x, y, z});
              }
            }
          }
        }
      }
    });
    auto d = to_defect(v.X, best);
    d.vacuous = false;
    return d;
  }
  std::mt19937_64 rng(budget.subsample_seed.value_or(0));
  RawExtremum<5> best;
  for (std::uint64_t s = 0; s < budget.subsample_count; ++s) {
    Point t[5];
    for (auto& c : t) c = static_cast<Point>(rng() % n);
    const auto lhs = v.m(t[0], t[1], v.m(t[2], t[3], t[4]));
    const auto rhs = v.m(v.m(t[0], t[1], t[2]), v.m(t[0], t[1], t[3]), t[4]);
    best.offer(v.d(lhs, rhs), {t[0], t[1], t[2], t[3], t[4]});
  }
  auto d = to_defect(v.X, best);
  d.exhaustive = false;
  d.vacuous = false;
  return d;
}

Defect tripod_defect(const TernaryOp& mu, const Dist& L) {
  const View v(mu);
  const std::size_t n = v.n;
  const auto lraw = v.X.raw_floor(L);
  const auto e = interval_excess_table(v);
  std::vector<char> in(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) in[i] = e[i] <= lraw;
  auto member = [&](Point x, Point y) { return in.data() + (static_cast<std::size_t>(x) * n + y) * n; };
  auto best = parallel_max<4>(n, [&](std::size_t begin, std::size_t end, RawExtremum<4>& local) {
    for (Point x = static_cast<Point>(begin); x < end; ++x) {
      for (Point y = 0; y < n; ++y) {
        const char* ixy = member(x, y);
        for (Point z = 0; z < n; ++z) {
          const char* iyz = member(y, z);
          const char* izx = member(z, x);
          const Point m = v.m(x, y, z);
          for (Point o = 0; o < n; ++o) {
            if (ixy[o] && iyz[o] && izx[o]) local.offer(v.d(o, m), {x, y, z, o});
          }
        }
      }
    }
  });
  return to_defect(v.X, best);
}

}  // namespace coarsemed
