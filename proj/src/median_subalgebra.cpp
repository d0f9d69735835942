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
#include <unordered_map>

#include "coarsemed/errors.hpp"
#include "coarsemed/median.hpp"
#include "coarsemed/parallel.hpp"

namespace coarsemed {

Defect subalgebra_defect(const TernaryOp& mu, const Subset& U) {
  const auto& X = *mu.space();
  if (U.empty()) throw InputError("subalgebra_defect: empty subset");
  const std::size_t k = U.size();
  auto best = parallel_max<3>(k, [&](std::size_t begin, std::size_t end, RawExtremum<3>& local) {
    std::unordered_map<Point, std::int64_t> gap;
    for (std::size_t a = begin; a < end; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        for (std::size_t c = 0; c < k; ++c) {
          const Point m = mu(U[a], U[b], U[c]);
          auto it = gap.find(m);
          if (it == gap.end()) {
            std::int64_t g = kInfRaw;
            for (const auto u : U) {
              g = std::min(g, X.raw(m, u));
              if (g == 0) break;
            }
            it = gap.emplace(m, g).first;
          }
          local.offer(it->second, {U[a], U[b], U[c]});
        }
      }
    }
  });
  return {X.to_dist(best.value), std::vector<Point>(best.witness, best.witness + 3)};
}

InducedMedian induce_median(const TernaryOp& mu, const Subset& U, std::string name) {
  const auto& X = *mu.space();
  if (U.empty()) throw InputError("induce_median: empty subset");
  for (const auto u : U) {
    if (u >= X.size()) throw InputError("induce_median: subset point out of range");
  }
  const std::size_t k = U.size();
  if (k > 0 && k * k * k > TernaryOp::kMaxTabulated) throw BudgetExceeded("induce_median: subset too large");
  if (name.empty()) name = X.name() + "|U";

  std::vector<Point> image(k * k * k);
  parallel_chunks(k, [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t a = begin; a < end; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        for (std::size_t c = 0; c < k; ++c) image[(a * k + b) * k + c] = mu(U[a], U[b], U[c]);
      }
    }
  });

  std::vector<Point> distinct = image;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<Point> nearest(distinct.size());
  std::vector<std::int64_t> gap(distinct.size());
  parallel_chunks(distinct.size(), [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t i = begin; i < end; ++i) {
      std::int64_t best = kInfRaw;
      Point arg = 0;
      for (Point j = 0; j < k; ++j) {
        const auto d = X.raw(distinct[i], U[j]);
        if (d < best) {
          best = d;
          arg = j;
          if (d == 0) break;
        }
      }
      nearest[i] = arg;
      gap[i] = best;
    }
  });

  std::vector<Point> table(image.size());
  RawExtremum<3> worst;
  for (std::size_t t = 0; t < image.size(); ++t) {
    const auto i = static_cast<std::size_t>(std::lower_bound(distinct.begin(), distinct.end(), image[t]) - distinct.begin());
    table[t] = nearest[i];
    const Point a = static_cast<Point>(t / (k * k));
    const Point b = static_cast<Point>((t / k) % k);
    const Point c = static_cast<Point>(t % k);
    worst.offer(gap[i], {U[a], U[b], U[c]});
  }

  auto space = FiniteMetricSpace::restrict(X, U, name);
  TernaryOp op(space, "induced", std::move(table));
  InducedMedian out{U, std::move(space), std::move(op), X.to_dist(worst.value), {}};
  out.witness.assign(worst.witness, worst.witness + 3);
  return out;
}

TransferredMedian transfer_median(const ControlledMap& f, const ControlledMap& g, const TernaryOp& mu,
                                  const EnumerationBudget& budget) {
  if (!same_points(*f.codomain(), *mu.space())) throw InputError("transfer_median: f does not land in the median's space");
  if (!same_points(*g.domain(), *f.codomain()) || !same_points(*g.codomain(), *f.domain())) {
    throw InputError("transfer_median: g is not a candidate inverse of f");
  }
  const auto& W = f.domain();
  const std::size_t n = W->size();
  std::vector<Point> table(n * n * n);
  parallel_chunks(n, [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t a = begin; a < end; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        for (std::size_t c = 0; c < n; ++c) {
          table[(a * n + b) * n + c] = g(mu(f(static_cast<Point>(a)), f(static_cast<Point>(b)), f(static_cast<Point>(c))));
        }
      }
    }
  });
  TernaryOp nu(W, "transferred", std::move(table));
  auto cert = median_certificate(nu, budget);
  auto eq = certify_coarse_equivalence(f, g);
  if (!eq.finite()) throw InputError("transfer_median: g is not a coarse inverse of f (infinite closeness)");
  auto cmp = cmp_defect(f, nu, mu);
  return {std::move(nu), std::move(cert), eq, std::move(cmp)};
}

Dist adjacent_triple_step(const TernaryOp& op, const FiniteMetricSpace& domain, const FiniteMetricSpace& target) {
  const std::size_t n = domain.size();
  if (target.size() != n || op.space()->size() != n) throw InputError("adjacent_triple_step: point count mismatch");
  if (n == 0) return Dist(0);
  const std::int64_t one = domain.scale();
  std::vector<std::vector<Point>> nbr(n);
  for (Point p = 0; p < n; ++p) {
    for (Point q = 0; q < n; ++q) {
      if (domain.raw(p, q) <= one) nbr[p].push_back(q);
    }
  }
  std::vector<std::int64_t> dense;
  const std::int64_t* D = target.dense_data();
  if (!D) {
    dense.resize(n * n);
    for (Point p = 0; p < n; ++p) {
      for (Point q = 0; q < n; ++q) dense[static_cast<std::size_t>(p) * n + q] = target.raw(p, q);
    }
    D = dense.data();
  }
  std::vector<Point> owned;
  const Point* T = op.tabulated() ? op.table().data() : nullptr;
  if (!T) {
    owned.resize(n * n * n);
    for (Point a = 0; a < n; ++a) {
      for (Point b = 0; b < n; ++b) {
        for (Point c = 0; c < n; ++c) owned[(static_cast<std::size_t>(a) * n + b) * n + c] = op(a, b, c);
      }
    }
    T = owned.data();
  }
  auto best = parallel_max<1>(n, [&](std::size_t begin, std::size_t end, RawExtremum<1>& local) {
    std::int64_t worst = 0;
    for (Point a = static_cast<Point>(begin); a < end; ++a) {
      for (Point b = 0; b < n; ++b) {
        const Point* row = T + (static_cast<std::size_t>(a) * n + b) * n;
        for (const auto a2 : nbr[a]) {
          for (const auto b2 : nbr[b]) {
            const Point* row2 = T + (static_cast<std::size_t>(a2) * n + b2) * n;
            for (Point c = 0; c < n; ++c) {
              const std::int64_t* dm = D + static_cast<std::size_t>(row[c]) * n;
              for (const auto c2 : nbr[c]) worst = std::max(worst, dm[row2[c2]]);
            }
          }
        }
      }
    }
    local.offer(worst, {0});
  });
  return target.to_dist(std::max<std::int64_t>(best.value, 0));
}

RipsMedian rips_median(const TernaryOp& mu, const MedianCertificate& cert, const Dist& sigma,
                       const EnumerationBudget& budget) {
  if (sigma == Dist(0) && mu.space()->size() > 1) throw InputError("rips_median: sigma = 0 gives a discrete Rips graph");
  auto rips = rips_graph(mu.space(), sigma);
  auto psi = mu.with_space(rips.metric, "rips");
  auto psi_cert = median_certificate(psi, budget);
  const Dist target_scale = cert.rho(sigma);
  const auto target = rips_graph(mu.space(), target_scale);
  const Dist step = adjacent_triple_step(psi, *rips.metric, *target.metric);
  if (step > Dist(1)) throw AssertionFailure("rips_lipschitz", "adjacent triples move " + step.to_string() + " in the target Rips graph");
  return {std::move(rips), std::move(psi), std::move(psi_cert), target_scale, step};
}

}  // namespace coarsemed
