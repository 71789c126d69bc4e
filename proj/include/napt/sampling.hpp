#pragma once

// Seeded generators for psh metrics and atomic probability measures. Psh
// samples are FS-type maxima of at most five branches with coefficients in
// {-3..3}/{1,2,3}, so they are psh by construction.

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "napt/engines.hpp"

namespace napt {

using Rng = std::mt19937_64;

inline std::size_t uniform_index(Rng& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

/// p / q with p in [lo, hi] and q in {1, 2, 3}.
inline Rational small_rational(Rng& rng, long lo = -3, long hi = 3) {
  long p = lo + static_cast<long>(uniform_index(rng, static_cast<std::size_t>(hi - lo + 1)));
  long q = 1 + static_cast<long>(uniform_index(rng, 3));
  return Rational(p, q);
}

/// Masses proportional to weights drawn from {1, 2, 3}.
inline std::vector<Rational> random_weights(Rng& rng, std::size_t k) {
  std::vector<long> w(k);
  long total = 0;
  for (auto& x : w) total += (x = 1 + static_cast<long>(uniform_index(rng, 3)));
  std::vector<Rational> out;
  for (auto x : w) out.emplace_back(x, total);
  return out;
}

inline GraphPoint random_graph_point(const MetricGraph& g, Rng& rng) {
  if (uniform_index(rng, 2) == 0) return GraphPoint::at_vertex(uniform_index(rng, g.vertex_count()));
  std::size_t e = uniform_index(rng, g.edge_count());
  long k = 1 + static_cast<long>(uniform_index(rng, 3));
  return g.point(e, g.edge(e).length * Rational(k, 4));
}

inline GraphMeasure random_graph_measure(const MetricGraph& g, Rng& rng, std::size_t max_atoms = 3) {
  const std::size_t k = 1 + uniform_index(rng, max_atoms);
  auto w = random_weights(rng, k);
  GraphMeasure mu;
  for (std::size_t i = 0; i < k; ++i) mu.add_atom(random_graph_point(g, rng), w[i]);
  return mu;
}

/// max over branches of (solution of a random measure + constant).
inline PLMetric random_psh(const GraphEngine& eng, Rng& rng) {
  const std::size_t k = 1 + uniform_index(rng, 5);
  std::vector<PLMetric> branches;
  for (std::size_t i = 0; i < k; ++i)
    branches.push_back(eng.solve(random_graph_measure(*eng.graph(), rng)).shifted(small_rational(rng)));
  return pointwise_max(branches);
}

/// Slope sum_v c_v v / sum_v c_v with weights c_v in {0..3}, not all zero.
inline TPoint random_slope(const LatticePolytope& p, Rng& rng) {
  const auto& vs = p.vertices();
  std::vector<long> w(vs.size());
  long total = 0;
  while (total == 0) {
    total = 0;
    for (auto& x : w) total += (x = static_cast<long>(uniform_index(rng, 4)));
  }
  TPoint a(p.dimension());
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t k = 0; k < a.size(); ++k) a[k] += Rational(w[i], total) * vs[i][k];
  return a;
}

/// Vertex pieces plus at most five interior branches.
inline TropicalMetric random_psh(const ToricEngine& eng, Rng& rng) {
  const auto& p = *eng.polytope();
  std::vector<Piece> pieces;
  for (const auto& v : p.vertices()) pieces.push_back({v, small_rational(rng)});
  const std::size_t k = uniform_index(rng, 6);
  for (std::size_t i = 0; i < k; ++i) pieces.push_back({random_slope(p, rng), small_rational(rng)});
  return TropicalMetric(eng.polytope(), std::move(pieces)).simplified();
}

inline ToricMeasure random_toric_measure(std::size_t n, Rng& rng, std::size_t max_atoms = 8) {
  const std::size_t k = 1 + uniform_index(rng, max_atoms);
  auto w = random_weights(rng, k);
  ToricMeasure mu;
  for (std::size_t i = 0; i < k; ++i) {
    TPoint x;
    for (std::size_t c = 0; c < n; ++c) x.push_back(small_rational(rng));
    mu.add_atom(x, w[i]);
  }
  return mu;
}

inline AlgebraMeasure random_algebra_measure(const RestrictionAlgebra& alg, Rng& rng) {
  const std::size_t k = 1 + uniform_index(rng, 3);
  auto w = random_weights(rng, k);
  AlgebraMeasure mu;
  for (std::size_t i = 0; i < k; ++i) mu.add_atom(uniform_index(rng, alg.size()), w[i]);
  return mu;
}

/// Solutions of random measures (psh at n = 1), shifted by a constant.
inline ModelMetric random_psh(const AlgebraEngine& eng, Rng& rng) {
  ModelMetric m = eng.solve(random_algebra_measure(eng.algebra(), rng));
  m.c += small_rational(rng);
  return m;
}

}  // namespace napt
