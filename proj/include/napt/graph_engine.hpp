#pragma once

// Monge-Ampère calculus on metric graphs: Laplacians, MA measures, the psh
// test, the exact Calabi-Yau solver and grid envelopes.

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "napt/exact_linalg.hpp"
#include "napt/graph.hpp"
#include "napt/measure.hpp"
#include "napt/pl_metric.hpp"

namespace napt {

/// Thrown when a metric that must be psh is not; carries the offending points.
class NotPshError : public std::domain_error {
 public:
  explicit NotPshError(std::vector<GraphPoint> points)
      : std::domain_error("metric is not psh (negative curvature at " + std::to_string(points.size()) +
                          " point(s))"),
        points_(std::move(points)) {}
  const std::vector<GraphPoint>& points() const { return points_; }

 private:
  std::vector<GraphPoint> points_;
};

/// Sum of outgoing slopes at every vertex and breakpoint. Convex kinks carry
/// positive mass; the total mass is exactly zero.
inline GraphMeasure laplacian(const PLMetric& u) {
  const MetricGraph& g = u.host();
  GraphMeasure out;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    auto p = u.profile(e);
    const std::size_t last = p.size() - 1;
    out.add_atom(GraphPoint::at_vertex(ed.tail), (p[1].value - p[0].value) / (p[1].offset - p[0].offset));
    out.add_atom(GraphPoint::at_vertex(ed.head),
                 (p[last - 1].value - p[last].value) / (p[last].offset - p[last - 1].offset));
    for (std::size_t i = 1; i < last; ++i) {
      Rational right = (p[i + 1].value - p[i].value) / (p[i + 1].offset - p[i].offset);
      Rational left = (p[i].value - p[i - 1].value) / (p[i].offset - p[i - 1].offset);
      out.add_atom(GraphPoint::in_edge(e, p[i].offset), right - left);
    }
  }
  return out;
}

/// (reference + laplacian(u)) / V without the positivity check.
inline GraphMeasure ma_signed(const PLMetric& u) {
  const MetricGraph& g = u.host();
  return (g.reference_measure() + laplacian(u)).scaled(Rational(1) / g.degree());
}

struct PshReport {
  bool psh = true;
  std::vector<GraphPoint> violations;
};

inline PshReport is_psh(const PLMetric& u) {
  PshReport r;
  const GraphMeasure curvature = u.host().reference_measure() + laplacian(u);
  for (const auto& [p, m] : curvature.atoms())
    if (m.sign() < 0) r.violations.push_back(p);
  r.psh = r.violations.empty();
  return r;
}

/// Monge-Ampère probability measure of a psh metric.
inline GraphMeasure ma(const PLMetric& u) {
  auto report = is_psh(u);
  if (!report.psh) throw NotPshError(std::move(report.violations));
  return ma_signed(u);
}

struct FSBranch {
  PLMetric metric;
  Rational constant;
};

/// max over branches of (metric + constant); every branch psh.
struct FSExpression {
  std::vector<FSBranch> branches;
};

inline PLMetric fs_max(const FSExpression& e) {
  if (e.branches.empty()) throw std::invalid_argument("FS expression needs at least one branch");
  std::vector<PLMetric> shifted;
  for (const auto& b : e.branches) {
    if (!is_psh(b.metric).psh) throw std::domain_error("FS branch is not psh");
    shifted.push_back(b.metric.shifted(b.constant));
  }
  return pointwise_max(shifted);
}

namespace detail {

// Weighted graph Laplacian (sum over edges of (u(w) - u(v)) / length).
inline linalg::Matrix laplacian_matrix(const MetricGraph& g) {
  const std::size_t n = g.vertex_count();
  linalg::Matrix lap(n, linalg::Vector(n));
  for (const auto& ed : g.edges()) {
    if (ed.tail == ed.head) continue;
    Rational w = Rational(1) / ed.length;
    lap[ed.tail][ed.tail] -= w;
    lap[ed.head][ed.head] -= w;
    lap[ed.tail][ed.head] += w;
    lap[ed.head][ed.tail] += w;
  }
  return lap;
}

}  // namespace detail

/// Solves ma(u) = mu exactly; the result is normalized by sup u = 0.
inline PLMetric solve(const GraphMeasure& mu, std::shared_ptr<const MetricGraph> g) {
  require_valid(*g);
  if (!mu.is_positive()) throw std::domain_error("measure has negative masses");
  if (mu.total_mass() != Rational(1)) throw std::domain_error("measure is not a probability measure");
  std::vector<GraphPoint> atoms;
  for (const auto& [p, m] : mu.atoms()) {
    if (!g->contains(p)) throw std::domain_error("measure atom is not on the graph");
    atoms.push_back(p);
  }
  Subdivision s = subdivide(g, atoms);
  const MetricGraph& t = *s.target;
  GraphMeasure lifted = lift_measure(mu, s);
  const std::size_t n = t.vertex_count();
  std::vector<Rational> values(n);
  if (n > 1) {
    auto lap = detail::laplacian_matrix(t);
    linalg::Matrix a(n - 1, linalg::Vector(n - 1));
    linalg::Vector b(n - 1);
    for (std::size_t i = 1; i < n; ++i) {
      for (std::size_t j = 1; j < n; ++j) a[i - 1][j - 1] = lap[i][j];
      b[i - 1] = t.degree() * lifted.mass_at(GraphPoint::at_vertex(i)) - t.reference_mass(i);
    }
    auto x = linalg::solve(std::move(a), std::move(b));
    for (std::size_t i = 1; i < n; ++i) values[i] = x[i - 1];
  }
  PLMetric on_target(s.target, std::move(values));
  on_target = on_target.shifted(-on_target.sup());
  return descend_metric(on_target, s);
}

/// Refinement of u's host with every edge cut into k equal cells and every
/// breakpoint of u inserted.
inline Subdivision uniform_grid(const PLMetric& u, unsigned k) {
  if (k == 0) throw std::invalid_argument("grid resolution must be positive");
  const MetricGraph& g = u.host();
  std::vector<GraphPoint> points = u.breakpoint_points();
  for (std::size_t e = 0; e < g.edge_count(); ++e)
    for (unsigned i = 1; i < k; ++i) points.push_back(GraphPoint::in_edge(e, g.edge(e).length * Rational(i, k)));
  return subdivide(u.host_ptr(), points);
}

/// Largest grid-PL psh function below psi at the grid vertices, as a metric on
/// grid.target. Exact LP: maximize the sum of grid values.
inline PLMetric envelope_on_grid(const PLMetric& psi, const Subdivision& grid) {
  if (psi.host_ptr() != grid.source) throw std::domain_error("grid does not refine the metric's graph");
  for (const auto& p : psi.breakpoint_points())
    if (!grid.lift(p).is_vertex()) throw std::domain_error("grid does not contain every breakpoint of the obstacle");
  const MetricGraph& t = *grid.target;
  const std::size_t n = t.vertex_count();
  std::vector<Rational> obstacle(n);
  for (std::size_t v = 0; v < n; ++v) obstacle[v] = psi.eval(grid.vertex_image[v]);
  Rational floor_value = obstacle[0];
  for (const auto& o : obstacle) floor_value = min(floor_value, o);

  // Variables y = u - floor_value >= 0.
  linalg::Matrix a;
  linalg::Vector b;
  for (std::size_t v = 0; v < n; ++v) {
    linalg::Vector row(n);
    row[v] = Rational(1);
    a.push_back(std::move(row));
    b.push_back(obstacle[v] - floor_value);
  }
  auto lap = detail::laplacian_matrix(t);
  for (std::size_t v = 0; v < n; ++v) {
    linalg::Vector row(n);
    for (std::size_t w = 0; w < n; ++w) row[w] = -lap[v][w];
    a.push_back(std::move(row));
    b.push_back(t.reference_mass(v));
  }
  linalg::Vector c(n, Rational(1));
  auto res = linalg::maximize(a, b, c);
  std::vector<Rational> values(n);
  for (std::size_t v = 0; v < n; ++v) values[v] = res.x[v] + floor_value;
  return PLMetric(grid.target, std::move(values));
}

/// Psh envelope of psi within the grid-PL class, as a metric on psi's graph.
inline PLMetric envelope(const PLMetric& psi, const Subdivision& grid) {
  return descend_metric(envelope_on_grid(psi, grid), grid);
}

/// Integral of (psi - P(psi)) against MA(P(psi)) on the grid; zero exactly.
inline Rational orthogonality_defect(const PLMetric& psi, const Subdivision& grid) {
  PLMetric env = envelope_on_grid(psi, grid);
  PLMetric obstacle = lift_metric(psi, grid);
  return ma(env).integrate([&](const GraphPoint& p) { return obstacle.eval(p) - env.eval(p); });
}

/// Constant D with sup u - integral of u against MA(0) <= D for all psh u.
/// Exact LP over vertex values (psh functions peak at vertices).
inline Rational reference_defect(const MetricGraph& g) {
  require_valid(g);
  const std::size_t n = g.vertex_count();
  auto lap = detail::laplacian_matrix(g);
  Rational best(0);
  for (std::size_t top = 0; top < n; ++top) {
    // u = -y with y >= 0 and y[top] = 0; variables are y over the other vertices.
    std::vector<std::size_t> idx;
    for (std::size_t v = 0; v < n; ++v)
      if (v != top) idx.push_back(v);
    linalg::Matrix a;
    linalg::Vector b;
    for (std::size_t v = 0; v < n; ++v) {
      linalg::Vector row(idx.size());
      for (std::size_t k = 0; k < idx.size(); ++k) row[k] = lap[v][idx[k]];
      a.push_back(std::move(row));
      b.push_back(g.reference_mass(v));
    }
    linalg::Vector c(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) c[k] = g.reference_mass(idx[k]) / g.degree();
    auto res = linalg::maximize(a, b, c);
    if (!res.bounded) throw std::logic_error("reference defect LP is unbounded");
    best = max(best, res.objective);
  }
  return best;
}

/// Slopes of psh metrics are bounded by V, so |u(x) - u(y)| <= V d(x, y).
inline Rational izumi_bound(const MetricGraph& g, const GraphPoint& x, const GraphPoint& y) {
  return g.degree() * g.distance(x, y);
}

}  // namespace napt
