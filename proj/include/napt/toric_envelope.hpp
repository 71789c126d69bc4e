#pragma once

// Psh envelopes on the toric side: the largest convex function with slopes in
// P lying below a piecewise-affine obstacle given as a max/min tree. Computed
// exactly as the double Legendre transform over the obstacle's vertices.

#include <algorithm>
#include <memory>
#include <stdexcept>
#include <vector>

#include "napt/toric.hpp"
#include "napt/toric_solver.hpp"

namespace napt {

/// Piecewise-affine function on R^n as a tree of max/min over affine leaves.
struct PLExpr {
  enum class Op { affine, max, min };

  Op op = Op::affine;
  TPoint slope;
  Rational constant;
  std::vector<PLExpr> children;

  static PLExpr affine(TPoint slope, Rational constant) { return {Op::affine, std::move(slope), std::move(constant), {}}; }
  static PLExpr max_of(std::vector<PLExpr> children) { return {Op::max, {}, {}, std::move(children)}; }
  static PLExpr min_of(std::vector<PLExpr> children) { return {Op::min, {}, {}, std::move(children)}; }

  static PLExpr from_metric(const TropicalMetric& u) {
    std::vector<PLExpr> leaves;
    for (const auto& p : u.pieces()) leaves.push_back(affine(p.slope, p.constant));
    return max_of(std::move(leaves));
  }

  Rational eval(const TPoint& w) const { return eval_impl(w, true); }

  /// Recession function d -> lim psi(t d) / t: the tree with constants dropped.
  Rational recession(const TPoint& d) const { return eval_impl(d, false); }

  PLExpr shifted(const Rational& c) const {
    PLExpr out = *this;
    out.shift_in_place(c);
    return out;
  }

  void collect_leaves(std::vector<const PLExpr*>& out) const {
    if (op == Op::affine) {
      out.push_back(this);
      return;
    }
    for (const auto& c : children) c.collect_leaves(out);
  }

  std::size_t dimension() const {
    if (op == Op::affine) return slope.size();
    if (children.empty()) throw std::domain_error("empty max/min node");
    return children.front().dimension();
  }

 private:
  Rational eval_impl(const TPoint& w, bool with_constant) const {
    if (op == Op::affine) return with_constant ? tdot(slope, w) + constant : tdot(slope, w);
    if (children.empty()) throw std::domain_error("empty max/min node");
    Rational best = children.front().eval_impl(w, with_constant);
    for (const auto& c : children) {
      Rational v = c.eval_impl(w, with_constant);
      best = op == Op::max ? max(best, v) : min(best, v);
    }
    return best;
  }

  void shift_in_place(const Rational& c) {
    if (op == Op::affine) {
      constant += c;
      return;
    }
    for (auto& ch : children) ch.shift_in_place(c);
  }
};

namespace detail {

// A line a.w = b in the plane, stored with a normalized representative.
struct Line {
  geom::Point2 normal;
  Rational offset;
  friend bool operator==(const Line&, const Line&) = default;
  friend auto operator<=>(const Line&, const Line&) = default;
};

inline std::optional<Line> crease(const PLExpr& a, const PLExpr& b) {
  geom::Point2 nrm{a.slope[0] - b.slope[0], a.slope[1] - b.slope[1]};
  Rational off = b.constant - a.constant;
  if (nrm.x.is_zero() && nrm.y.is_zero()) return std::nullopt;
  Rational scale = nrm.x.is_zero() ? nrm.y : nrm.x;
  return Line{Rational(1) / scale * nrm, off / scale};
}

// psi - h_P is bounded iff the recession function of psi equals h_P. Both are
// linear between consecutive critical rays, so comparing on those rays and on
// their bisectors decides equality.
inline void require_bounded(const PLExpr& psi, const LatticePolytope& poly) {
  const std::size_t n = poly.dimension();
  std::vector<TPoint> rays;
  if (n == 1) {
    rays = {{Rational(1)}, {Rational(-1)}};
  } else {
    std::vector<const PLExpr*> leaves;
    psi.collect_leaves(leaves);
    std::vector<TPoint> slopes = poly.vertices();
    for (const auto* l : leaves) slopes.push_back(l->slope);
    std::vector<geom::Point2> dirs{{Rational(1), Rational(0)}, {Rational(0), Rational(1)},
                                   {Rational(-1), Rational(0)}, {Rational(0), Rational(-1)}};
    for (std::size_t i = 0; i < slopes.size(); ++i)
      for (std::size_t j = i + 1; j < slopes.size(); ++j) {
        geom::Point2 d{slopes[j][1] - slopes[i][1], slopes[i][0] - slopes[j][0]};
        if (d.x.is_zero() && d.y.is_zero()) continue;
        dirs.push_back(d);
        dirs.push_back(Rational(-1) * d);
      }
    auto upper = [](const geom::Point2& d) { return d.y.sign() > 0 || (d.y.is_zero() && d.x.sign() > 0); };
    std::sort(dirs.begin(), dirs.end(), [&](const geom::Point2& a, const geom::Point2& b) {
      if (upper(a) != upper(b)) return upper(a);
      return geom::cross(a, b).sign() > 0;
    });
    for (std::size_t i = 0; i < dirs.size(); ++i) {
      rays.push_back(from_point2(dirs[i]));
      rays.push_back(from_point2(dirs[i] + dirs[(i + 1) % dirs.size()]));
    }
  }
  for (const auto& d : rays) {
    bool zero = std::all_of(d.begin(), d.end(), [](const Rational& x) { return x.is_zero(); });
    if (zero) continue;
    if (psi.recession(d) != poly.support(d))
      throw std::domain_error("obstacle minus the support function of P is unbounded");
  }
}

}  // namespace detail

/// Largest convex function with slopes in P that lies below psi.
inline TropicalMetric t_envelope(const PLExpr& psi, std::shared_ptr<const LatticePolytope> poly) {
  const std::size_t n = poly->dimension();
  if (psi.dimension() != n) throw std::domain_error("obstacle dimension does not match P");
  detail::require_bounded(psi, *poly);
  std::vector<const PLExpr*> leaves;
  psi.collect_leaves(leaves);

  if (n == 1) {
    // psi is affine between consecutive leaf crossings.
    std::vector<Rational> b;
    for (std::size_t i = 0; i < leaves.size(); ++i)
      for (std::size_t j = i + 1; j < leaves.size(); ++j) {
        Rational ds = leaves[j]->slope[0] - leaves[i]->slope[0];
        if (!ds.is_zero()) b.push_back((leaves[i]->constant - leaves[j]->constant) / ds);
      }
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    if (b.empty()) throw std::domain_error("obstacle minus the support function of P is unbounded");
    std::vector<Rational> vals;
    for (const auto& x : b) vals.push_back(psi.eval({x}));
    const Rational p0 = poly->vertices()[0][0], p1 = poly->vertices()[1][0];
    std::vector<Rational> alphas{p0, p1};
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t j = i + 1; j < b.size(); ++j) {
        Rational s = (vals[j] - vals[i]) / (b[j] - b[i]);
        if (p0 < s && s < p1) alphas.push_back(s);
      }
    std::vector<Piece> pieces;
    for (const auto& a : alphas) {
      Rational conj = a * b[0] - vals[0];
      for (std::size_t j = 0; j < b.size(); ++j) conj = max(conj, a * b[j] - vals[j]);
      pieces.push_back({{a}, -conj});
    }
    return TropicalMetric(poly, std::move(pieces)).simplified();
  }

  // n = 2: candidate vertices are the intersections of crease lines.
  std::vector<detail::Line> lines;
  for (std::size_t i = 0; i < leaves.size(); ++i)
    for (std::size_t j = i + 1; j < leaves.size(); ++j)
      if (auto l = detail::crease(*leaves[i], *leaves[j])) lines.push_back(*l);
  std::sort(lines.begin(), lines.end());
  lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
  std::vector<geom::Point2> verts;
  for (std::size_t i = 0; i < lines.size(); ++i)
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      Rational det = geom::cross(lines[i].normal, lines[j].normal);
      if (det.is_zero()) continue;
      verts.push_back({(lines[i].offset * lines[j].normal.y - lines[i].normal.y * lines[j].offset) / det,
                       (lines[i].normal.x * lines[j].offset - lines[i].offset * lines[j].normal.x) / det});
    }
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  if (verts.empty()) throw std::domain_error("obstacle minus the support function of P is unbounded");
  // Keep only true vertices of the linearity subdivision of psi: at least
  // three active leaves with distinct slopes. With two, psi is affine on each
  // side of a single line through the point.
  std::vector<geom::Point2> kept;
  std::vector<Rational> vals;
  for (const auto& v : verts) {
    const TPoint w = from_point2(v);
    const Rational value = psi.eval(w);
    std::vector<TPoint> active;
    for (const auto* l : leaves)
      if (tdot(l->slope, w) + l->constant == value && std::find(active.begin(), active.end(), l->slope) == active.end())
        active.push_back(l->slope);
    if (active.size() < 3) continue;
    kept.push_back(v);
    vals.push_back(value);
  }
  if (kept.empty()) throw std::domain_error("obstacle minus the support function of P is unbounded");
  verts = std::move(kept);
  // The conjugate on P is max_j(<a, v_j> - psi(v_j)); its cells are Laguerre cells.
  auto cells = detail::laguerre_cells(poly->polygon(), verts, vals);
  std::vector<Piece> pieces;
  // Degenerate cells are left partly unclipped; the full-dimensional ones
  // already cover P and carry every vertex of the subdivision.
  for (std::size_t i = 0; i < cells.size(); ++i)
    if (cells[i].area.sign() > 0)
      for (const auto& a : cells[i].cell) pieces.push_back({from_point2(a), vals[i] - geom::dot(a, verts[i])});
  return TropicalMetric(poly, std::move(pieces)).simplified();
}

/// Integral of (psi - P(psi)) against t_ma(P(psi)); zero for the exact envelope.
inline Rational t_orthogonality_defect(const PLExpr& psi, std::shared_ptr<const LatticePolytope> poly) {
  TropicalMetric env = t_envelope(psi, poly);
  return t_ma(env).integrate([&](const TPoint& w) { return psi.eval(w) - env.eval(w); });
}

}  // namespace napt
