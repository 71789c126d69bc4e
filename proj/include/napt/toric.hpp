#pragma once

// Tropical (toric) metrics: convex max-plus functions on R^n with slopes in a
// lattice polytope P, their subdifferential cells and Monge-Ampère measures.
// The trivial metric is the support function h_P.

#include <algorithm>
#include <memory>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "napt/geometry2d.hpp"
#include "napt/measure.hpp"
#include "napt/rational.hpp"

namespace napt {

using TPoint = std::vector<Rational>;
using ToricMeasure = AtomicMeasure<TPoint>;

inline Rational tdot(const TPoint& a, const TPoint& b) {
  Rational s;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline std::string point_label(const TPoint& w) {
  std::string s = "(";
  for (std::size_t i = 0; i < w.size(); ++i) s += (i ? "," : "") + w[i].str();
  return s + ")";
}

inline geom::Point2 to_point2(const TPoint& p) { return {p.at(0), p.at(1)}; }
inline TPoint from_point2(const geom::Point2& p) { return {p.x, p.y}; }

class LatticePolytope {
 public:
  /// Validates full dimension and convex position; stores the vertices sorted
  /// (n = 1) or counter-clockwise (n = 2).
  explicit LatticePolytope(std::vector<TPoint> vertices) {
    if (vertices.empty()) throw std::domain_error("degenerate polytope: no vertices");
    n_ = vertices.front().size();
    for (const auto& v : vertices)
      if (v.size() != n_) throw std::domain_error("degenerate polytope: mixed vertex dimensions");
    if (n_ == 1) {
      std::sort(vertices.begin(), vertices.end());
      if (vertices.size() != 2 || vertices[0] == vertices[1])
        throw std::domain_error("degenerate polytope: an interval needs two distinct endpoints");
      volume_ = vertices[1][0] - vertices[0][0];
      vertices_ = std::move(vertices);
    } else if (n_ == 2) {
      std::vector<geom::Point2> pts;
      for (const auto& v : vertices) pts.push_back(to_point2(v));
      auto hull = geom::convex_hull(pts);
      if (hull.size() < 3) throw std::domain_error("degenerate polytope: not full-dimensional");
      if (hull.size() != vertices.size()) throw std::domain_error("polytope vertices are not in convex position");
      volume_ = geom::area(hull);
      for (const auto& p : hull) vertices_.push_back(from_point2(p));
    } else {
      throw std::domain_error("polytope dimension must be 1 or 2");
    }
  }

  std::size_t dimension() const { return n_; }
  const std::vector<TPoint>& vertices() const { return vertices_; }
  /// Euclidean volume.
  const Rational& volume() const { return volume_; }
  /// V = n! vol(P).
  Rational degree() const { return n_ == 1 ? volume_ : Rational(2) * volume_; }

  geom::Polygon polygon() const {
    geom::Polygon p;
    for (const auto& v : vertices_) p.push_back(to_point2(v));
    return p;
  }

  bool contains(const TPoint& a) const {
    if (a.size() != n_) return false;
    if (n_ == 1) return vertices_[0][0] <= a[0] && a[0] <= vertices_[1][0];
    auto poly = polygon();
    auto q = to_point2(a);
    for (std::size_t i = 0; i < poly.size(); ++i)
      if (geom::cross(poly[i], poly[(i + 1) % poly.size()], q).sign() < 0) return false;
    return true;
  }

  /// h_P(w) = max over vertices of <v, w>.
  Rational support(const TPoint& w) const {
    Rational best = tdot(vertices_[0], w);
    for (const auto& v : vertices_) best = max(best, tdot(v, w));
    return best;
  }

  friend bool operator==(const LatticePolytope& a, const LatticePolytope& b) { return a.vertices_ == b.vertices_; }

 private:
  std::size_t n_ = 0;
  std::vector<TPoint> vertices_;
  Rational volume_;
};

struct Piece {
  TPoint slope;
  Rational constant;
  friend bool operator==(const Piece&, const Piece&) = default;
};

namespace detail {

// Sorted by slope; equal slopes collapse to the largest constant.
inline std::vector<Piece> dedupe_pieces(std::vector<Piece> pieces) {
  std::sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) {
    if (a.slope != b.slope) return a.slope < b.slope;
    return a.constant > b.constant;
  });
  std::vector<Piece> out;
  for (auto& p : pieces)
    if (out.empty() || out.back().slope != p.slope) out.push_back(std::move(p));
  return out;
}

inline Rational eval_pieces(const std::vector<Piece>& pieces, const TPoint& w) {
  Rational best = tdot(pieces.front().slope, w) + pieces.front().constant;
  for (const auto& p : pieces) best = max(best, tdot(p.slope, w) + p.constant);
  return best;
}

// n = 1: the pieces that appear on the upper envelope, in slope order.
inline std::vector<Piece> upper_envelope_1d(const std::vector<Piece>& sorted) {
  auto cross_at = [](const Piece& a, const Piece& b) {
    return (a.constant - b.constant) / (b.slope[0] - a.slope[0]);
  };
  std::vector<Piece> hull;
  for (const auto& p : sorted) {
    while (hull.size() >= 2 &&
           cross_at(hull[hull.size() - 2], p) <= cross_at(hull[hull.size() - 2], hull.back()))
      hull.pop_back();
    hull.push_back(p);
  }
  return hull;
}

// n = 2: half-width of a box containing every kink strictly inside. Every kink
// solves a 2x2 system with entries in (1/D)Z, so |det| >= 1/D^2 (Cramer).
inline Rational kink_box_2d(const std::vector<Piece>& pieces) {
  mpz_class lcm = 1;
  Rational lo_a = pieces.front().slope[0], hi_a = lo_a;
  Rational lo_l = pieces.front().constant, hi_l = lo_l;
  for (const auto& p : pieces) {
    for (const auto& c : p.slope) {
      mpz_class d = c.denominator();
      mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), d.get_mpz_t());
      lo_a = min(lo_a, c);
      hi_a = max(hi_a, c);
    }
    lo_l = min(lo_l, p.constant);
    hi_l = max(hi_l, p.constant);
  }
  Rational d{mpq_class(lcm)};
  return Rational(2) * d * d * (hi_a - lo_a) * (hi_l - lo_l) + Rational(2);
}

struct Region {
  std::size_t piece;
  geom::Polygon cell;
};

// Linearity regions of max(pieces) clipped to the square of half-width `half`.
inline std::vector<Region> regions_2d(const std::vector<Piece>& pieces, const Rational& half) {
  std::vector<Region> out;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    geom::Polygon cell = geom::square(half);
    const auto ai = to_point2(pieces[i].slope);
    for (std::size_t j = 0; j < pieces.size() && cell.size() >= 3; ++j) {
      if (j == i) continue;
      cell = geom::clip(cell, to_point2(pieces[j].slope) - ai, pieces[i].constant - pieces[j].constant);
    }
    if (geom::area(cell).sign() > 0) out.push_back({i, std::move(cell)});
  }
  return out;
}

// Pieces that are maximal on an open set, sorted by slope.
inline std::vector<Piece> essential(const std::vector<Piece>& raw) {
  auto pieces = dedupe_pieces(raw);
  if (pieces.size() < 2) return pieces;
  if (pieces.front().slope.size() == 1) return upper_envelope_1d(pieces);
  std::vector<Piece> kept;
  for (const auto& r : regions_2d(pieces, kink_box_2d(pieces))) kept.push_back(pieces[r.piece]);
  return kept;
}

// Points where max(pieces) is not locally affine (vertices of the induced
// subdivision of R^n), sorted.
inline std::vector<TPoint> kinks(const std::vector<Piece>& raw) {
  auto pieces = dedupe_pieces(raw);
  std::vector<TPoint> out;
  if (pieces.size() < 2) return out;
  if (pieces.front().slope.size() == 1) {
    auto hull = upper_envelope_1d(pieces);
    for (std::size_t i = 0; i + 1 < hull.size(); ++i)
      out.push_back({(hull[i].constant - hull[i + 1].constant) / (hull[i + 1].slope[0] - hull[i].slope[0])});
    return out;
  }
  Rational half = kink_box_2d(pieces);
  for (const auto& r : regions_2d(pieces, half))
    for (const auto& v : r.cell)
      if (v.x.abs() != half && v.y.abs() != half) out.push_back(from_point2(v));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Convex hull of the slopes active at w, as a vertex list.
inline std::vector<TPoint> active_hull(const std::vector<Piece>& pieces, const TPoint& w) {
  Rational best = eval_pieces(pieces, w);
  std::vector<TPoint> active;
  for (const auto& p : pieces)
    if (tdot(p.slope, w) + p.constant == best) active.push_back(p.slope);
  if (w.size() == 1) {
    auto [lo, hi] = std::minmax_element(active.begin(), active.end());
    if (*lo == *hi) return {*lo};
    return {*lo, *hi};
  }
  std::vector<geom::Point2> pts;
  for (const auto& a : active) pts.push_back(to_point2(a));
  std::vector<TPoint> out;
  for (const auto& p : geom::convex_hull(pts)) out.push_back(from_point2(p));
  return out;
}

// Length (n = 1) or area (n = 2) of a convex set given by its vertices.
inline Rational convex_volume(const std::vector<TPoint>& set, std::size_t n) {
  if (set.size() < 2) return Rational(0);
  if (n == 1) return (set[1][0] - set[0][0]).abs();
  geom::Polygon poly;
  for (const auto& p : set) poly.push_back(to_point2(p));
  return geom::area(poly);
}

inline std::vector<TPoint> minkowski(const std::vector<TPoint>& a, const std::vector<TPoint>& b, std::size_t n) {
  if (n == 1) {
    Rational lo = a.front()[0] + b.front()[0], hi = a.back()[0] + b.back()[0];
    if (lo == hi) return {{lo}};
    return {{lo}, {hi}};
  }
  geom::Polygon pa, pb;
  for (const auto& p : a) pa.push_back(to_point2(p));
  for (const auto& p : b) pb.push_back(to_point2(p));
  std::vector<TPoint> out;
  for (const auto& p : geom::minkowski_sum(pa, pb)) out.push_back(from_point2(p));
  return out;
}

}  // namespace detail

/// u(w) = max over pieces of <slope, w> + constant, with every slope in P and
/// every vertex of P among the slopes (so u - h_P is bounded).
class TropicalMetric {
 public:
  TropicalMetric() = default;

  TropicalMetric(std::shared_ptr<const LatticePolytope> polytope, std::vector<Piece> pieces)
      : polytope_(std::move(polytope)) {
    if (!polytope_) throw std::invalid_argument("tropical metric without polytope");
    for (const auto& p : pieces) {
      if (p.slope.size() != polytope_->dimension()) throw std::domain_error("slope dimension mismatch");
      if (!polytope_->contains(p.slope)) throw std::domain_error("slope " + point_label(p.slope) + " lies outside P");
    }
    pieces_ = detail::dedupe_pieces(std::move(pieces));
    for (const auto& v : polytope_->vertices()) {
      bool found = std::any_of(pieces_.begin(), pieces_.end(), [&](const Piece& p) { return p.slope == v; });
      if (!found) throw std::domain_error("no piece has the vertex slope " + point_label(v) + " of P");
    }
  }

  /// The trivial metric h_P.
  static TropicalMetric support_function(std::shared_ptr<const LatticePolytope> polytope) {
    std::vector<Piece> pieces;
    for (const auto& v : polytope->vertices()) pieces.push_back({v, Rational(0)});
    return TropicalMetric(std::move(polytope), std::move(pieces));
  }

  const LatticePolytope& polytope() const { return *polytope_; }
  const std::shared_ptr<const LatticePolytope>& polytope_ptr() const { return polytope_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  std::size_t dimension() const { return polytope_->dimension(); }

  Rational eval(const TPoint& w) const {
    if (w.size() != dimension()) throw std::domain_error("point dimension mismatch");
    return detail::eval_pieces(pieces_, w);
  }

  TropicalMetric shifted(const Rational& c) const {
    TropicalMetric out = *this;
    for (auto& p : out.pieces_) p.constant += c;
    return out;
  }

  /// Same function keeping only pieces that are maximal on an open set.
  TropicalMetric simplified() const {
    TropicalMetric out = *this;
    out.pieces_ = detail::essential(pieces_);
    return out;
  }

  /// Canonical text key (after simplification) for caching and comparison.
  std::string key() const {
    std::string s;
    for (const auto& p : simplified().pieces_) s += point_label(p.slope) + ":" + p.constant.str() + ";";
    return s;
  }

  friend bool operator==(const TropicalMetric& a, const TropicalMetric& b) {
    return *a.polytope_ == *b.polytope_ && a.pieces_ == b.pieces_;
  }

 private:
  std::shared_ptr<const LatticePolytope> polytope_;
  std::vector<Piece> pieces_;
};

inline Rational t_eval(const TropicalMetric& u, const TPoint& w) { return u.eval(w); }

/// Subdifferential at w: the convex hull of the active slopes (a subset of P).
inline std::vector<TPoint> t_subdifferential(const TropicalMetric& u, const TPoint& w) {
  if (w.size() != u.dimension()) throw std::domain_error("point dimension mismatch");
  return detail::active_hull(u.pieces(), w);
}

inline std::vector<TPoint> t_kinks(const TropicalMetric& u) { return detail::kinks(u.pieces()); }

/// Monge-Ampère probability measure: vol(subdifferential) / vol(P) at each kink.
inline ToricMeasure t_ma(const TropicalMetric& u) {
  const std::size_t n = u.dimension();
  const Rational& vol = u.polytope().volume();
  ToricMeasure out;
  for (const auto& w : t_kinks(u)) out.add_atom(w, detail::convex_volume(t_subdifferential(u, w), n) / vol);
  return out;
}

struct SubdiffCell {
  TPoint point;
  std::vector<TPoint> cell;
};

inline std::vector<SubdiffCell> t_cells(const TropicalMetric& u) {
  std::vector<SubdiffCell> out;
  for (const auto& w : t_kinks(u)) out.push_back({w, t_subdifferential(u, w)});
  return out;
}

/// Mixed Monge-Ampère measure of n metrics on the same P, by polarization.
inline ToricMeasure t_ma_mixed(std::span<const TropicalMetric> us) {
  if (us.empty()) throw std::invalid_argument("no metrics given");
  const std::size_t n = us.front().dimension();
  if (us.size() != n) throw std::domain_error("mixed Monge-Ampère needs exactly n metrics");
  for (const auto& u : us)
    if (!(u.polytope() == us.front().polytope())) throw std::domain_error("metrics live on different polytopes");
  if (n == 1) return t_ma(us[0]);
  if (us[0] == us[1]) return t_ma(us[0]);

  // Mixed mass lives on the vertices of the common refinement, i.e. the kinks
  // of the tropical product u1 + u2.
  std::vector<Piece> product;
  for (const auto& a : us[0].pieces())
    for (const auto& b : us[1].pieces())
      product.push_back({{a.slope[0] + b.slope[0], a.slope[1] + b.slope[1]}, a.constant + b.constant});
  const Rational denom = Rational(2) * us.front().polytope().volume();
  ToricMeasure out;
  for (const auto& w : detail::kinks(product)) {
    auto s1 = t_subdifferential(us[0], w);
    auto s2 = t_subdifferential(us[1], w);
    Rational mixed = detail::convex_volume(detail::minkowski(s1, s2, 2), 2) - detail::convex_volume(s1, 2) -
                     detail::convex_volume(s2, 2);
    out.add_atom(w, mixed / denom);
  }
  return out;
}

/// u_t(w) = t u(w / t): each piece (alpha, lambda) becomes (alpha, t lambda).
inline TropicalMetric t_scale(const TropicalMetric& u, const Rational& t) {
  if (t.sign() <= 0) throw std::domain_error("scaling parameter must be positive");
  std::vector<Piece> pieces = u.pieces();
  for (auto& p : pieces) p.constant *= t;
  return TropicalMetric(u.polytope_ptr(), std::move(pieces));
}

/// Pushforward of a toric measure under w -> t w.
inline ToricMeasure scale_points(const ToricMeasure& mu, const Rational& t) {
  return mu.mapped([&](const TPoint& w) {
    TPoint out = w;
    for (auto& c : out) c *= t;
    return out;
  });
}

/// sum_i c_i u_i for c_i >= 0 with sum 1; pieces are the pairwise combinations.
inline TropicalMetric t_convex_combination(std::span<const TropicalMetric> us, std::span<const Rational> cs) {
  if (us.empty() || us.size() != cs.size()) throw std::invalid_argument("coefficient count mismatch");
  Rational total;
  for (const auto& c : cs) {
    if (c.sign() < 0) throw std::domain_error("toric combinations need nonnegative coefficients");
    total += c;
  }
  if (total != Rational(1)) throw std::domain_error("toric combinations need coefficients summing to 1");
  const std::size_t n = us.front().dimension();
  std::vector<Piece> acc{{TPoint(n), Rational(0)}};
  for (std::size_t i = 0; i < us.size(); ++i) {
    if (cs[i].is_zero()) continue;
    const TropicalMetric simple = us[i].simplified();
    std::vector<Piece> next;
    for (const auto& a : acc)
      for (const auto& p : simple.pieces()) {
        Piece q = a;
        for (std::size_t k = 0; k < n; ++k) q.slope[k] += cs[i] * p.slope[k];
        q.constant += cs[i] * p.constant;
        next.push_back(std::move(q));
      }
    acc = detail::essential(next);
  }
  // Slopes that are convex combinations of vertex slopes cover the vertices.
  return TropicalMetric(us.front().polytope_ptr(), std::move(acc)).simplified();
}

/// sup(u - h_P); attained at w = 0 since u - h_P is maximal at the origin.
inline Rational t_sup_minus_reference(const TropicalMetric& u) { return u.eval(TPoint(u.dimension())); }

}  // namespace napt
