#pragma once

// Metric graphs with a vertex-supported reference measure, points on them,
// and refinements (vertex insertion, pendant edges) with their retractions.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "napt/measure.hpp"
#include "napt/rational.hpp"

namespace napt {

struct Edge {
  std::string id;
  std::size_t tail = 0;
  std::size_t head = 0;
  Rational length;
};

/// A vertex, or a point strictly inside an edge at `offset` from the tail.
/// Endpoints are always represented as vertices (see MetricGraph::point).
struct GraphPoint {
  enum class Kind : std::uint8_t { vertex = 0, edge = 1 };

  Kind kind = Kind::vertex;
  std::size_t index = 0;
  Rational offset;

  static GraphPoint at_vertex(std::size_t v) { return {Kind::vertex, v, Rational(0)}; }
  static GraphPoint in_edge(std::size_t e, Rational offset) {
    return {Kind::edge, e, std::move(offset)};
  }

  bool is_vertex() const { return kind == Kind::vertex; }

  friend bool operator==(const GraphPoint&, const GraphPoint&) = default;
  friend std::strong_ordering operator<=>(const GraphPoint&, const GraphPoint&) = default;
};

class MetricGraph {
 public:
  struct EdgeEnd {
    std::size_t edge;
    bool at_tail;  // the vertex is the tail of `edge`
  };

  MetricGraph() = default;

  /// Stores the data as given; call validate_graph() for diagnostics.
  /// When `degree` is omitted it is the total reference mass.
  MetricGraph(std::vector<std::string> vertices, std::vector<Edge> edges,
              std::vector<Rational> reference, std::optional<Rational> degree = std::nullopt)
      : vertices_(std::move(vertices)), edges_(std::move(edges)), reference_(std::move(reference)) {
    reference_.resize(vertices_.size());
    if (degree) {
      degree_ = *degree;
    } else {
      for (const auto& r : reference_) degree_ += r;
    }
    incident_.resize(vertices_.size());
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      if (edges_[e].tail < vertices_.size()) incident_[edges_[e].tail].push_back({e, true});
      if (edges_[e].head < vertices_.size()) incident_[edges_[e].head].push_back({e, false});
    }
  }

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::string& vertex_name(std::size_t v) const { return vertices_.at(v); }
  const std::vector<std::string>& vertex_names() const { return vertices_; }
  const Edge& edge(std::size_t e) const { return edges_.at(e); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Rational& reference_mass(std::size_t v) const { return reference_.at(v); }
  const std::vector<Rational>& reference_masses() const { return reference_; }
  const Rational& degree() const { return degree_; }
  const std::vector<EdgeEnd>& incident(std::size_t v) const { return incident_.at(v); }

  std::optional<std::size_t> vertex_index(const std::string& name) const {
    auto it = std::find(vertices_.begin(), vertices_.end(), name);
    if (it == vertices_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - vertices_.begin());
  }
  std::optional<std::size_t> edge_index(const std::string& id) const {
    for (std::size_t e = 0; e < edges_.size(); ++e)
      if (edges_[e].id == id) return e;
    return std::nullopt;
  }

  /// Point at `offset` along edge e, normalized to a vertex at the endpoints.
  GraphPoint point(std::size_t e, const Rational& offset) const {
    const Edge& ed = edges_.at(e);
    if (offset.sign() < 0 || offset > ed.length)
      throw std::domain_error("offset " + offset.str() + " is off edge '" + ed.id + "'");
    if (offset.is_zero()) return GraphPoint::at_vertex(ed.tail);
    if (offset == ed.length) return GraphPoint::at_vertex(ed.head);
    return GraphPoint::in_edge(e, offset);
  }

  bool contains(const GraphPoint& p) const {
    if (p.is_vertex()) return p.index < vertices_.size();
    return p.index < edges_.size() && p.offset.sign() > 0 && p.offset < edges_[p.index].length;
  }

  AtomicMeasure<GraphPoint> reference_measure() const {
    AtomicMeasure<GraphPoint> m;
    for (std::size_t v = 0; v < vertices_.size(); ++v) m.add_atom(GraphPoint::at_vertex(v), reference_[v]);
    return m;
  }

  std::string label(const GraphPoint& p) const {
    if (p.is_vertex()) return vertices_.at(p.index);
    return edges_.at(p.index).id + "+" + p.offset.str();
  }

  /// Shortest-path distances from p to every vertex.
  std::vector<Rational> distances_from(const GraphPoint& p) const {
    const std::size_t n = vertices_.size();
    std::vector<std::optional<Rational>> dist(n);
    using Item = std::pair<Rational, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    auto relax = [&](std::size_t v, const Rational& d) {
      if (!dist[v] || d < *dist[v]) {
        dist[v] = d;
        queue.emplace(d, v);
      }
    };
    if (p.is_vertex()) {
      relax(p.index, Rational(0));
    } else {
      const Edge& ed = edges_.at(p.index);
      relax(ed.tail, p.offset);
      relax(ed.head, ed.length - p.offset);
    }
    while (!queue.empty()) {
      auto [d, v] = queue.top();
      queue.pop();
      if (d > *dist[v]) continue;
      for (const auto& end : incident_[v]) {
        const Edge& ed = edges_[end.edge];
        relax(end.at_tail ? ed.head : ed.tail, d + ed.length);
      }
    }
    std::vector<Rational> out(n);
    for (std::size_t v = 0; v < n; ++v) {
      if (!dist[v]) throw std::domain_error("graph not connected");
      out[v] = *dist[v];
    }
    return out;
  }

  Rational distance(const GraphPoint& p, const GraphPoint& q) const {
    auto from_p = distances_from(p);
    if (q.is_vertex()) return from_p[q.index];
    const Edge& ed = edges_.at(q.index);
    Rational best = min(from_p[ed.tail] + q.offset, from_p[ed.head] + ed.length - q.offset);
    if (!p.is_vertex() && p.index == q.index) best = min(best, (p.offset - q.offset).abs());
    return best;
  }

 private:
  std::vector<std::string> vertices_;
  std::vector<Edge> edges_;
  std::vector<Rational> reference_;
  Rational degree_;
  std::vector<std::vector<EdgeEnd>> incident_;
};

using GraphMeasure = AtomicMeasure<GraphPoint>;

/// One diagnostic per violated MetricGraph invariant; empty when valid.
inline std::vector<std::string> validate_graph(const MetricGraph& g) {
  std::vector<std::string> out;
  const std::size_t n = g.vertex_count();
  if (n == 0) {
    out.emplace_back("graph has no vertices");
    return out;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (g.vertex_name(i) == g.vertex_name(j)) out.push_back("duplicate vertex id '" + g.vertex_name(i) + "'");
  bool endpoints_ok = true;
  for (const auto& e : g.edges()) {
    if (e.tail >= n || e.head >= n) {
      out.push_back("edge '" + e.id + "' has an endpoint out of range");
      endpoints_ok = false;
    }
    if (e.length.sign() <= 0) out.push_back("edge '" + e.id + "' length must be positive");
  }
  Rational total;
  for (std::size_t v = 0; v < n; ++v) {
    if (g.reference_mass(v).sign() < 0) out.push_back("negative reference mass at '" + g.vertex_name(v) + "'");
    total += g.reference_mass(v);
  }
  if (g.degree().sign() <= 0) out.emplace_back("degree V must be positive");
  if (total != g.degree()) out.emplace_back("reference mass ≠ V");
  if (endpoints_ok) {
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
      std::size_t v = stack.back();
      stack.pop_back();
      for (const auto& end : g.incident(v)) {
        const Edge& ed = g.edge(end.edge);
        std::size_t w = end.at_tail ? ed.head : ed.tail;
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
      }
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) out.emplace_back("graph not connected");
  }
  return out;
}

inline void require_valid(const MetricGraph& g) {
  auto diags = validate_graph(g);
  if (diags.empty()) return;
  std::string msg = "invalid metric graph:";
  for (const auto& d : diags) msg += " " + d + ";";
  throw std::domain_error(msg);
}

/// How a target edge of a refinement sits over the source graph: either a
/// sub-segment [start, end] of a source edge (same orientation), or part of a
/// pendant tree that retracts onto `anchor`.
struct EdgeImage {
  bool pendant = false;
  std::size_t source_edge = 0;
  Rational start;
  Rational end;
  GraphPoint anchor;
};

/// A refinement source -> target. The target is obtained by inserting
/// vertices at interior points and by attaching pendant edges; the retraction
/// maps the target back onto the source.
struct Subdivision {
  std::shared_ptr<const MetricGraph> source;
  std::shared_ptr<const MetricGraph> target;
  std::vector<std::size_t> vertex_embedding;  // source vertex -> target vertex
  std::vector<GraphPoint> vertex_image;       // target vertex -> source point
  std::vector<EdgeImage> edge_image;          // target edge -> source

  bool has_pendants() const {
    return std::any_of(edge_image.begin(), edge_image.end(), [](const EdgeImage& e) { return e.pendant; });
  }

  /// Retraction of a target point onto the source.
  GraphPoint retract(const GraphPoint& p) const {
    if (p.is_vertex()) return vertex_image.at(p.index);
    const EdgeImage& img = edge_image.at(p.index);
    if (img.pendant) return img.anchor;
    return source->point(img.source_edge, img.start + p.offset);
  }

  /// The target point over a source point.
  GraphPoint lift(const GraphPoint& p) const {
    if (p.is_vertex()) return GraphPoint::at_vertex(vertex_embedding.at(p.index));
    for (std::size_t te = 0; te < edge_image.size(); ++te) {
      const EdgeImage& img = edge_image[te];
      if (img.pendant || img.source_edge != p.index) continue;
      if (p.offset < img.start || p.offset > img.end) continue;
      return target->point(te, p.offset - img.start);
    }
    throw std::domain_error("point is not on the refined graph");
  }
};

inline Subdivision identity_subdivision(std::shared_ptr<const MetricGraph> g) {
  Subdivision s;
  s.source = g;
  s.target = g;
  for (std::size_t v = 0; v < g->vertex_count(); ++v) {
    s.vertex_embedding.push_back(v);
    s.vertex_image.push_back(GraphPoint::at_vertex(v));
  }
  for (std::size_t e = 0; e < g->edge_count(); ++e)
    s.edge_image.push_back({false, e, Rational(0), g->edge(e).length, {}});
  return s;
}

/// Inserts the given points as vertices. Vertex points are accepted and ignored.
inline Subdivision subdivide(std::shared_ptr<const MetricGraph> g, const std::vector<GraphPoint>& points) {
  std::vector<std::vector<Rational>> cuts(g->edge_count());
  for (const auto& p : points) {
    if (!g->contains(p)) throw std::domain_error("point is not on the graph");
    if (!p.is_vertex()) cuts[p.index].push_back(p.offset);
  }
  bool any = std::any_of(cuts.begin(), cuts.end(), [](const auto& c) { return !c.empty(); });
  if (!any) return identity_subdivision(g);

  std::vector<std::string> names = g->vertex_names();
  std::vector<Rational> reference = g->reference_masses();
  std::vector<Edge> edges;
  Subdivision s;
  s.source = g;
  for (std::size_t v = 0; v < g->vertex_count(); ++v) {
    s.vertex_embedding.push_back(v);
    s.vertex_image.push_back(GraphPoint::at_vertex(v));
  }
  auto fresh_name = [&](std::string base) {
    while (std::find(names.begin(), names.end(), base) != names.end()) base += "'";
    return base;
  };
  for (std::size_t e = 0; e < g->edge_count(); ++e) {
    const Edge& ed = g->edge(e);
    auto& c = cuts[e];
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    std::size_t prev_vertex = ed.tail;
    Rational prev_offset(0);
    for (std::size_t k = 0; k <= c.size(); ++k) {
      std::size_t next_vertex;
      Rational next_offset;
      if (k < c.size()) {
        next_offset = c[k];
        next_vertex = names.size();
        names.push_back(fresh_name(ed.id + "@" + c[k].str()));
        reference.emplace_back(0);
        s.vertex_image.push_back(GraphPoint::in_edge(e, c[k]));
      } else {
        next_offset = ed.length;
        next_vertex = ed.head;
      }
      std::string id = c.empty() ? ed.id : ed.id + "." + std::to_string(k + 1);
      edges.push_back({id, prev_vertex, next_vertex, next_offset - prev_offset});
      s.edge_image.push_back({false, e, prev_offset, next_offset, {}});
      prev_vertex = next_vertex;
      prev_offset = next_offset;
    }
  }
  s.target = std::make_shared<const MetricGraph>(std::move(names), std::move(edges), std::move(reference), g->degree());
  return s;
}

/// Attaches a pendant edge of the given length at vertex v. The new leaf
/// carries zero reference mass and retracts onto v.
inline Subdivision attach_pendant(std::shared_ptr<const MetricGraph> g, std::size_t v, const Rational& length,
                                  std::string leaf_name = {}) {
  if (v >= g->vertex_count()) throw std::domain_error("pendant anchor is not a vertex");
  if (length.sign() <= 0) throw std::domain_error("pendant length must be positive");
  Subdivision s = identity_subdivision(g);
  std::vector<std::string> names = g->vertex_names();
  std::vector<Rational> reference = g->reference_masses();
  std::vector<Edge> edges = g->edges();
  if (leaf_name.empty()) leaf_name = g->vertex_name(v) + "^";
  while (std::find(names.begin(), names.end(), leaf_name) != names.end()) leaf_name += "'";
  std::size_t leaf = names.size();
  names.push_back(leaf_name);
  reference.emplace_back(0);
  edges.push_back({g->vertex_name(v) + "-" + leaf_name, v, leaf, length});
  s.vertex_image.push_back(GraphPoint::at_vertex(v));
  s.edge_image.push_back({true, 0, Rational(0), Rational(0), GraphPoint::at_vertex(v)});
  s.target = std::make_shared<const MetricGraph>(std::move(names), std::move(edges), std::move(reference), g->degree());
  return s;
}

/// first: X -> Y, second: Y -> Z; returns X -> Z.
inline Subdivision compose(const Subdivision& first, const Subdivision& second) {
  if (first.target != second.source) throw std::domain_error("subdivisions do not chain");
  Subdivision s;
  s.source = first.source;
  s.target = second.target;
  for (std::size_t v : first.vertex_embedding) s.vertex_embedding.push_back(second.vertex_embedding.at(v));
  for (const auto& p : second.vertex_image) s.vertex_image.push_back(first.retract(p));
  for (const auto& img : second.edge_image) {
    if (img.pendant) {
      s.edge_image.push_back({true, 0, Rational(0), Rational(0), first.retract(img.anchor)});
      continue;
    }
    const EdgeImage& base = first.edge_image.at(img.source_edge);
    if (base.pendant) {
      s.edge_image.push_back({true, 0, Rational(0), Rational(0), base.anchor});
    } else {
      s.edge_image.push_back({false, base.source_edge, base.start + img.start, base.start + img.end, {}});
    }
  }
  return s;
}

/// Pushes a measure on s.target forward along the retraction onto s.source.
inline GraphMeasure pushforward_measure(const GraphMeasure& mu, const Subdivision& s) {
  for (const auto& [p, m] : mu.atoms())
    if (!s.target->contains(p)) throw std::domain_error("measure is not supported on the refined graph");
  return mu.mapped([&](const GraphPoint& p) { return s.retract(p); });
}

/// Transports a measure on s.source to the same points of s.target.
inline GraphMeasure lift_measure(const GraphMeasure& mu, const Subdivision& s) {
  return mu.mapped([&](const GraphPoint& p) { return s.lift(p); });
}

}  // namespace napt
