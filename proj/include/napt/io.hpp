#pragma once

// JSON problem documents. Every number is an exact rational, written as a
// "p/q" string (integers are also accepted on input). Canonical form is
// sorted keys, two-space indentation, rationals as strings.

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "napt/graph.hpp"
#include "napt/model_algebra.hpp"
#include "napt/pl_metric.hpp"
#include "napt/toric.hpp"
#include "napt/toric_envelope.hpp"

namespace napt {

/// Malformed JSON or a document that does not follow the schema.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GraphDocument {
  std::shared_ptr<const MetricGraph> graph;
  std::map<std::string, PLMetric> metrics;
  std::map<std::string, GraphMeasure> measures;
};

struct ToricDocument {
  std::shared_ptr<const LatticePolytope> polytope;
  std::map<std::string, TropicalMetric> metrics;
  std::map<std::string, ToricMeasure> measures;
  std::map<std::string, PLExpr> obstacles;
};

struct AlgebraDocument {
  std::shared_ptr<const RestrictionAlgebra> algebra;
  std::map<std::string, ModelMetric> metrics;
  std::map<std::string, AlgebraMeasure> measures;
};

using Document = std::variant<GraphDocument, ToricDocument, AlgebraDocument>;

namespace io {

using json = nlohmann::json;

inline constexpr int version = 1;

inline Rational rational(const json& j, const std::string& where) {
  try {
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long long>());
  } catch (const std::invalid_argument&) {
  } catch (const std::domain_error&) {
  }
  throw ParseError(where + ": expected a rational number");
}

inline json to_json(const Rational& r) { return r.fraction(); }

inline const json& field(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(where + ": missing field '" + key + "'");
  return j.at(key);
}

inline std::string text(const json& j, const std::string& where) {
  if (!j.is_string()) throw ParseError(where + ": expected a string");
  return j.get<std::string>();
}

inline const json& array(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array");
  return j;
}

inline const json& object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  return j;
}

inline TPoint tpoint(const json& j, const std::string& where) {
  TPoint p;
  for (const auto& c : array(j, where)) p.push_back(rational(c, where));
  return p;
}

inline json to_json(const TPoint& p) {
  json out = json::array();
  for (const auto& c : p) out.push_back(to_json(c));
  return out;
}

template <class Point, class F>
AtomicMeasure<Point> measure(const json& j, const std::string& where, F&& point) {
  AtomicMeasure<Point> mu;
  for (const auto& atom : array(j, where))
    mu.add_atom(point(field(atom, "point", where)), rational(field(atom, "mass", where), where));
  return mu;
}

template <class Point, class F>
json measure_json(const AtomicMeasure<Point>& mu, F&& point) {
  json out = json::array();
  for (const auto& [p, m] : mu.atoms()) out.push_back({{"point", point(p)}, {"mass", to_json(m)}});
  return out;
}

// Graph documents.

inline std::size_t vertex_ref(const MetricGraph& g, const json& j, const std::string& where) {
  auto name = text(j, where);
  auto v = g.vertex_index(name);
  if (!v) throw ParseError(where + ": unknown vertex '" + name + "'");
  return *v;
}

inline GraphPoint graph_point(const MetricGraph& g, const json& j, const std::string& where) {
  object(j, where);
  if (j.contains("vertex")) return GraphPoint::at_vertex(vertex_ref(g, j.at("vertex"), where));
  auto id = text(field(j, "edge", where), where);
  auto e = g.edge_index(id);
  if (!e) throw ParseError(where + ": unknown edge '" + id + "'");
  Rational off = rational(field(j, "offset", where), where);
  if (off.sign() < 0 || off > g.edge(*e).length) throw ParseError(where + ": offset outside the edge");
  return g.point(*e, off);
}

inline json graph_point_json(const MetricGraph& g, const GraphPoint& p) {
  if (p.is_vertex()) return {{"vertex", g.vertex_name(p.index)}};
  return {{"edge", g.edge(p.index).id}, {"offset", to_json(p.offset)}};
}

inline PLMetric pl_metric(std::shared_ptr<const MetricGraph> g, const json& j, const std::string& where) {
  std::vector<Rational> values(g->vertex_count());
  std::vector<bool> seen(g->vertex_count());
  for (const auto& [name, v] : object(field(j, "values", where), where).items()) {
    auto idx = g->vertex_index(name);
    if (!idx) throw ParseError(where + ": unknown vertex '" + name + "'");
    values[*idx] = rational(v, where);
    seen[*idx] = true;
  }
  for (std::size_t v = 0; v < seen.size(); ++v)
    if (!seen[v]) throw ParseError(where + ": no value for vertex '" + g->vertex_name(v) + "'");
  std::vector<std::vector<Breakpoint>> bps(g->edge_count());
  if (j.contains("breakpoints"))
    for (const auto& [id, list] : object(j.at("breakpoints"), where).items()) {
      auto e = g->edge_index(id);
      if (!e) throw ParseError(where + ": unknown edge '" + id + "'");
      for (const auto& bp : array(list, where)) {
        if (!bp.is_array() || bp.size() != 2) throw ParseError(where + ": breakpoints are [offset, value] pairs");
        bps[*e].push_back({rational(bp[0], where), rational(bp[1], where)});
      }
    }
  return PLMetric(std::move(g), std::move(values), std::move(bps));
}

inline json pl_metric_json(const PLMetric& u) {
  const MetricGraph& g = u.host();
  json values = json::object();
  for (std::size_t v = 0; v < g.vertex_count(); ++v) values[g.vertex_name(v)] = to_json(u.vertex_value(v));
  json out = {{"values", values}};
  json bps = json::object();
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    if (u.breakpoints(e).empty()) continue;
    json list = json::array();
    for (const auto& bp : u.breakpoints(e)) list.push_back({to_json(bp.offset), to_json(bp.value)});
    bps[g.edge(e).id] = list;
  }
  if (!bps.empty()) out["breakpoints"] = bps;
  return out;
}

inline GraphDocument graph_document(const json& j) {
  const json& gj = field(j, "graph", "graph");
  std::vector<std::string> names;
  std::vector<Rational> reference;
  for (const auto& v : array(field(gj, "vertices", "graph"), "graph.vertices")) {
    names.push_back(text(field(v, "id", "graph.vertices"), "graph.vertices"));
    reference.push_back(v.contains("reference") ? rational(v.at("reference"), "graph.vertices") : Rational(0));
  }
  std::vector<Edge> edges;
  auto index_of = [&](const json& x) {
    auto name = text(x, "graph.edges");
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw ParseError("graph.edges: unknown vertex '" + name + "'");
    return static_cast<std::size_t>(it - names.begin());
  };
  for (const auto& e : array(field(gj, "edges", "graph"), "graph.edges"))
    edges.push_back({text(field(e, "id", "graph.edges"), "graph.edges"), index_of(field(e, "tail", "graph.edges")),
                     index_of(field(e, "head", "graph.edges")), rational(field(e, "length", "graph.edges"), "graph.edges")});
  std::optional<Rational> degree;
  if (gj.contains("degree")) degree = rational(gj.at("degree"), "graph.degree");
  GraphDocument doc;
  doc.graph = std::make_shared<const MetricGraph>(std::move(names), std::move(edges), std::move(reference), degree);
  if (j.contains("metrics"))
    for (const auto& [name, m] : object(j.at("metrics"), "metrics").items())
      doc.metrics.emplace(name, pl_metric(doc.graph, m, "metrics." + name));
  if (j.contains("measures"))
    for (const auto& [name, m] : object(j.at("measures"), "measures").items())
      doc.measures.emplace(name, measure<GraphPoint>(m, "measures." + name, [&](const json& p) {
                             return graph_point(*doc.graph, p, "measures." + name);
                           }));
  return doc;
}

inline json document_json(const GraphDocument& doc) {
  const MetricGraph& g = *doc.graph;
  json vertices = json::array();
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    vertices.push_back({{"id", g.vertex_name(v)}, {"reference", to_json(g.reference_mass(v))}});
  json edges = json::array();
  for (const auto& e : g.edges())
    edges.push_back({{"id", e.id}, {"tail", g.vertex_name(e.tail)}, {"head", g.vertex_name(e.head)},
                     {"length", to_json(e.length)}});
  json out = {{"napt_version", version},
              {"kind", "metric_graph"},
              {"graph", {{"vertices", vertices}, {"edges", edges}, {"degree", to_json(g.degree())}}}};
  if (!doc.metrics.empty()) {
    json ms = json::object();
    for (const auto& [name, u] : doc.metrics) ms[name] = pl_metric_json(u);
    out["metrics"] = ms;
  }
  if (!doc.measures.empty()) {
    json ms = json::object();
    for (const auto& [name, mu] : doc.measures)
      ms[name] = measure_json(mu, [&](const GraphPoint& p) { return graph_point_json(g, p); });
    out["measures"] = ms;
  }
  return out;
}

// Toric documents.

inline std::vector<Piece> pieces(const json& j, const std::string& where) {
  std::vector<Piece> out;
  for (const auto& p : array(j, where))
    out.push_back({tpoint(field(p, "slope", where), where), rational(field(p, "constant", where), where)});
  return out;
}

inline json pieces_json(const std::vector<Piece>& ps) {
  json out = json::array();
  for (const auto& p : ps) out.push_back({{"slope", to_json(p.slope)}, {"constant", to_json(p.constant)}});
  return out;
}

inline PLExpr pl_expr(const json& j, const std::string& where) {
  object(j, where);
  auto children = [&](const json& list) {
    std::vector<PLExpr> out;
    for (const auto& c : array(list, where)) out.push_back(pl_expr(c, where));
    if (out.empty()) throw ParseError(where + ": empty max/min node");
    return out;
  };
  if (j.contains("max")) return PLExpr::max_of(children(j.at("max")));
  if (j.contains("min")) return PLExpr::min_of(children(j.at("min")));
  return PLExpr::affine(tpoint(field(j, "slope", where), where), rational(field(j, "constant", where), where));
}

inline json pl_expr_json(const PLExpr& e) {
  if (e.op == PLExpr::Op::affine) return {{"slope", to_json(e.slope)}, {"constant", to_json(e.constant)}};
  json list = json::array();
  for (const auto& c : e.children) list.push_back(pl_expr_json(c));
  return {{e.op == PLExpr::Op::max ? "max" : "min", list}};
}

inline ToricDocument toric_document(const json& j) {
  ToricDocument doc;
  std::vector<TPoint> verts;
  for (const auto& v : array(field(j, "polytope", "polytope"), "polytope")) verts.push_back(tpoint(v, "polytope"));
  doc.polytope = std::make_shared<const LatticePolytope>(std::move(verts));
  const std::size_t n = doc.polytope->dimension();
  auto check_dim = [&](const TPoint& p, const std::string& where) {
    if (p.size() != n) throw ParseError(where + ": point has the wrong dimension");
    return p;
  };
  if (j.contains("metrics"))
    for (const auto& [name, m] : object(j.at("metrics"), "metrics").items()) {
      auto ps = pieces(m, "metrics." + name);
      for (const auto& p : ps) check_dim(p.slope, "metrics." + name);
      doc.metrics.emplace(name, TropicalMetric(doc.polytope, std::move(ps)));
    }
  if (j.contains("measures"))
    for (const auto& [name, m] : object(j.at("measures"), "measures").items())
      doc.measures.emplace(name, measure<TPoint>(m, "measures." + name, [&](const json& p) {
                             return check_dim(tpoint(p, "measures." + name), "measures." + name);
                           }));
  if (j.contains("obstacles"))
    for (const auto& [name, o] : object(j.at("obstacles"), "obstacles").items()) {
      PLExpr e = pl_expr(o, "obstacles." + name);
      auto walk = [&](auto&& self, const PLExpr& x) -> void {
        if (x.op == PLExpr::Op::affine) check_dim(x.slope, "obstacles." + name);
        for (const auto& c : x.children) self(self, c);
      };
      walk(walk, e);
      doc.obstacles.emplace(name, std::move(e));
    }
  return doc;
}

inline json document_json(const ToricDocument& doc) {
  json poly = json::array();
  for (const auto& v : doc.polytope->vertices()) poly.push_back(to_json(v));
  json out = {{"napt_version", version}, {"kind", "toric"}, {"polytope", poly}};
  if (!doc.metrics.empty()) {
    json ms = json::object();
    for (const auto& [name, u] : doc.metrics) ms[name] = pieces_json(u.pieces());
    out["metrics"] = ms;
  }
  if (!doc.measures.empty()) {
    json ms = json::object();
    for (const auto& [name, mu] : doc.measures) ms[name] = measure_json(mu, [](const TPoint& p) { return to_json(p); });
    out["measures"] = ms;
  }
  if (!doc.obstacles.empty()) {
    json os = json::object();
    for (const auto& [name, e] : doc.obstacles) os[name] = pl_expr_json(e);
    out["obstacles"] = os;
  }
  return out;
}

// Algebra documents. Basis arguments are "L" or a component name.

inline AlgebraDocument algebra_document(const json& j) {
  const json& dim = field(j, "dimension", "dimension");
  if (!dim.is_number_unsigned() || dim.get<unsigned>() == 0) throw ParseError("dimension: expected a positive integer");
  std::vector<Component> comps;
  for (const auto& c : array(field(j, "components", "components"), "components")) {
    auto name = text(field(c, "name", "components"), "components");
    if (name == "L") throw ParseError("components: the name 'L' is reserved");
    comps.push_back({name, c.contains("multiplicity") ? rational(c.at("multiplicity"), "components") : Rational(1)});
  }
  auto alg = std::make_shared<RestrictionAlgebra>(dim.get<std::size_t>(), rational(field(j, "degree", "degree"), "degree"),
                                                  comps);
  auto comp = [&](const json& x, const std::string& where) {
    auto name = text(x, where);
    auto idx = alg->component_index(name);
    if (!idx) throw ParseError(where + ": unknown component '" + name + "'");
    return *idx;
  };
  auto basis = [&](const json& x, const std::string& where) -> std::size_t {
    if (x.is_string() && x.get<std::string>() == "L") return 0;
    return comp(x, where) + 1;
  };
  for (const auto& [name, entries] : object(field(j, "tables", "tables"), "tables").items()) {
    const std::string where = "tables." + name;
    auto idx = alg->component_index(name);
    if (!idx) throw ParseError(where + ": unknown component '" + name + "'");
    for (const auto& e : array(entries, where)) {
      RestrictionAlgebra::Key key;
      for (const auto& a : array(field(e, "args", where), where)) key.push_back(basis(a, where));
      if (key.size() != alg->dimension()) throw ParseError(where + ": entries need exactly n arguments");
      alg->set_entry(*idx, key, rational(field(e, "value", where), where));
    }
  }
  if (j.contains("values"))
    for (const auto& v : array(j.at("values"), "values"))
      alg->set_value(comp(field(v, "basis", "values"), "values"), comp(field(v, "at", "values"), "values"),
                     rational(field(v, "value", "values"), "values"));
  AlgebraDocument doc;
  doc.algebra = alg;
  if (j.contains("metrics"))
    for (const auto& [name, m] : object(j.at("metrics"), "metrics").items()) {
      const std::string where = "metrics." + name;
      ModelMetric mm = alg->zero();
      if (m.contains("coefficients"))
        for (const auto& [c, v] : object(m.at("coefficients"), where).items()) mm.d[comp(json(c), where)] = rational(v, where);
      if (m.contains("constant")) mm.c = rational(m.at("constant"), where);
      doc.metrics.emplace(name, std::move(mm));
    }
  if (j.contains("measures"))
    for (const auto& [name, m] : object(j.at("measures"), "measures").items())
      doc.measures.emplace(name, measure<std::size_t>(m, "measures." + name,
                                                      [&](const json& p) { return comp(p, "measures." + name); }));
  return doc;
}

inline json document_json(const AlgebraDocument& doc) {
  const RestrictionAlgebra& alg = *doc.algebra;
  auto basis_name = [&](std::size_t b) { return b == 0 ? std::string("L") : alg.components()[b - 1].name; };
  json comps = json::array();
  for (const auto& c : alg.components()) comps.push_back({{"name", c.name}, {"multiplicity", to_json(c.multiplicity)}});
  json tables = json::object();
  for (std::size_t j = 0; j < alg.size(); ++j) {
    json entries = json::array();
    for (const auto& [key, v] : alg.table(j)) {
      json args = json::array();
      for (auto b : key) args.push_back(basis_name(b));
      entries.push_back({{"args", args}, {"value", to_json(v)}});
    }
    tables[alg.components()[j].name] = entries;
  }
  json out = {{"napt_version", version}, {"kind", "algebra"},   {"dimension", alg.dimension()},
              {"degree", to_json(alg.degree())}, {"components", comps}, {"tables", tables}};
  // Only entries differing from the default delta_ij / b_j are written.
  json values = json::array();
  for (std::size_t i = 0; i < alg.size(); ++i)
    for (std::size_t j = 0; j < alg.size(); ++j) {
      Rational dflt = i == j ? Rational(1) / alg.components()[j].multiplicity : Rational(0);
      if (alg.value_table(i, j) != dflt)
        values.push_back({{"basis", alg.components()[i].name},
                          {"at", alg.components()[j].name},
                          {"value", to_json(alg.value_table(i, j))}});
    }
  if (!values.empty()) out["values"] = values;
  if (!doc.metrics.empty()) {
    json ms = json::object();
    for (const auto& [name, m] : doc.metrics) {
      json coeffs = json::object();
      for (std::size_t i = 0; i < m.d.size(); ++i)
        if (!m.d[i].is_zero()) coeffs[alg.components()[i].name] = to_json(m.d[i]);
      json entry = {{"coefficients", coeffs}};
      if (!m.c.is_zero()) entry["constant"] = to_json(m.c);
      ms[name] = entry;
    }
    out["metrics"] = ms;
  }
  if (!doc.measures.empty()) {
    json ms = json::object();
    for (const auto& [name, mu] : doc.measures)
      ms[name] = measure_json(mu, [&](std::size_t j) { return alg.components()[j].name; });
    out["measures"] = ms;
  }
  return out;
}

}  // namespace io

/// Parses a document. Syntax and schema problems raise ParseError; violated
/// mathematical invariants surface as the constructors' domain errors.
inline Document parse_document(const std::string& text) {
  io::json j;
  try {
    j = io::json::parse(text);
  } catch (const io::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  try {
    io::object(j, "document");
    const auto& ver = io::field(j, "napt_version", "document");
    if (!ver.is_number_integer() || ver.get<int>() != io::version) throw ParseError("unsupported napt_version");
    const auto kind = io::text(io::field(j, "kind", "document"), "kind");
    if (kind == "metric_graph") return io::graph_document(j);
    if (kind == "toric") return io::toric_document(j);
    if (kind == "algebra") return io::algebra_document(j);
    throw ParseError("unknown kind '" + kind + "'");
  } catch (const io::json::exception& e) {
    throw ParseError(std::string("malformed document: ") + e.what());
  }
}

inline std::string serialize_document(const Document& doc) {
  return std::visit([](const auto& d) { return io::document_json(d).dump(2) + "\n"; }, doc);
}

}  // namespace napt
