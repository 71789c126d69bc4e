#pragma once

// SVG snapshots. Coordinates are printed with three decimals, so the bytes
// depend only on the exact input. Atoms are discs with area proportional to
// mass; graphs are drawn one edge per row, to scale.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "napt/graph_engine.hpp"
#include "napt/toric.hpp"

namespace napt::svg {

namespace detail {

inline std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", std::abs(x) < 5e-4 ? 0.0 : x);
  return buf;
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

inline const char* colour(std::size_t i) {
  static const char* palette[] = {"#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3",
                                  "#fdb462", "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd"};
  return palette[i % 10];
}

class Canvas {
 public:
  Canvas(double width, double height) : width_(width), height_(height) {}

  void line(double x1, double y1, double x2, double y2, const char* stroke = "#444") {
    body_ << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\"" << num(x2) << "\" y2=\"" << num(y2)
          << "\" stroke=\"" << stroke << "\" stroke-width=\"1.5\"/>\n";
  }

  void polyline(const std::vector<std::pair<double, double>>& pts, const char* stroke = "#1f4e9c") {
    body_ << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) body_ << (i ? " " : "") << num(pts[i].first) << "," << num(pts[i].second);
    body_ << "\"/>\n";
  }

  void polygon(const std::vector<std::pair<double, double>>& pts, const char* fill) {
    body_ << "<polygon fill=\"" << fill << "\" stroke=\"#666\" stroke-width=\"1\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) body_ << (i ? " " : "") << num(pts[i].first) << "," << num(pts[i].second);
    body_ << "\"/>\n";
  }

  // Area proportional to |mass|; negative atoms are drawn hollow.
  void disc(double x, double y, const Rational& mass, const std::string& label) {
    const double r = 12.0 * std::sqrt(std::abs(mass.to_double()));
    const bool neg = mass.sign() < 0;
    body_ << "<circle class=\"atom\" cx=\"" << num(x) << "\" cy=\"" << num(y) << "\" r=\"" << num(r) << "\" fill=\""
          << (neg ? "none" : "#d62728") << "\" stroke=\"#d62728\"/>\n";
    text(x + r + 3, y - 3, label + ": " + mass.fraction());
  }

  void text(double x, double y, const std::string& s) {
    body_ << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" font-family=\"monospace\" font-size=\"11\">"
          << escape(s) << "</text>\n";
  }

  std::string str() const {
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width_) << "\" height=\"" << num(height_)
        << "\" viewBox=\"0 0 " << num(width_) << " " << num(height_) << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << body_.str() << "</svg>\n";
    return out.str();
  }

 private:
  double width_, height_;
  std::ostringstream body_;
};

struct EdgeRows {
  double scale;
  double row = 80.0;
  double left = 60.0;

  explicit EdgeRows(const MetricGraph& g) {
    Rational longest(0);
    for (const auto& e : g.edges()) longest = max(longest, e.length);
    scale = 400.0 / longest.to_double();
  }
  double x(const Rational& offset) const { return left + scale * offset.to_double(); }
  double y(std::size_t e) const { return 50.0 + row * static_cast<double>(e); }
  double width() const { return left + 400.0 + 140.0; }
  double height(const MetricGraph& g) const { return y(g.edge_count()) + 10.0; }
};

// Where an atom is drawn: interior points on their edge, a vertex at its
// first appearance as an edge endpoint.
inline std::pair<double, double> place(const MetricGraph& g, const EdgeRows& rows, const GraphPoint& p) {
  if (!p.is_vertex()) return {rows.x(p.offset), rows.y(p.index)};
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    if (g.edge(e).tail == p.index) return {rows.x(Rational(0)), rows.y(e)};
    if (g.edge(e).head == p.index) return {rows.x(g.edge(e).length), rows.y(e)};
  }
  return {rows.left - 30.0, rows.y(0)};
}

inline void draw_edges(Canvas& c, const MetricGraph& g, const EdgeRows& rows) {
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    c.line(rows.x(Rational(0)), rows.y(e), rows.x(ed.length), rows.y(e), "#999");
    c.text(4, rows.y(e) + 4, ed.id);
    c.text(rows.x(Rational(0)) - 4, rows.y(e) + 16, g.vertex_name(ed.tail));
    c.text(rows.x(ed.length) - 4, rows.y(e) + 16, g.vertex_name(ed.head));
  }
}

}  // namespace detail

inline std::string render(const MetricGraph& g, const GraphMeasure& mu) {
  detail::EdgeRows rows(g);
  detail::Canvas c(rows.width(), rows.height(g));
  detail::draw_edges(c, g, rows);
  for (const auto& [p, m] : mu.atoms()) {
    auto [x, y] = detail::place(g, rows, p);
    c.disc(x, y, m, g.label(p));
  }
  return c.str();
}

/// One row per edge: the edge to scale and the graph of u above it.
inline std::string render(const PLMetric& u) {
  const MetricGraph& g = u.host();
  detail::EdgeRows rows(g);
  Rational span(0);
  for (auto v : u.vertex_values()) span = max(span, v.abs());
  for (std::size_t e = 0; e < g.edge_count(); ++e)
    for (const auto& bp : u.breakpoints(e)) span = max(span, bp.value.abs());
  const double vscale = span.is_zero() ? 0.0 : 25.0 / span.to_double();
  detail::Canvas c(rows.width(), rows.height(g));
  detail::draw_edges(c, g, rows);
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& bp : u.profile(e)) pts.emplace_back(rows.x(bp.offset), rows.y(e) - vscale * bp.value.to_double());
    c.polyline(pts);
  }
  return c.str();
}

namespace detail {

struct Window {
  double half;
  double size = 480.0;
  double margin = 20.0;
  double x(double w) const { return margin + (w + half) / (2 * half) * size; }
  double y(double w) const { return margin + (half - w) / (2 * half) * size; }
};

inline double extent(const std::vector<TPoint>& pts) {
  double h = 1.0;
  for (const auto& p : pts)
    for (const auto& c : p) h = std::max(h, std::abs(c.to_double()) + 1.0);
  return std::ceil(h);
}

inline void axes(Canvas& c, const Window& w, bool two_d) {
  c.line(w.x(-w.half), w.y(0), w.x(w.half), w.y(0), "#bbb");
  if (two_d) c.line(w.x(0), w.y(-w.half), w.x(0), w.y(w.half), "#bbb");
}

}  // namespace detail

inline std::string render(const ToricMeasure& mu, std::size_t n) {
  std::vector<TPoint> pts;
  for (const auto& [p, m] : mu.atoms()) pts.push_back(p);
  detail::Window w{detail::extent(pts)};
  detail::Canvas c(w.size + 2 * w.margin + 120, w.size + 2 * w.margin);
  detail::axes(c, w, n == 2);
  for (const auto& [p, m] : mu.atoms()) c.disc(w.x(p[0].to_double()), w.y(n == 2 ? p[1].to_double() : 0.0), m, point_label(p));
  return c.str();
}

/// n = 2: linearity cells of u as coloured polygons; n = 1: the graph of u.
/// The Monge-Ampère atoms are drawn on top.
inline std::string render(const TropicalMetric& u) {
  const std::size_t n = u.dimension();
  const ToricMeasure mu = t_ma(u);
  std::vector<TPoint> pts;
  for (const auto& [p, m] : mu.atoms()) pts.push_back(p);
  detail::Window w{detail::extent(pts)};
  detail::Canvas c(w.size + 2 * w.margin + 120, w.size + 2 * w.margin);
  const TropicalMetric s = u.simplified();
  if (n == 2) {
    const Rational half(static_cast<long>(std::ceil(w.half)));
    for (const auto& r : napt::detail::regions_2d(s.pieces(), half)) {
      std::vector<std::pair<double, double>> poly;
      for (const auto& v : r.cell) poly.emplace_back(w.x(v.x.to_double()), w.y(v.y.to_double()));
      c.polygon(poly, detail::colour(r.piece));
    }
  } else {
    const Rational half(static_cast<long>(std::floor(w.half)));
    std::vector<Rational> xs{-half, half};
    for (const auto& p : pts) xs.push_back(p[0]);
    std::sort(xs.begin(), xs.end());
    Rational span(0);
    for (const auto& x : xs) span = max(span, u.eval({x}).abs());
    const double vscale = span.is_zero() ? 0.0 : 0.4 * w.size / 2 / span.to_double();
    std::vector<std::pair<double, double>> line;
    for (const auto& x : xs) line.emplace_back(w.x(x.to_double()), w.y(0) - vscale * u.eval({x}).to_double());
    detail::axes(c, w, false);
    c.polyline(line);
  }
  for (const auto& [p, m] : mu.atoms()) c.disc(w.x(p[0].to_double()), w.y(n == 2 ? p[1].to_double() : 0.0), m, point_label(p));
  return c.str();
}

}  // namespace napt::svg
