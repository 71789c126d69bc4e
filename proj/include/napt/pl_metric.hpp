#pragma once

// Continuous piecewise-affine functions on a metric graph.

#include <algorithm>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "napt/graph.hpp"
#include "napt/rational.hpp"

namespace napt {

struct Breakpoint {
  Rational offset;
  Rational value;
  friend bool operator==(const Breakpoint&, const Breakpoint&) = default;
};

/// A PL function on a metric graph: values at vertices plus interior
/// breakpoints per edge, affine in between. Represents a metric relative to
/// the reference metric.
class PLMetric {
 public:
  PLMetric() = default;

  PLMetric(std::shared_ptr<const MetricGraph> host, std::vector<Rational> vertex_values,
           std::vector<std::vector<Breakpoint>> breakpoints = {})
      : host_(std::move(host)), values_(std::move(vertex_values)), breaks_(std::move(breakpoints)) {
    if (!host_) throw std::invalid_argument("PL metric without host graph");
    if (values_.size() != host_->vertex_count()) throw std::invalid_argument("vertex value count mismatch");
    breaks_.resize(host_->edge_count());
    for (std::size_t e = 0; e < breaks_.size(); ++e) {
      const Rational& len = host_->edge(e).length;
      Rational prev(0);
      for (const auto& bp : breaks_[e]) {
        if (bp.offset <= prev || bp.offset >= len)
          throw std::invalid_argument("breakpoints on edge '" + host_->edge(e).id +
                                      "' must be strictly increasing and interior");
        prev = bp.offset;
      }
    }
  }

  static PLMetric constant(std::shared_ptr<const MetricGraph> host, const Rational& c) {
    std::vector<Rational> vals(host->vertex_count(), c);
    return PLMetric(std::move(host), std::move(vals));
  }

  const MetricGraph& host() const { return *host_; }
  const std::shared_ptr<const MetricGraph>& host_ptr() const { return host_; }
  const Rational& vertex_value(std::size_t v) const { return values_.at(v); }
  const std::vector<Rational>& vertex_values() const { return values_; }
  const std::vector<Breakpoint>& breakpoints(std::size_t e) const { return breaks_.at(e); }

  /// (0, u(tail)), interior breakpoints, (length, u(head)).
  std::vector<Breakpoint> profile(std::size_t e) const {
    const Edge& ed = host_->edge(e);
    std::vector<Breakpoint> p;
    p.reserve(breaks_[e].size() + 2);
    p.push_back({Rational(0), values_[ed.tail]});
    p.insert(p.end(), breaks_[e].begin(), breaks_[e].end());
    p.push_back({ed.length, values_[ed.head]});
    return p;
  }

  Rational eval_on_edge(std::size_t e, const Rational& offset) const {
    auto p = profile(e);
    auto it = std::lower_bound(p.begin(), p.end(), offset,
                               [](const Breakpoint& b, const Rational& x) { return b.offset < x; });
    if (it == p.end()) throw std::domain_error("offset beyond edge");
    if (it->offset == offset) return it->value;
    if (it == p.begin()) throw std::domain_error("negative offset");
    auto prev = it - 1;
    return prev->value + (it->value - prev->value) * (offset - prev->offset) / (it->offset - prev->offset);
  }

  Rational eval(const GraphPoint& p) const {
    if (p.is_vertex()) return values_.at(p.index);
    return eval_on_edge(p.index, p.offset);
  }

  /// Maximum over the graph (attained at a vertex or breakpoint).
  Rational sup() const {
    Rational s = values_.at(0);
    for (const auto& v : values_) s = max(s, v);
    for (const auto& b : breaks_)
      for (const auto& bp : b) s = max(s, bp.value);
    return s;
  }

  /// Same function with breakpoints that carry no kink removed.
  PLMetric canonical() const {
    PLMetric out = *this;
    for (std::size_t e = 0; e < breaks_.size(); ++e) {
      auto p = profile(e);
      std::vector<Breakpoint> kept;
      Breakpoint last = p.front();
      for (std::size_t i = 1; i + 1 < p.size(); ++i) {
        const auto& cur = p[i];
        const auto& next = p[i + 1];
        Rational left = (cur.value - last.value) / (cur.offset - last.offset);
        Rational right = (next.value - cur.value) / (next.offset - cur.offset);
        if (left != right) {
          kept.push_back(cur);
          last = cur;
        }
      }
      out.breaks_[e] = std::move(kept);
    }
    return out;
  }

  PLMetric shifted(const Rational& c) const {
    PLMetric out = *this;
    for (auto& v : out.values_) v += c;
    for (auto& b : out.breaks_)
      for (auto& bp : b) bp.value += c;
    return out;
  }

  /// Interior breakpoints as graph points.
  std::vector<GraphPoint> breakpoint_points() const {
    std::vector<GraphPoint> out;
    for (std::size_t e = 0; e < breaks_.size(); ++e)
      for (const auto& bp : breaks_[e]) out.push_back(GraphPoint::in_edge(e, bp.offset));
    return out;
  }

  friend bool operator==(const PLMetric& a, const PLMetric& b) {
    return a.host_ == b.host_ && a.values_ == b.values_ && a.breaks_ == b.breaks_;
  }

 private:
  std::shared_ptr<const MetricGraph> host_;
  std::vector<Rational> values_;
  std::vector<std::vector<Breakpoint>> breaks_;
};

namespace detail {

inline void require_same_host(std::span<const PLMetric> metrics) {
  if (metrics.empty()) throw std::invalid_argument("no metrics given");
  for (const auto& m : metrics)
    if (m.host_ptr() != metrics.front().host_ptr()) throw std::domain_error("metrics live on different graphs");
}

inline std::vector<Rational> merged_offsets(std::span<const PLMetric> metrics, std::size_t e) {
  std::vector<Rational> offs;
  for (const auto& m : metrics)
    for (const auto& bp : m.breakpoints(e)) offs.push_back(bp.offset);
  std::sort(offs.begin(), offs.end());
  offs.erase(std::unique(offs.begin(), offs.end()), offs.end());
  return offs;
}

}  // namespace detail

/// Sum of coeffs[i] * metrics[i]; all metrics on the same host.
inline PLMetric linear_combination(std::span<const Rational> coeffs, std::span<const PLMetric> metrics) {
  detail::require_same_host(metrics);
  if (coeffs.size() != metrics.size()) throw std::invalid_argument("coefficient count mismatch");
  const auto& host = metrics.front().host_ptr();
  std::vector<Rational> values(host->vertex_count());
  for (std::size_t v = 0; v < values.size(); ++v)
    for (std::size_t i = 0; i < metrics.size(); ++i) values[v] += coeffs[i] * metrics[i].vertex_value(v);
  std::vector<std::vector<Breakpoint>> breaks(host->edge_count());
  for (std::size_t e = 0; e < breaks.size(); ++e) {
    for (const auto& off : detail::merged_offsets(metrics, e)) {
      Rational val;
      for (std::size_t i = 0; i < metrics.size(); ++i) val += coeffs[i] * metrics[i].eval_on_edge(e, off);
      breaks[e].push_back({off, val});
    }
  }
  return PLMetric(host, std::move(values), std::move(breaks)).canonical();
}

inline PLMetric operator-(const PLMetric& a, const PLMetric& b) {
  const Rational c[] = {Rational(1), Rational(-1)};
  const PLMetric m[] = {a, b};
  return linear_combination(c, m);
}

inline PLMetric operator+(const PLMetric& a, const PLMetric& b) {
  const Rational c[] = {Rational(1), Rational(1)};
  const PLMetric m[] = {a, b};
  return linear_combination(c, m);
}

inline PLMetric operator*(const Rational& c, const PLMetric& a) {
  const Rational cs[] = {c};
  const PLMetric m[] = {a};
  return linear_combination(cs, m);
}

/// Pointwise maximum; crossing points are computed exactly.
inline PLMetric pointwise_max(std::span<const PLMetric> metrics) {
  detail::require_same_host(metrics);
  const auto& host = metrics.front().host_ptr();
  std::vector<Rational> values(host->vertex_count());
  for (std::size_t v = 0; v < values.size(); ++v) {
    values[v] = metrics.front().vertex_value(v);
    for (const auto& m : metrics) values[v] = max(values[v], m.vertex_value(v));
  }
  std::vector<std::vector<Breakpoint>> breaks(host->edge_count());
  for (std::size_t e = 0; e < breaks.size(); ++e) {
    std::vector<Rational> grid{Rational(0)};
    for (const auto& o : detail::merged_offsets(metrics, e)) grid.push_back(o);
    grid.push_back(host->edge(e).length);
    std::vector<Rational> points(grid.begin() + 1, grid.end() - 1);
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
      const Rational& x0 = grid[k];
      const Rational& x1 = grid[k + 1];
      std::vector<Rational> f0, f1;
      for (const auto& m : metrics) {
        f0.push_back(m.eval_on_edge(e, x0));
        f1.push_back(m.eval_on_edge(e, x1));
      }
      for (std::size_t i = 0; i < metrics.size(); ++i)
        for (std::size_t j = i + 1; j < metrics.size(); ++j) {
          Rational d0 = f0[i] - f0[j];
          Rational d1 = f1[i] - f1[j];
          if (d0.sign() * d1.sign() < 0) points.push_back(x0 + (x1 - x0) * d0 / (d0 - d1));
        }
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    for (const auto& x : points) {
      Rational best = metrics.front().eval_on_edge(e, x);
      for (const auto& m : metrics) best = max(best, m.eval_on_edge(e, x));
      breaks[e].push_back({x, best});
    }
  }
  return PLMetric(host, std::move(values), std::move(breaks)).canonical();
}

/// The same function on the refined graph s.target; constant on pendant edges.
inline PLMetric lift_metric(const PLMetric& u, const Subdivision& s) {
  if (u.host_ptr() != s.source) throw std::domain_error("metric does not live on the subdivision source");
  const MetricGraph& tg = *s.target;
  std::vector<Rational> values(tg.vertex_count());
  for (std::size_t v = 0; v < values.size(); ++v) values[v] = u.eval(s.vertex_image[v]);
  std::vector<std::vector<Breakpoint>> breaks(tg.edge_count());
  for (std::size_t te = 0; te < tg.edge_count(); ++te) {
    const EdgeImage& img = s.edge_image[te];
    if (img.pendant) continue;
    for (const auto& bp : u.breakpoints(img.source_edge))
      if (bp.offset > img.start && bp.offset < img.end) breaks[te].push_back({bp.offset - img.start, bp.value});
  }
  return PLMetric(s.target, std::move(values), std::move(breaks));
}

/// The restriction of a metric on s.target to the source graph. Values on
/// pendant edges are discarded.
inline PLMetric descend_metric(const PLMetric& u, const Subdivision& s) {
  if (u.host_ptr() != s.target) throw std::domain_error("metric does not live on the subdivision target");
  const MetricGraph& sg = *s.source;
  std::vector<Rational> values(sg.vertex_count());
  for (std::size_t v = 0; v < values.size(); ++v) values[v] = u.vertex_value(s.vertex_embedding[v]);
  std::vector<std::vector<Breakpoint>> breaks(sg.edge_count());
  for (std::size_t te = 0; te < s.target->edge_count(); ++te) {
    const EdgeImage& img = s.edge_image[te];
    if (img.pendant) continue;
    const Edge& ted = s.target->edge(te);
    auto& dst = breaks[img.source_edge];
    if (img.start.sign() > 0) dst.push_back({img.start, u.vertex_value(ted.tail)});
    for (const auto& bp : u.breakpoints(te)) dst.push_back({img.start + bp.offset, bp.value});
  }
  for (auto& b : breaks)
    std::sort(b.begin(), b.end(), [](const Breakpoint& x, const Breakpoint& y) { return x.offset < y.offset; });
  return PLMetric(s.source, std::move(values), std::move(breaks)).canonical();
}

}  // namespace napt
