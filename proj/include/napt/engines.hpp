#pragma once

// Adapters exposing the graph, toric and intersection-data back ends through
// the common engine interface used by the energy functionals and estimates.

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "napt/energy.hpp"
#include "napt/graph_engine.hpp"
#include "napt/model_algebra.hpp"
#include "napt/pl_metric.hpp"
#include "napt/toric.hpp"
#include "napt/toric_solver.hpp"

namespace napt {

/// Metric graphs (n = 1); metrics are PL functions relative to phi_ref = 0.
class GraphEngine {
 public:
  using metric_type = PLMetric;
  using measure_type = GraphMeasure;

  explicit GraphEngine(std::shared_ptr<const MetricGraph> g) : graph_(std::move(g)) { require_valid(*graph_); }

  const std::shared_ptr<const MetricGraph>& graph() const { return graph_; }
  std::size_t dimension() const { return 1; }
  PLMetric reference() const { return PLMetric::constant(graph_, Rational(0)); }
  GraphMeasure ma_mixed(std::span<const PLMetric> us) const {
    if (us.size() != 1) throw std::domain_error("mixed Monge-Ampère needs exactly n metrics");
    return ma_signed(us[0]);
  }
  Rational integrate(const PLMetric& u, const GraphMeasure& mu) const {
    return mu.integrate([&](const GraphPoint& p) { return u.eval(p); });
  }
  PLMetric combine(std::span<const PLMetric> us, std::span<const Rational> cs) const {
    return linear_combination(cs, us);
  }
  Rational sup(const PLMetric& u) const { return u.sup(); }
  bool is_psh(const PLMetric& u) const { return napt::is_psh(u).psh; }
  std::optional<Rational> reference_defect() const { return napt::reference_defect(*graph_); }
  PLMetric solve(const GraphMeasure& mu) const { return napt::solve(mu, graph_); }

 private:
  std::shared_ptr<const MetricGraph> graph_;
};

/// Tropical metrics on R^n (n = 1, 2); phi_ref is the support function h_P.
class ToricEngine {
 public:
  using metric_type = TropicalMetric;
  using measure_type = ToricMeasure;

  explicit ToricEngine(std::shared_ptr<const LatticePolytope> p)
      : poly_(std::move(p)), cache_(std::make_shared<Cache>()) {}

  const std::shared_ptr<const LatticePolytope>& polytope() const { return poly_; }
  std::size_t dimension() const { return poly_->dimension(); }
  TropicalMetric reference() const { return TropicalMetric::support_function(poly_); }

  /// Mixed measures are memoized by the canonical keys of their arguments.
  ToricMeasure ma_mixed(std::span<const TropicalMetric> us) const {
    std::vector<std::string> keys;
    for (const auto& u : us) keys.push_back(u.key());
    std::sort(keys.begin(), keys.end());
    std::string key;
    for (const auto& k : keys) key += k + "|";
    {
      std::lock_guard lock(cache_->mutex);
      auto it = cache_->measures.find(key);
      if (it != cache_->measures.end()) return it->second;
    }
    std::vector<TropicalMetric> simple;
    for (const auto& u : us) simple.push_back(u.simplified());
    ToricMeasure mu = t_ma_mixed(simple);
    std::lock_guard lock(cache_->mutex);
    cache_->measures.emplace(std::move(key), mu);
    return mu;
  }

  Rational integrate(const TropicalMetric& u, const ToricMeasure& mu) const {
    return mu.integrate([&](const TPoint& w) { return u.eval(w) - poly_->support(w); });
  }
  TropicalMetric combine(std::span<const TropicalMetric> us, std::span<const Rational> cs) const {
    return t_convex_combination(us, cs);
  }
  Rational sup(const TropicalMetric& u) const { return t_sup_minus_reference(u); }
  bool is_psh(const TropicalMetric&) const { return true; }
  /// h_P is the largest metric with value 0 at the origin, so D = 0.
  std::optional<Rational> reference_defect() const { return Rational(0); }
  TropicalMetric solve(const ToricMeasure& mu) const { return t_solve(mu, poly_).metric; }

 private:
  struct Cache {
    std::mutex mutex;
    std::map<std::string, ToricMeasure> measures;
  };
  std::shared_ptr<const LatticePolytope> poly_;
  std::shared_ptr<Cache> cache_;
};

/// Intersection-data back end.
class AlgebraEngine {
 public:
  using metric_type = ModelMetric;
  using measure_type = AlgebraMeasure;

  explicit AlgebraEngine(std::shared_ptr<const RestrictionAlgebra> a) : alg_(std::move(a)) {}

  const RestrictionAlgebra& algebra() const { return *alg_; }
  std::size_t dimension() const { return alg_->dimension(); }
  ModelMetric reference() const { return alg_->zero(); }
  AlgebraMeasure ma_mixed(std::span<const ModelMetric> us) const { return a_ma_mixed(us, *alg_); }
  Rational integrate(const ModelMetric& u, const AlgebraMeasure& mu) const { return a_integrate(u, mu, *alg_); }
  ModelMetric combine(std::span<const ModelMetric> us, std::span<const Rational> cs) const {
    return a_combine(us, cs);
  }
  Rational sup(const ModelMetric& u) const { return a_sup(u, *alg_); }
  bool is_psh(const ModelMetric& u) const { return a_is_psh(u, *alg_); }
  std::optional<Rational> reference_defect() const { return a_reference_defect(*alg_); }
  ModelMetric solve(const AlgebraMeasure& mu) const { return a_solve(mu, *alg_); }

 private:
  std::shared_ptr<const RestrictionAlgebra> alg_;
};

static_assert(SolvingEngine<GraphEngine>);
static_assert(SolvingEngine<ToricEngine>);
static_assert(SolvingEngine<AlgebraEngine>);

}  // namespace napt
