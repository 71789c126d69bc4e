#pragma once

// Monge-Ampère calculus from intersection data. Each component j of a model
// carries a multiplicity b_j and a symmetric n-linear table R_j over the basis
// {L, D_1, ..., D_k}; masses are R_j(L + m_1, ..., L + m_n) / V.

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "napt/exact_linalg.hpp"
#include "napt/graph.hpp"
#include "napt/graph_engine.hpp"
#include "napt/measure.hpp"
#include "napt/pl_metric.hpp"

namespace napt {

/// A table entry contradicts the symmetry of the restriction tables.
class InvariantError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct Component {
  std::string name;
  Rational multiplicity;
};

/// phi_ref + sum_i d_i D_i + c.
struct ModelMetric {
  std::vector<Rational> d;
  Rational c;
  friend bool operator==(const ModelMetric&, const ModelMetric&) = default;
};

using AlgebraMeasure = AtomicMeasure<std::size_t>;

class RestrictionAlgebra {
 public:
  /// Sorted basis indices; 0 is L, i + 1 is D_i.
  using Key = std::vector<std::size_t>;

  RestrictionAlgebra(std::size_t n, Rational degree, std::vector<Component> components)
      : n_(n), degree_(std::move(degree)), components_(std::move(components)), tables_(components_.size()) {
    if (n_ == 0) throw std::domain_error("dimension must be positive");
    const std::size_t k = components_.size();
    values_.assign(k, std::vector<Rational>(k));
    for (std::size_t j = 0; j < k; ++j)
      if (components_[j].multiplicity.sign() > 0) values_[j][j] = Rational(1) / components_[j].multiplicity;
  }

  std::size_t dimension() const { return n_; }
  const Rational& degree() const { return degree_; }
  std::size_t size() const { return components_.size(); }
  const std::vector<Component>& components() const { return components_; }
  const std::map<Key, Rational>& table(std::size_t j) const { return tables_.at(j); }

  std::optional<std::size_t> component_index(const std::string& name) const {
    for (std::size_t j = 0; j < components_.size(); ++j)
      if (components_[j].name == name) return j;
    return std::nullopt;
  }

  /// Records R_j(args) = value. Permuted repeats must agree.
  void set_entry(std::size_t j, Key args, const Rational& value) {
    if (args.size() != n_) throw std::domain_error("table entry needs exactly n arguments");
    for (auto a : args)
      if (a > components_.size()) throw std::domain_error("table entry refers to an unknown basis element");
    std::sort(args.begin(), args.end());
    auto [it, inserted] = tables_.at(j).try_emplace(args, value);
    if (!inserted && it->second != value)
      throw InvariantError("restriction table of '" + components_[j].name + "' is not symmetric");
  }

  Rational entry(std::size_t j, Key args) const {
    std::sort(args.begin(), args.end());
    auto it = tables_.at(j).find(args);
    return it == tables_[j].end() ? Rational(0) : it->second;
  }

  /// W[i][j]: value of D_i at the point x_j.
  void set_value(std::size_t i, std::size_t j, const Rational& v) { values_.at(j).at(i) = v; }
  const Rational& value_table(std::size_t i, std::size_t j) const { return values_.at(j).at(i); }

  Rational value_at(const ModelMetric& m, std::size_t j) const {
    Rational v = m.c;
    for (std::size_t i = 0; i < m.d.size(); ++i) v += m.d[i] * values_[j][i];
    return v;
  }

  ModelMetric zero() const { return {std::vector<Rational>(components_.size()), Rational(0)}; }

 private:
  std::size_t n_;
  Rational degree_;
  std::vector<Component> components_;
  std::vector<std::map<Key, Rational>> tables_;
  std::vector<std::vector<Rational>> values_;  // [j][i]
};

namespace detail {

// sum over distinct orderings of `key` of prod_s v_s[key_s].
inline Rational permuted_product(RestrictionAlgebra::Key key, const std::vector<std::vector<Rational>>& v) {
  Rational total;
  do {
    Rational p(1);
    for (std::size_t s = 0; s < key.size() && !p.is_zero(); ++s) p *= v[s][key[s]];
    total += p;
  } while (std::next_permutation(key.begin(), key.end()));
  return total;
}

inline std::vector<Rational> basis_vector(const ModelMetric& m) {
  std::vector<Rational> v{Rational(1)};
  v.insert(v.end(), m.d.begin(), m.d.end());
  return v;
}

}  // namespace detail

/// Atom at x_j with mass R_j(L + m_1, ..., L + m_n) / V (signed in general).
inline AlgebraMeasure a_ma_mixed(std::span<const ModelMetric> ms, const RestrictionAlgebra& alg) {
  if (ms.size() != alg.dimension()) throw std::domain_error("mixed Monge-Ampère needs exactly n metrics");
  std::vector<std::vector<Rational>> v;
  for (const auto& m : ms) {
    if (m.d.size() != alg.size()) throw std::domain_error("metric coefficient count mismatch");
    v.push_back(detail::basis_vector(m));
  }
  AlgebraMeasure out;
  for (std::size_t j = 0; j < alg.size(); ++j) {
    Rational mass;
    for (const auto& [key, r] : alg.table(j)) mass += r * detail::permuted_product(key, v);
    out.add_atom(j, mass / alg.degree());
  }
  return out;
}

inline AlgebraMeasure a_ma(const ModelMetric& m, const RestrictionAlgebra& alg) {
  std::vector<ModelMetric> ms(alg.dimension(), m);
  return a_ma_mixed(ms, alg);
}

inline Rational a_integrate(const ModelMetric& m, const AlgebraMeasure& mu, const RestrictionAlgebra& alg) {
  return mu.integrate([&](std::size_t j) { return alg.value_at(m, j); });
}

inline ModelMetric a_combine(std::span<const ModelMetric> ms, std::span<const Rational> cs) {
  if (ms.empty() || ms.size() != cs.size()) throw std::invalid_argument("coefficient count mismatch");
  ModelMetric out{std::vector<Rational>(ms.front().d.size()), Rational(0)};
  for (std::size_t s = 0; s < ms.size(); ++s) {
    for (std::size_t i = 0; i < out.d.size(); ++i) out.d[i] += cs[s] * ms[s].d[i];
    out.c += cs[s] * ms[s].c;
  }
  return out;
}

struct AlgebraReport {
  std::vector<std::string> diagnostics;
  bool symmetric_pairing = true;  // integration by parts holds
  bool degree_zero = true;        // sum_j R_j(...) = 0 whenever some D_i appears
  bool positive_semidefinite = true;
  bool geometric() const {
    return diagnostics.empty() && symmetric_pairing && degree_zero && positive_semidefinite;
  }
};

/// Q[a][b] = -sum_j W[a][j] R_j(D_b, L, ..., L).
inline linalg::Matrix a_pairing(const RestrictionAlgebra& alg) {
  const std::size_t k = alg.size();
  linalg::Matrix q(k, linalg::Vector(k));
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) {
      RestrictionAlgebra::Key key(alg.dimension(), 0);
      key[0] = b + 1;
      for (std::size_t j = 0; j < k; ++j) q[a][b] -= alg.value_table(a, j) * alg.entry(j, key);
    }
  return q;
}

inline AlgebraReport a_validate(const RestrictionAlgebra& alg) {
  AlgebraReport r;
  if (alg.degree().sign() <= 0) r.diagnostics.push_back("degree V must be positive");
  Rational total;
  const RestrictionAlgebra::Key top(alg.dimension(), 0);
  for (std::size_t j = 0; j < alg.size(); ++j) {
    const auto& c = alg.components()[j];
    if (c.multiplicity.sign() <= 0) r.diagnostics.push_back("multiplicity of '" + c.name + "' must be positive");
    Rational t = alg.entry(j, top);
    if (t.sign() < 0) r.diagnostics.push_back("R(L,...,L) of '" + c.name + "' is negative");
    total += t;
  }
  if (total != alg.degree()) r.diagnostics.push_back("total mass law fails: sum of R(L,...,L) ≠ V");

  std::map<RestrictionAlgebra::Key, Rational> column_sums;
  for (std::size_t j = 0; j < alg.size(); ++j)
    for (const auto& [key, v] : alg.table(j))
      if (key.back() != 0) column_sums[key] += v;
  for (const auto& [key, s] : column_sums)
    if (!s.is_zero()) r.degree_zero = false;

  auto q = a_pairing(alg);
  for (std::size_t a = 0; a < q.size(); ++a)
    for (std::size_t b = 0; b < a; ++b)
      if (q[a][b] != q[b][a]) r.symmetric_pairing = false;
  auto sym = q;
  for (std::size_t a = 0; a < q.size(); ++a)
    for (std::size_t b = 0; b < q.size(); ++b) sym[a][b] = (q[a][b] + q[b][a]) / Rational(2);
  r.positive_semidefinite = linalg::is_positive_semidefinite(sym);
  return r;
}

/// Nef test: every mass of a_ma(m) nonnegative. Exact characterization at
/// n = 1, a necessary condition otherwise.
inline bool a_is_psh(const ModelMetric& m, const RestrictionAlgebra& alg) { return a_ma(m, alg).is_positive(); }

/// sup(phi - phi_ref) over the component points.
inline Rational a_sup(const ModelMetric& m, const RestrictionAlgebra& alg) {
  Rational best = alg.value_at(m, 0);
  for (std::size_t j = 0; j < alg.size(); ++j) best = max(best, alg.value_at(m, j));
  return best;
}

/// Algebra of a metric graph: one component per vertex (b = 1), R_j(L) = r_j,
/// R_j(D_i) = weighted Laplacian entry. Vertex-affine PL metrics correspond to
/// the coefficient vector of their vertex values.
/// n = 1: the model metric with a_ma = mu, pinned by d_0 = 0 and sup = 0.
inline ModelMetric a_solve(const AlgebraMeasure& mu, const RestrictionAlgebra& alg) {
  if (alg.dimension() != 1) throw std::domain_error("algebra solver needs n = 1");
  if (!mu.is_probability()) throw std::domain_error("measure is not a probability measure");
  const std::size_t k = alg.size();
  linalg::Matrix a(k, linalg::Vector(k));
  linalg::Vector b(k);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < k; ++i) a[j][i] = alg.entry(j, {i + 1});
    b[j] = alg.degree() * mu.mass_at(j) - alg.entry(j, {0});
  }
  a[0].assign(k, Rational(0));
  a[0][0] = Rational(1);
  b[0] = Rational(0);
  ModelMetric m{linalg::solve(a, b), Rational(0)};
  if (a_ma(m, alg) != mu) throw std::domain_error("measure is not in the range of the algebra");
  m.c = -a_sup(m, alg);
  return m;
}

inline RestrictionAlgebra export_graph_algebra(const MetricGraph& g) {
  std::vector<Component> comps;
  for (const auto& name : g.vertex_names()) comps.push_back({name, Rational(1)});
  RestrictionAlgebra alg(1, g.degree(), std::move(comps));
  auto lap = detail::laplacian_matrix(g);
  for (std::size_t j = 0; j < g.vertex_count(); ++j) {
    if (!g.reference_mass(j).is_zero()) alg.set_entry(j, {0}, g.reference_mass(j));
    for (std::size_t i = 0; i < g.vertex_count(); ++i)
      if (!lap[j][i].is_zero()) alg.set_entry(j, {i + 1}, lap[j][i]);
  }
  return alg;
}

inline ModelMetric model_metric_from_pl(const PLMetric& u) {
  for (std::size_t e = 0; e < u.host().edge_count(); ++e)
    if (!u.breakpoints(e).empty()) throw std::domain_error("metric has breakpoints; subdivide the graph first");
  return {u.vertex_values(), Rational(0)};
}

/// Best constant in sup(u) - int u MA(phi_ref) <= D over psh u (n = 1), by one
/// LP per candidate maximizer. Empty when some LP is unbounded.
inline std::optional<Rational> a_reference_defect(const RestrictionAlgebra& alg) {
  if (alg.dimension() != 1) return std::nullopt;
  const std::size_t k = alg.size();
  // x = (d+, d-), u_j = sum_i W[i][j] (d+_i - d-_i).
  auto u_row = [&](std::size_t j, const Rational& sign) {
    linalg::Vector row(2 * k);
    for (std::size_t i = 0; i < k; ++i) {
      row[i] = sign * alg.value_table(i, j);
      row[k + i] = -sign * alg.value_table(i, j);
    }
    return row;
  };
  Rational best(0);
  for (std::size_t top = 0; top < k; ++top) {
    linalg::Matrix a;
    linalg::Vector b;
    for (std::size_t j = 0; j < k; ++j) {
      a.push_back(u_row(j, Rational(1)));  // u_j <= 0
      b.emplace_back(0);
    }
    a.push_back(u_row(top, Rational(-1)));  // u_top >= 0
    b.emplace_back(0);
    for (std::size_t j = 0; j < k; ++j) {  // r_j + sum_i R_j(D_i) d_i >= 0
      linalg::Vector row(2 * k);
      for (std::size_t i = 0; i < k; ++i) {
        Rational r = alg.entry(j, {i + 1});
        row[i] = -r;
        row[k + i] = r;
      }
      a.push_back(std::move(row));
      b.push_back(alg.entry(j, {0}));
      if (b.back().sign() < 0) return std::nullopt;
    }
    linalg::Vector c(2 * k);
    for (std::size_t j = 0; j < k; ++j) {
      Rational w = -alg.entry(j, {0}) / alg.degree();
      auto row = u_row(j, Rational(1));
      for (std::size_t x = 0; x < 2 * k; ++x) c[x] += w * row[x];
    }
    auto res = linalg::maximize(a, b, c);
    if (!res.bounded) return std::nullopt;
    best = max(best, res.objective);
  }
  return best;
}

}  // namespace napt
