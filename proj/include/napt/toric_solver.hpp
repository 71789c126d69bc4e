#pragma once

// Calabi-Yau solver on the toric side: find a tropical metric u with
// t_ma(u) = mu for an atomic probability measure mu. For n = 1 the solution
// is written down exactly; for n = 2 the values psi_i = u(w_i) maximize the
// concave functional F_mu by damped Newton steps on exact Laguerre cells.

#include <Eigen/Dense>

#include <cmath>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "napt/toric.hpp"

namespace napt {

/// Thrown when the prescribed masses cannot be reached; names the worst atom.
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(const std::string& what, TPoint atom) : std::runtime_error(what), atom_(std::move(atom)) {}
  const TPoint& atom() const { return atom_; }

 private:
  TPoint atom_;
};

struct ToricSolveOptions {
  double tol = 1e-9;  // per-atom mass residual
  unsigned max_iterations = 200;
  std::optional<TPoint> center;  // slope-space point the initial cells cluster around
  Rational spread = Rational(1);  // scales the initial quadratic
};

struct ToricSolveResult {
  TropicalMetric metric;
  Rational residual;                  // max over atoms of |mass - target|
  std::vector<Rational> atom_values;  // u(w_i), same order as the atoms of mu
  std::vector<double> objective;      // F_mu after each accepted iterate
  unsigned iterations = 0;
};

namespace detail {

struct LaguerreCell {
  geom::Polygon cell;
  Rational area;
};

// C_i = {a in P : <a, w_j - w_i> <= psi_j - psi_i for all j}.
inline std::vector<LaguerreCell> laguerre_cells(const geom::Polygon& p, const std::vector<geom::Point2>& w,
                                                const std::vector<Rational>& psi) {
  std::vector<LaguerreCell> out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    geom::Polygon cell = p;
    for (std::size_t j = 0; j < w.size() && cell.size() >= 3; ++j)
      if (j != i) cell = geom::clip(cell, w[j] - w[i], psi[j] - psi[i]);
    Rational a = geom::area(cell);
    out.push_back({std::move(cell), std::move(a)});
  }
  return out;
}

// F = -(1/vol) int_P g - sum m_i psi_i + sum m_i h_P(w_i), g = max_i(<a, w_i> - psi_i).
inline Rational toric_objective(const std::vector<LaguerreCell>& cells, const std::vector<geom::Point2>& w,
                                const std::vector<Rational>& psi, const std::vector<Rational>& m,
                                const std::vector<Rational>& h, const Rational& vol) {
  Rational integral;
  for (std::size_t i = 0; i < cells.size(); ++i) integral += geom::integrate_affine(cells[i].cell, w[i], -psi[i]);
  Rational f = -integral / vol;
  for (std::size_t i = 0; i < w.size(); ++i) f += m[i] * (h[i] - psi[i]);
  return f;
}

inline double edge_shared(const geom::Polygon& cell, const geom::Point2& normal, const Rational& bound) {
  double len = 0;
  for (std::size_t k = 0; k < cell.size(); ++k) {
    const auto& a = cell[k];
    const auto& b = cell[(k + 1) % cell.size()];
    if (geom::dot(normal, a) == bound && geom::dot(normal, b) == bound)
      len += std::hypot((b.x - a.x).to_double(), (b.y - a.y).to_double());
  }
  return len;
}

inline TropicalMetric metric_from_cells(std::shared_ptr<const LatticePolytope> poly,
                                        const std::vector<LaguerreCell>& cells, const std::vector<geom::Point2>& w,
                                        const std::vector<Rational>& psi) {
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i < cells.size(); ++i)
    if (cells[i].area.sign() > 0)  // degenerate cells are not fully clipped
      for (const auto& a : cells[i].cell) pieces.push_back({from_point2(a), psi[i] - geom::dot(a, w[i])});
  TropicalMetric u = TropicalMetric(std::move(poly), std::move(pieces)).simplified();
  return u.shifted(-t_sup_minus_reference(u));
}

inline ToricSolveResult solve_interval(const ToricMeasure& mu, std::shared_ptr<const LatticePolytope> poly) {
  const Rational p0 = poly->vertices()[0][0];
  const Rational len = poly->volume();
  std::vector<Rational> w, m;
  for (const auto& [pt, mass] : mu.atoms()) {
    w.push_back(pt[0]);
    m.push_back(mass);
  }
  // Slope a_i on [w_i, w_{i+1}], a_i = p0 + len * (m_1 + ... + m_i).
  std::vector<Rational> a{p0};
  for (const auto& mi : m) a.push_back(a.back() + len * mi);
  std::vector<Rational> val{Rational(0)};
  for (std::size_t i = 0; i + 1 < w.size(); ++i) val.push_back(val[i] + a[i + 1] * (w[i + 1] - w[i]));
  std::vector<Piece> pieces{{{a[0]}, -a[0] * w[0]}};
  for (std::size_t i = 0; i < w.size(); ++i) pieces.push_back({{a[i + 1]}, val[i] - a[i + 1] * w[i]});
  TropicalMetric u(poly, std::move(pieces));
  u = u.shifted(-t_sup_minus_reference(u));
  ToricSolveResult r{u, Rational(0), {}, {}, 0};
  for (const auto& wi : w) r.atom_values.push_back(u.eval({wi}));
  return r;
}

}  // namespace detail

inline ToricSolveResult t_solve(const ToricMeasure& mu, std::shared_ptr<const LatticePolytope> poly,
                                const ToricSolveOptions& opt = {}) {
  if (!mu.is_positive()) throw std::domain_error("measure has negative masses");
  if (mu.total_mass() != Rational(1)) throw std::domain_error("measure is not a probability measure");
  const std::size_t n = poly->dimension();
  for (const auto& [w, m] : mu.atoms())
    if (w.size() != n) throw std::domain_error("atom " + point_label(w) + " has the wrong dimension");
  if (n == 1) return detail::solve_interval(mu, poly);

  std::vector<geom::Point2> w;
  std::vector<Rational> m, h;
  for (const auto& [pt, mass] : mu.atoms()) {
    w.push_back(to_point2(pt));
    m.push_back(mass);
    h.push_back(poly->support(pt));
  }
  const std::size_t k = w.size();
  const geom::Polygon p = poly->polygon();
  const Rational vol = poly->volume();

  // Initial values make the cells a scaled Voronoi diagram of the atoms
  // around `center`; shrinking the scale puts every cell inside P.
  geom::Point2 center{Rational(0), Rational(0)};
  if (opt.center) {
    center = to_point2(*opt.center);
  } else {
    for (const auto& v : p) center = center + v;
    center = Rational(1, static_cast<long>(p.size())) * center;
  }
  if (!poly->contains(from_point2(center))) throw std::domain_error("initial center lies outside P");
  geom::Point2 mean{Rational(0), Rational(0)};
  for (const auto& x : w) mean = mean + x;
  mean = Rational(1, static_cast<long>(k)) * mean;
  Rational scale = opt.spread;
  std::vector<Rational> psi(k);
  std::vector<detail::LaguerreCell> cells;
  for (int attempt = 0;; ++attempt) {
    for (std::size_t i = 0; i < k; ++i) {
      geom::Point2 d = w[i] - mean;
      psi[i] = geom::dot(center, w[i]) + scale * geom::dot(d, d) / Rational(2);
    }
    cells = detail::laguerre_cells(p, w, psi);
    bool all_positive = std::all_of(cells.begin(), cells.end(), [](const auto& c) { return c.area.sign() > 0; });
    if (all_positive) break;
    if (attempt > 200) throw InfeasibleError("could not find an initial point with nonempty cells", from_point2(w[0]));
    scale /= Rational(2);
  }

  auto gradient = [&](const std::vector<detail::LaguerreCell>& cs) {
    std::vector<Rational> g(k);
    for (std::size_t i = 0; i < k; ++i) g[i] = cs[i].area / vol - m[i];
    return g;
  };
  auto max_abs = [](const std::vector<Rational>& g) {
    Rational best;
    for (const auto& x : g) best = max(best, x.abs());
    return best;
  };

  // Cells may not drop below half the smallest initial or target mass.
  Rational floor_mass = m[0];
  for (std::size_t i = 0; i < k; ++i) floor_mass = min(floor_mass, min(m[i], cells[i].area / vol));
  floor_mass /= Rational(2);

  ToricSolveResult result;
  std::vector<Rational> g = gradient(cells);
  Rational f = detail::toric_objective(cells, w, psi, m, h, vol);
  result.objective.push_back(f.to_double());
  const Rational tol = Rational::from_double(opt.tol);

  unsigned it = 0;
  while (max_abs(g) > tol) {
    if (it++ >= opt.max_iterations) {
      std::size_t worst = 0;
      for (std::size_t i = 0; i < k; ++i)
        if (g[i].abs() > g[worst].abs()) worst = i;
      throw InfeasibleError("solver did not reach the prescribed mass at atom " + point_label(from_point2(w[worst])),
                            from_point2(w[worst]));
    }
    // Negative Hessian restricted to psi_1..psi_{k-1} (psi_0 pinned).
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        if (i == j) continue;
        double len = detail::edge_shared(cells[i].cell, w[j] - w[i], psi[j] - psi[i]);
        if (len == 0) continue;
        geom::Point2 d = w[i] - w[j];
        double coupling = len / (std::sqrt(geom::dot(d, d).to_double()) * vol.to_double());
        lap(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -= coupling;
        lap(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) += coupling;
      }
    const auto km = static_cast<Eigen::Index>(k - 1);
    Eigen::VectorXd rhs(km);
    for (Eigen::Index i = 0; i < km; ++i) rhs(i) = g[static_cast<std::size_t>(i + 1)].to_double();
    Eigen::VectorXd step = lap.bottomRightCorner(km, km).ldlt().solve(rhs);

    // Newton direction for maximizing F: grad F = g, Hessian = -lap.
    std::vector<Rational> dir(k);
    for (Eigen::Index i = 0; i < km; ++i) dir[static_cast<std::size_t>(i + 1)] = Rational::from_double(step(i));
    Rational tau(1);
    const Rational gnorm = max_abs(g);
    for (;;) {
      std::vector<Rational> trial(k);
      for (std::size_t i = 0; i < k; ++i) trial[i] = psi[i] + tau * dir[i];
      auto tc = detail::laguerre_cells(p, w, trial);
      bool big_enough = std::all_of(tc.begin(), tc.end(), [&](const auto& c) { return c.area / vol >= floor_mass; });
      if (big_enough) {
        auto tg = gradient(tc);
        Rational tf = detail::toric_objective(tc, w, trial, m, h, vol);
        if (max_abs(tg) <= (Rational(1) - tau / Rational(2)) * gnorm && tf >= f) {
          psi = std::move(trial);
          cells = std::move(tc);
          g = std::move(tg);
          f = std::move(tf);
          break;
        }
      }
      tau /= Rational(2);
      if (tau < Rational(1, 1 << 30)) {
        std::size_t worst = 0;
        for (std::size_t i = 0; i < k; ++i)
          if (g[i].abs() > g[worst].abs()) worst = i;
        throw InfeasibleError("line search stalled at atom " + point_label(from_point2(w[worst])),
                              from_point2(w[worst]));
      }
    }
    result.objective.push_back(f.to_double());
  }

  result.metric = detail::metric_from_cells(poly, cells, w, psi);
  result.residual = max_abs(g);
  result.iterations = it;
  for (const auto& x : w) result.atom_values.push_back(result.metric.eval(from_point2(x)));
  return result;
}

}  // namespace napt
