// Acceptance run: one line per criterion, exit status 0 iff every line passes.
// All randomness is seeded; the exact engines are checked for equality, the
// toric solver against its stated tolerances.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "napt/napt.hpp"
#include "oracles.hpp"

using namespace napt;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects the first few failures of a criterion.
struct Tally {
  bool pass = true;
  std::vector<std::string> notes;
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (notes.size() < 3) notes.push_back(what);
  }
  Outcome outcome(std::string detail) const {
    for (const auto& n : notes) detail += "; " + n;
    return {pass, detail};
  }
};

class Stopwatch {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Rational r(long p, long q = 1) { return Rational(p, q); }

// Random connected graph: a spanning tree plus up to three extra edges.
std::shared_ptr<const MetricGraph> random_graph(Rng& rng, std::size_t max_vertices) {
  const std::size_t n = 2 + uniform_index(rng, max_vertices - 1);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
  auto length = [&] { return r(1 + static_cast<long>(uniform_index(rng, 3)), 1 + static_cast<long>(uniform_index(rng, 3))); };
  std::vector<Edge> edges;
  for (std::size_t i = 1; i < n; ++i) edges.push_back({"t" + std::to_string(i), uniform_index(rng, i), i, length()});
  const std::size_t extra = uniform_index(rng, 4);
  for (std::size_t k = 0; k < extra; ++k) {
    std::size_t a = uniform_index(rng, n), b = uniform_index(rng, n);
    if (a != b) edges.push_back({"x" + std::to_string(k), a, b, length()});
  }
  std::vector<Rational> ref;
  Rational total;
  for (std::size_t i = 0; i < n; ++i) {
    ref.push_back(r(static_cast<long>(uniform_index(rng, 3)), 1 + static_cast<long>(uniform_index(rng, 2))));
    total += ref.back();
  }
  if (total.is_zero()) ref[0] = r(1);
  return std::make_shared<const MetricGraph>(names, edges, ref);
}

std::shared_ptr<const MetricGraph> theta() {
  return std::make_shared<const MetricGraph>(
      std::vector<std::string>{"x", "y", "z"},
      std::vector<Edge>{{"xy", 0, 1, r(1)}, {"yz", 1, 2, r(1, 2)}, {"zx", 2, 0, r(2)}, {"xy2", 0, 1, r(3, 2)}},
      std::vector<Rational>{r(1), r(3, 2), r(1, 2)});
}

std::shared_ptr<const MetricGraph> g1() {
  return std::make_shared<const MetricGraph>(std::vector<std::string>{"a", "b"}, std::vector<Edge>{{"e", 0, 1, r(1)}},
                                             std::vector<Rational>{r(1), r(1)});
}

std::shared_ptr<const LatticePolytope> unit_square() {
  return std::make_shared<const LatticePolytope>(std::vector<TPoint>{{r(0), r(0)}, {r(1), r(0)}, {r(1), r(1)}, {r(0), r(1)}});
}

std::shared_ptr<const LatticePolytope> unit_interval() {
  return std::make_shared<const LatticePolytope>(std::vector<TPoint>{{r(0)}, {r(1)}});
}

// Arbitrary (not necessarily psh) PL function: random vertex values and at
// most one breakpoint per edge at a quarter point.
PLMetric random_pl(std::shared_ptr<const MetricGraph> g, Rng& rng) {
  std::vector<Rational> values;
  for (std::size_t v = 0; v < g->vertex_count(); ++v) values.push_back(small_rational(rng));
  std::vector<std::vector<Breakpoint>> bps(g->edge_count());
  for (std::size_t e = 0; e < g->edge_count(); ++e)
    if (uniform_index(rng, 2) == 0)
      bps[e].push_back({g->edge(e).length * r(1 + static_cast<long>(uniform_index(rng, 3)), 4), small_rational(rng)});
  return PLMetric(g, values, bps);
}

bool is_constant(const PLMetric& f) { return f.sup() == -(r(-1) * f).sup(); }

Rational sup_abs(const PLMetric& f) { return max(f.sup(), (r(-1) * f).sup()); }

// Grid containing every breakpoint of the given functions and k cells per edge.
Subdivision common_grid(std::shared_ptr<const MetricGraph> g, std::initializer_list<const PLMetric*> fs, unsigned k) {
  std::vector<GraphPoint> pts;
  for (const auto* f : fs)
    for (const auto& p : f->breakpoint_points()) pts.push_back(p);
  for (std::size_t e = 0; e < g->edge_count(); ++e)
    for (unsigned i = 1; i < k; ++i) pts.push_back(GraphPoint::in_edge(e, g->edge(e).length * r(i, k)));
  return subdivide(g, pts);
}

Rational lagrange(const std::vector<Rational>& xs, const std::vector<Rational>& ys, const Rational& x) {
  Rational out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    Rational term = ys[i];
    for (std::size_t j = 0; j < xs.size(); ++j)
      if (j != i) term *= (x - xs[j]) / (xs[i] - xs[j]);
    out += term;
  }
  return out;
}

// Sum of two max/min trees: addition distributes over max and min.
PLExpr add(const PLExpr& a, const PLExpr& b) {
  if (b.op == PLExpr::Op::affine) {
    if (a.op == PLExpr::Op::affine) {
      TPoint s = a.slope;
      for (std::size_t k = 0; k < s.size(); ++k) s[k] += b.slope[k];
      return PLExpr::affine(s, a.constant + b.constant);
    }
    std::vector<PLExpr> kids;
    for (const auto& c : a.children) kids.push_back(add(c, b));
    return a.op == PLExpr::Op::max ? PLExpr::max_of(kids) : PLExpr::min_of(kids);
  }
  std::vector<PLExpr> kids;
  for (const auto& c : b.children) kids.push_back(add(a, c));
  return b.op == PLExpr::Op::max ? PLExpr::max_of(kids) : PLExpr::min_of(kids);
}

PLExpr scale(const PLExpr& e, const Rational& t) {
  if (e.op == PLExpr::Op::affine) {
    TPoint s = e.slope;
    for (auto& c : s) c *= t;
    return PLExpr::affine(s, e.constant * t);
  }
  std::vector<PLExpr> kids;
  for (const auto& c : e.children) kids.push_back(scale(c, t));
  return e.op == PLExpr::Op::max ? PLExpr::max_of(kids) : PLExpr::min_of(kids);
}

// ---------------------------------------------------------------------------

Outcome identities() {
  Stopwatch clock;
  Tally t;
  Rng rng(101);
  for (int i = 0; i < 200; ++i) {
    GraphEngine eng(random_graph(rng, 8));
    const PLMetric u = random_psh(eng, rng), v = random_psh(eng, rng), w = random_psh(eng, rng);
    t.expect(laplacian(u).total_mass().is_zero(), "Laplacian mass");
    t.expect(ma(u).total_mass() == r(1), "ma total");
    t.expect(ma(u.shifted(small_rational(rng))) == ma(u), "ma(u + c)");
    auto against = [](const PLMetric& f, const GraphMeasure& mu) { return mu.integrate([&](const GraphPoint& p) { return f.eval(p); }); };
    t.expect(against(u, laplacian(v)) == against(v, laplacian(u)), "integration by parts");
    const PLMetric f = u - v;
    const Rational cs = -against(f, laplacian(f));
    t.expect(cs.sign() >= 0 && (cs.is_zero() == is_constant(f)), "Cauchy-Schwarz");
    t.expect(against(u.shifted(r(1)) - u, laplacian(u.shifted(r(1)) - u)).is_zero(), "Cauchy-Schwarz equality");
    t.expect(cocycle_defect(eng, u, v, w).is_zero(), "cocycle");
  }
  GraphEngine eng(theta());
  auto rep = check_identities(eng, draw_samples(eng, 200, 5));
  t.expect(rep.passed() && rep.records.size() == 5u * 200u, "identity battery");
  const double s = clock.seconds();
  t.expect(s < 5.0, "runtime " + fmt("%.2f s", s));
  return t.outcome("200 random graphs + 200 battery samples, " + fmt("%.2f s", s));
}

Outcome g1_numerics() {
  Tally t;
  auto g = g1();
  GraphEngine eng(g);
  const PLMetric v(g, {r(0), r(0)}, {{{r(1, 2), r(-1, 2)}}});
  const PLMetric ref = eng.reference();
  auto rep = energy_report(eng, v, ref);
  auto orc = oracle::quadratic_form_energies(v, ref);
  t.expect(rep.E == r(-1, 4) && orc.E == r(-1, 4), "E");
  t.expect(rep.I == r(1, 2) && orc.I == r(1, 2), "I");
  t.expect(rep.J == r(1, 4) && orc.J == r(1, 4), "J");
  t.expect(rep.I == r(2) * rep.J, "I = 2J");
  GraphMeasure dm;
  dm.add_atom(g->point(0, r(1, 2)), r(1));
  t.expect(solve(dm, g) == v, "solve(delta_m)");
  t.expect(measure_energy(eng, dm) == r(1, 4) && orc.I - orc.J == r(1, 4), "E*(delta_m)");
  return t.outcome("E = " + rep.E.str() + ", I = " + rep.I.str() + ", J = " + rep.J.str() +
                   ", E*(delta_m) = " + measure_energy(eng, dm).str());
}

Outcome solver_round_trips() {
  Stopwatch clock;
  Tally t;
  Rng rng(202);
  for (int i = 0; i < 100; ++i) {
    auto g = random_graph(rng, 12);
    auto mu = random_graph_measure(*g, rng, 4);
    t.expect(ma(solve(mu, g)) == mu, "ma(solve(mu)) on sample " + std::to_string(i));
  }
  for (int i = 0; i < 100; ++i) {
    GraphEngine eng(random_graph(rng, 12));
    const PLMetric u = random_psh(eng, rng);
    t.expect(is_constant(solve(ma(u), eng.graph()) - u), "solve(ma(u)) on sample " + std::to_string(i));
  }
  const double s = clock.seconds();
  t.expect(s < 10.0, "runtime " + fmt("%.2f s", s));
  return t.outcome("100 + 100 exact round trips, " + fmt("%.2f s", s));
}

Outcome battery() {
  Stopwatch clock;
  Tally t;
  double worst = 1e300;
  auto absorb = [&](const EstimateReport& rep, const char* what) {
    t.expect(rep.passed(), std::string(what) + " violated");
    t.expect(rep.notes.empty(), std::string(what) + " skipped estimates");
    for (const auto& [name, s] : rep.summary()) {
      worst = std::min(worst, s.min_margin);
      t.expect(s.min_margin >= 0, std::string(what) + " " + name + " margin " + fmt("%g", s.min_margin));
    }
    t.expect(rep.summary().size() == 18u, std::string(what) + " incomplete");
  };
  GraphEngine graph(theta());
  absorb(check_estimates(graph, draw_samples(graph, 500, 404)), "graph");
  ToricEngine toric(unit_square());
  absorb(check_estimates(toric, draw_samples(toric, 100, 405), {Rational(1, 100000000), std::nullopt}), "toric");
  const double s = clock.seconds();
  t.expect(s < 60.0, "runtime " + fmt("%.2f s", s));
  return t.outcome("500 graph + 100 toric tuples, 18 estimates, min margin " + fmt("%g", worst) + ", " +
                   fmt("%.2f s", s));
}

Outcome envelopes() {
  Tally t;
  Rng rng(505);
  auto g = theta();
  GraphEngine eng(g);
  double worst_fd = 0;
  for (int i = 0; i < 15; ++i) {
    const PLMetric u = random_psh(eng, rng);
    t.expect(envelope(u, common_grid(g, {&u}, 1)) == u, "idempotence");

    const PLMetric psi = random_pl(g, rng), other = random_pl(g, rng);
    const PLMetric bigger = pointwise_max(std::vector<PLMetric>{psi, other});
    auto grid = common_grid(g, {&psi, &other, &bigger}, 4);
    const PLMetric p = envelope(psi, grid), po = envelope(other, grid), pb = envelope(bigger, grid);
    const Rational gap = sup_abs(psi - other);
    for (const auto& x : grid.vertex_image) {
      t.expect(p.eval(x) <= pb.eval(x), "monotonicity");
      t.expect((p.eval(x) - po.eval(x)).abs() <= gap, "1-Lipschitz");
      t.expect(p.eval(x) <= psi.eval(x), "below the obstacle");
    }
    t.expect(orthogonality_defect(psi, grid).is_zero(), "graph orthogonality");

    const PLMetric f = random_pl(g, rng);
    auto fgrid = common_grid(g, {&psi, &f}, 4);
    const PLMetric p0 = envelope(psi, fgrid);
    const Rational slope = ma(p0).integrate([&](const GraphPoint& x) { return f.eval(x); });
    for (const Rational& step : {r(1, 100), r(1, 1000)}) {
      const PLMetric moved = psi + step * f;
      const Rational fd = (energy_E(eng, envelope(moved, fgrid)) - energy_E(eng, p0)) / step;
      const double err = (fd - slope).abs().to_double();
      worst_fd = std::max(worst_fd, err / step.to_double());
      t.expect(err <= 10 * step.to_double(), "graph E o P derivative");
    }
  }

  for (auto poly : {unit_interval(), unit_square()}) {
    ToricEngine teng(poly);
    const std::size_t n = poly->dimension();
    for (int i = 0; i < 6; ++i) {
      const TropicalMetric u = random_psh(teng, rng);
      t.expect(t_envelope(PLExpr::from_metric(u), poly) == u, "toric idempotence");
      const PLExpr psi = PLExpr::min_of({PLExpr::from_metric(random_psh(teng, rng)), PLExpr::from_metric(u)});
      const PLExpr lower = PLExpr::min_of({psi, PLExpr::from_metric(random_psh(teng, rng))});
      const TropicalMetric p = t_envelope(psi, poly), pl = t_envelope(lower, poly);
      t.expect(t_orthogonality_defect(psi, poly).abs().to_double() <= 1e-8, "toric orthogonality");
      for (int k = 0; k < 12; ++k) {
        TPoint w;
        for (std::size_t c = 0; c < n; ++c) w.push_back(small_rational(rng));
        t.expect(pl.eval(w) <= p.eval(w), "toric monotonicity");
        t.expect(p.eval(w) <= psi.eval(w), "toric below the obstacle");
      }
      // Bounded perturbation max(c0, min(c1, <a, w> + b)).
      TPoint a;
      for (std::size_t c = 0; c < n; ++c) a.push_back(small_rational(rng));
      const Rational c0 = small_rational(rng);
      const PLExpr f = PLExpr::max_of({PLExpr::affine(TPoint(n), c0),
                                       PLExpr::min_of({PLExpr::affine(TPoint(n), c0 + r(1)), PLExpr::affine(a, small_rational(rng))})});
      const Rational slope = t_ma(p).integrate([&](const TPoint& w) { return f.eval(w); });
      for (const Rational& step : {r(1, 100), r(1, 1000)}) {
        const TropicalMetric moved = t_envelope(add(psi, scale(f, step)), poly);
        const Rational fd = (energy_E(teng, moved) - energy_E(teng, p)) / step;
        const double err = (fd - slope).abs().to_double();
        worst_fd = std::max(worst_fd, err / step.to_double());
        t.expect(err <= 10 * step.to_double(), "toric E o P derivative");
      }
    }
  }
  return t.outcome("15 graph + 12 toric obstacles, worst |FD - integral| / t = " + fmt("%.3g", worst_fd));
}

Outcome toric_oracles() {
  Tally t;
  Rng rng(606);
  auto rnd = [&](int lo, int hi, int den) { return r(lo + static_cast<long>(uniform_index(rng, hi - lo + 1)), den); };
  auto seg = unit_interval();
  for (int i = 0; i < 50; ++i) {
    std::vector<Piece> pieces{{{r(0)}, rnd(-3, 3, 2)}, {{r(1)}, rnd(-3, 3, 2)}};
    for (int k = 0; k < 3; ++k) pieces.push_back({{rnd(0, 6, 6)}, rnd(-6, 6, 3)});
    TropicalMetric u(seg, pieces);
    t.expect(t_ma(u) == oracle::slope_jump_masses(pieces, r(1)), "n = 1 slope jumps");
  }
  auto tri = std::make_shared<const LatticePolytope>(std::vector<TPoint>{{r(0), r(0)}, {r(2), r(0)}, {r(0), r(2)}});
  auto sq = unit_square();
  for (int i = 0; i < 50; ++i) {
    auto poly = i % 2 ? tri : sq;
    std::vector<Piece> pieces;
    for (const auto& v : poly->vertices()) pieces.push_back({v, rnd(-4, 4, 3)});
    if (poly == tri) pieces.push_back({{rnd(0, 2, 3), rnd(0, 2, 3)}, rnd(-4, 4, 2)});
    TropicalMetric u(poly, pieces);
    const ToricMeasure m = t_ma(u);
    t.expect(m == oracle::halfplane_masses(pieces, poly->volume()), "n = 2 areas");
    t.expect(m.total_mass() == r(1), "total mass");
  }
  for (auto poly : {seg, sq, tri}) {
    ToricEngine eng(poly);
    for (int i = 0; i < 8; ++i) {
      const TropicalMetric u = random_psh(eng, rng);
      t.expect(energy_E(eng, u) == oracle::legendre_energy(u.pieces(), poly->volume()), "E against Legendre");
      for (const Rational& s : {r(1, 3), r(2), r(5, 2)}) {
        const TropicalMetric us = t_scale(u, s);
        t.expect(t_ma(us) == scale_points(t_ma(u), s), "scaling of t_ma");
        t.expect(energy_E(eng, us) == s * energy_E(eng, u), "E(u_t) = t E(u)");
      }
    }
  }
  return t.outcome("100 oracle comparisons, 72 scalings, exact");
}

Outcome toric_solver() {
  Stopwatch clock;
  Tally t;
  Rng rng(707);
  auto sq = unit_square();
  double worst_res = 0, worst_spread = 0;
  for (int i = 0; i < 20; ++i) {
    const ToricMeasure mu = random_toric_measure(2, rng, 8);
    const auto a = t_solve(mu, sq);
    worst_res = std::max(worst_res, a.residual.to_double());
    t.expect(a.residual.to_double() <= 1e-9, "residual on measure " + std::to_string(i));
    for (std::size_t k = 1; k < a.objective.size(); ++k) t.expect(a.objective[k] >= a.objective[k - 1], "F decreased");
    ToricSolveOptions other;
    other.center = TPoint{r(1, 4), r(2, 3)};
    other.spread = r(1, 3);
    const auto b = t_solve(mu, sq, other);
    double lo = 1e300, hi = -1e300;
    for (std::size_t k = 0; k < a.atom_values.size(); ++k) {
      const double d = (a.atom_values[k] - b.atom_values[k]).to_double();
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    worst_spread = std::max(worst_spread, hi - lo);
    t.expect(hi - lo <= 1e-7, "uniqueness on measure " + std::to_string(i));
  }
  const double s = clock.seconds();
  t.expect(s < 30.0, "runtime " + fmt("%.2f s", s));
  return t.outcome("20 measures, max residual " + fmt("%.2g", worst_res) + ", max disagreement " +
                   fmt("%.2g", worst_spread) + ", " + fmt("%.2f s", s));
}

Outcome smoothing() {
  Tally t;
  Rng rng(808);
  for (int trial = 0; trial < 12; ++trial) {
    // X0 -> X1 -> ... -> X5, each step inserting a point and attaching a pendant.
    std::vector<Subdivision> steps;
    std::shared_ptr<const MetricGraph> g = trial % 2 ? theta() : g1();
    for (int k = 0; k < 5; ++k) {
      const Subdivision cut = subdivide(g, {random_graph_point(*g, rng)});
      const Subdivision pend =
          attach_pendant(cut.target, uniform_index(rng, cut.target->vertex_count()), r(1 + static_cast<long>(uniform_index(rng, 2)), 2));
      steps.push_back(compose(cut, pend));
      g = steps.back().target;
    }
    const GraphMeasure mu = random_graph_measure(*g, rng, 4);
    const Rational top = measure_energy(GraphEngine(g), mu);
    Rational prev;
    for (std::size_t level = 0; level < 5; ++level) {
      Subdivision down = steps[level];
      for (std::size_t k = level + 1; k < steps.size(); ++k) down = compose(down, steps[k]);
      const Rational e = measure_energy(GraphEngine(down.source), pushforward_measure(mu, down));
      if (level > 0) t.expect(prev <= e, "E* decreased at level " + std::to_string(level));
      t.expect(e <= top, "E* above the limit");
      prev = e;
    }
  }
  return t.outcome("12 chains of 5 refinements with pendants, exact");
}

Outcome cross_engine() {
  Tally t;
  auto read = [](const char* name) {
    std::ifstream in(std::string(NAPT_FIXTURES) + "/" + name);
    std::stringstream s;
    s << in.rdbuf();
    return parse_document(s.str());
  };
  const auto gdoc = std::get<GraphDocument>(read("g1.json"));
  const auto adoc = std::get<AlgebraDocument>(read("g1_algebra.json"));
  auto tables = [](std::shared_ptr<const RestrictionAlgebra> a) { return serialize_document(AlgebraDocument{a, {}, {}}); };
  t.expect(tables(adoc.algebra) == tables(std::make_shared<const RestrictionAlgebra>(export_graph_algebra(*gdoc.graph))),
           "fixture is the export");
  GraphEngine ge(gdoc.graph);
  AlgebraEngine ae(adoc.algebra);
  auto to_alg = [](const GraphMeasure& mu) { return mu.mapped([](const GraphPoint& p) { return p.index; }); };
  Rng rng(909);
  auto vertex_metric = [&] {
    std::vector<Rational> v;
    for (std::size_t i = 0; i < gdoc.graph->vertex_count(); ++i) v.push_back(small_rational(rng));
    return PLMetric(gdoc.graph, v);
  };
  for (int i = 0; i < 50; ++i) {
    const PLMetric u = vertex_metric(), w = vertex_metric();
    const ModelMetric mu_ = model_metric_from_pl(u), mw = model_metric_from_pl(w);
    t.expect(to_alg(ma_signed(u)) == a_ma(mu_, *adoc.algebra), "MA atoms");
    GraphMeasure nu;
    for (std::size_t v = 0; v < gdoc.graph->vertex_count(); ++v) nu.add_atom(GraphPoint::at_vertex(v), small_rational(rng));
    t.expect(ge.integrate(u, nu) == ae.integrate(mu_, to_alg(nu)), "integrals");
    t.expect(energy_E(ge, u, w) == energy_E(ae, mu_, mw), "E");
    t.expect(functional_I(ge, u, w) == functional_I(ae, mu_, mw), "I");
    t.expect(functional_J(ge, u, w) == functional_J(ae, mu_, mw), "J");
    GraphMeasure p;
    for (const auto& x : random_weights(rng, gdoc.graph->vertex_count()))
      p.add_atom(GraphPoint::at_vertex(p.atoms().size()), x);
    t.expect(measure_energy(ge, p) == measure_energy(ae, to_alg(p)), "E*");
  }
  return t.outcome("50 metric pairs on the exported G1 tables, exact");
}

Outcome polynomiality() {
  Tally t;
  Rng rng(1010);
  auto check = [&](const auto& eng, std::vector<Rational> nodes, const Rational& held, const char* what) {
    const auto phi = random_psh(eng, rng), psi = random_psh(eng, rng);
    using M = std::decay_t<decltype(phi)>;
    auto energy_at = [&](const Rational& s) {
      std::vector<M> pair{phi, psi};
      std::vector<Rational> cs{s, Rational(1) - s};
      return energy_E(eng, eng.combine(std::span<const M>(pair), std::span<const Rational>(cs)));
    };
    std::vector<Rational> ys;
    for (const auto& x : nodes) ys.push_back(energy_at(x));
    t.expect(lagrange(nodes, ys, held) == energy_at(held), what);
  };
  GraphEngine graph(theta());
  for (int i = 0; i < 20; ++i) check(graph, {r(0), r(1, 2), r(1)}, r(1, 3), "graph");
  ToricEngine toric(unit_square());
  for (int i = 0; i < 4; ++i) check(toric, {r(0), r(1, 3), r(2, 3), r(1)}, r(1, 2), "toric");
  return t.outcome("20 graph pairs (3 nodes) + 4 toric pairs (4 nodes), held-out node exact");
}

}  // namespace

int main(int argc, char** argv) {
  // An optional argument selects a single criterion.
  const std::size_t only = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 0;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"exact identity suite", identities},
      {"G1 numerics against the quadratic-form oracle", g1_numerics},
      {"graph solver round trips", solver_round_trips},
      {"inequality battery", battery},
      {"envelope properties", envelopes},
      {"toric oracles and scaling", toric_oracles},
      {"toric solver", toric_solver},
      {"smoothing monotonicity", smoothing},
      {"cross-engine agreement", cross_engine},
      {"polynomiality of E along segments", polynomiality},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only && only != i + 1) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::printf("[%s] %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
