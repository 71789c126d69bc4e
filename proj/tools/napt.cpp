// napt: command-line front end for the three engines.
//
// Exit codes: 0 ok, 1 check failure, 2 parse error, 3 precondition,
// 4 infeasible, 5 validation refusal.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "napt/napt.hpp"

using namespace napt;

namespace {

enum Exit { ok = 0, check_failed = 1, parse_failed = 2, precondition = 3, infeasible = 4, refused = 5 };

struct Failure {
  Exit code;
  std::string message;
};

struct Args {
  std::string command;
  std::string file;
  std::vector<std::string> names;
  std::optional<double> tol;
  std::size_t samples = 50;
  std::uint64_t seed = 0;
  unsigned grid = 4;
  std::string out;
  std::string suite = "all";
};

const std::string& name_at(const Args& a, std::size_t i, const char* what) {
  if (a.names.size() <= i) throw Failure{precondition, std::string("missing ") + what + " name"};
  return a.names[i];
}

template <class Map>
const typename Map::mapped_type& lookup(const Map& m, const std::string& name, const char* what) {
  auto it = m.find(name);
  if (it == m.end()) throw Failure{precondition, std::string("unknown ") + what + " '" + name + "'"};
  return it->second;
}

std::string margin(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// Printing.

std::string affine(const TPoint& slope, const Rational& c) {
  std::string s;
  for (std::size_t k = 0; k < slope.size(); ++k) {
    const Rational& a = slope[k];
    if (a.is_zero()) continue;
    const std::string var = slope.size() == 1 ? "w" : "w" + std::to_string(k + 1);
    const Rational m = a.abs();
    const std::string term = m == Rational(1) ? var : m.str() + "*" + var;
    if (s.empty()) s = a.sign() < 0 ? "-" + term : term;
    else s += (a.sign() < 0 ? " - " : " + ") + term;
  }
  if (s.empty()) return c.str();
  if (!c.is_zero()) s += (c.sign() < 0 ? " - " : " + ") + c.abs().str();
  return s;
}

void print(std::ostream& os, const PLMetric& u) {
  const MetricGraph& g = u.host();
  for (std::size_t v = 0; v < g.vertex_count(); ++v) os << g.vertex_name(v) << ": " << u.vertex_value(v).fraction() << "\n";
  for (std::size_t e = 0; e < g.edge_count(); ++e)
    for (const auto& bp : u.breakpoints(e))
      os << g.label(GraphPoint::in_edge(e, bp.offset)) << ": " << bp.value.fraction() << "\n";
}

void print(std::ostream& os, const TropicalMetric& u) {
  const TropicalMetric s = u.simplified();
  os << "max(";
  for (std::size_t i = 0; i < s.pieces().size(); ++i)
    os << (i ? ", " : "") << affine(s.pieces()[i].slope, s.pieces()[i].constant);
  os << ")\n";
}

struct AlgebraMetricPrinter {
  const RestrictionAlgebra& alg;
  void operator()(std::ostream& os, const ModelMetric& m) const {
    for (std::size_t i = 0; i < m.d.size(); ++i) os << alg.components()[i].name << ": " << m.d[i].fraction() << "\n";
    os << "constant: " << m.c.fraction() << "\n";
  }
};

template <class Point, class Label>
void print_measure(std::ostream& os, const AtomicMeasure<Point>& mu, Label&& label) {
  for (const auto& [p, m] : mu.atoms()) os << label(p) << ": " << m.fraction() << "\n";
}

// One context per document kind, giving the commands a uniform view.

struct GraphContext {
  const GraphDocument& doc;
  GraphEngine eng{doc.graph};
  const auto& metrics() const { return doc.metrics; }
  const auto& measures() const { return doc.measures; }
  std::string label(const GraphPoint& p) const { return doc.graph->label(p); }
  void show(std::ostream& os, const PLMetric& u) const { print(os, u); }
  GraphMeasure ma(const PLMetric& u) const { return napt::ma(u); }
  Rational tolerance(const Args&) const { return Rational(0); }
};

struct ToricContext {
  const ToricDocument& doc;
  ToricEngine eng{doc.polytope};
  const auto& metrics() const { return doc.metrics; }
  const auto& measures() const { return doc.measures; }
  std::string label(const TPoint& p) const { return point_label(p); }
  void show(std::ostream& os, const TropicalMetric& u) const { print(os, u); }
  ToricMeasure ma(const TropicalMetric& u) const { return t_ma(u); }
  Rational tolerance(const Args& a) const { return Rational::from_double(a.tol.value_or(1e-8)); }
};

struct AlgebraContext {
  const AlgebraDocument& doc;
  AlgebraEngine eng{doc.algebra};
  const auto& metrics() const { return doc.metrics; }
  const auto& measures() const { return doc.measures; }
  std::string label(std::size_t j) const { return doc.algebra->components()[j].name; }
  void show(std::ostream& os, const ModelMetric& m) const { AlgebraMetricPrinter{*doc.algebra}(os, m); }
  AlgebraMeasure ma(const ModelMetric& m) const {
    if (!a_is_psh(m, *doc.algebra)) throw Failure{precondition, "metric is not psh (negative Monge-Ampère mass)"};
    return a_ma(m, *doc.algebra);
  }
  Rational tolerance(const Args&) const { return Rational(0); }
};

template <class Ctx>
int cmd_ma(const Ctx& ctx, const Args& a) {
  const auto& u = lookup(ctx.metrics(), name_at(a, 0, "metric"), "metric");
  print_measure(std::cout, ctx.ma(u), [&](const auto& p) { return ctx.label(p); });
  return ok;
}

template <class Ctx>
int cmd_energy(const Ctx& ctx, const Args& a) {
  const auto& phi = lookup(ctx.metrics(), name_at(a, 0, "metric"), "metric");
  const auto& psi = a.names.size() > 1 ? lookup(ctx.metrics(), a.names[1], "metric") : ctx.eng.reference();
  const auto r = energy_report(ctx.eng, phi, psi);
  const Rational n(static_cast<long>(ctx.eng.dimension()));
  std::cout << "E: " << r.E.fraction() << "\n"
            << "I: " << r.I.fraction() << "\n"
            << "J: " << r.J.fraction() << "\n"
            << "I-J: " << r.I_minus_J().fraction() << "\n"
            << "i_minus_j.lower margin: " << (n * r.I_minus_J() - r.J).fraction() << "\n"
            << "i_minus_j.upper margin: " << (n * r.J - r.I_minus_J()).fraction() << "\n";
  return ok;
}

template <class Ctx>
int cmd_measure_energy(const Ctx& ctx, const Args& a) {
  const auto& mu = lookup(ctx.measures(), name_at(a, 0, "measure"), "measure");
  if (!mu.is_probability()) throw Failure{precondition, "measure is not a probability measure"};
  std::cout << "E*: " << measure_energy(ctx.eng, mu).fraction() << "\n";
  return ok;
}

template <class Ctx>
int cmd_check(const Ctx& ctx, const Args& a) {
  const auto samples = draw_samples(ctx.eng, a.samples, a.seed);
  EstimateOptions opt{ctx.tolerance(a), std::nullopt};
  std::vector<std::pair<std::string, EstimateReport>> reports;
  if (a.suite == "estimates" || a.suite == "all") reports.emplace_back("estimates", check_estimates(ctx.eng, samples, opt));
  if (a.suite == "identities" || a.suite == "all") reports.emplace_back("identities", check_identities(ctx.eng, samples, opt));
  bool pass = true;
  std::cout << "samples: " << a.samples << "  seed: " << a.seed << "\n";
  for (const auto& [suite, rep] : reports) {
    std::cout << "[" << suite << "]\n";
    for (const auto& [name, s] : rep.summary())
      std::cout << name << "  count " << s.count << "  failures " << s.failures << "  min margin " << margin(s.min_margin)
                << "\n";
    for (const auto& note : rep.notes) std::cout << "note: " << note << "\n";
    for (const auto& r : rep.records)
      if (!r.pass)
        std::cout << "violated: " << r.name << " sample " << r.sample << " lhs " << r.lhs.str() << " rhs " << margin(r.rhs)
                  << "\n";
    pass = pass && rep.passed();
  }
  std::cout << (pass ? "result: pass" : "result: FAIL") << "\n";
  return pass ? ok : check_failed;
}

void write_output(const Args& a, const std::string& text) {
  if (a.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(a.out, std::ios::binary);
  if (!f) throw Failure{precondition, "cannot write '" + a.out + "'"};
  f << text;
}

template <class Measure>
void check_probability(const Measure& mu) {
  if (!mu.is_positive()) throw Failure{precondition, "measure has negative masses"};
  if (mu.total_mass() != Rational(1)) throw Failure{precondition, "measure is not a probability measure"};
}

int run_graph(const GraphDocument& doc, const Args& a) {
  GraphContext ctx{doc};
  if (a.command == "ma") return cmd_ma(ctx, a);
  if (a.command == "energy") return cmd_energy(ctx, a);
  if (a.command == "measure-energy") return cmd_measure_energy(ctx, a);
  if (a.command == "check") return cmd_check(ctx, a);
  if (a.command == "solve") {
    const auto& mu = lookup(doc.measures, name_at(a, 0, "measure"), "measure");
    check_probability(mu);
    PLMetric u = solve(mu, doc.graph);
    Rational residual(0);
    for (const auto& [p, m] : (napt::ma(u) - mu).atoms()) residual = max(residual, m.abs());
    print(std::cout, u);
    std::cout << "sup: " << u.sup().fraction() << "\nresidual: " << residual.fraction() << "\n";
    return ok;
  }
  if (a.command == "envelope") {
    const auto& psi = lookup(doc.metrics, name_at(a, 0, "metric"), "metric");
    auto grid = uniform_grid(psi, a.grid);
    PLMetric env = envelope(psi, grid);
    print(std::cout, env);
    std::cout << "orthogonality defect: " << orthogonality_defect(psi, grid).fraction() << "\n";
    return ok;
  }
  if (a.command == "render") {
    const auto& name = name_at(a, 0, "object");
    if (auto it = doc.metrics.find(name); it != doc.metrics.end()) write_output(a, svg::render(it->second));
    else if (auto jt = doc.measures.find(name); jt != doc.measures.end()) write_output(a, svg::render(*doc.graph, jt->second));
    else throw Failure{precondition, "unknown object '" + name + "'"};
    return ok;
  }
  throw Failure{precondition, "unknown command '" + a.command + "'"};
}

int run_toric(const ToricDocument& doc, const Args& a) {
  ToricContext ctx{doc};
  if (a.command == "ma") return cmd_ma(ctx, a);
  if (a.command == "energy") return cmd_energy(ctx, a);
  if (a.command == "measure-energy") return cmd_measure_energy(ctx, a);
  if (a.command == "check") return cmd_check(ctx, a);
  if (a.command == "solve") {
    const auto& mu = lookup(doc.measures, name_at(a, 0, "measure"), "measure");
    check_probability(mu);
    ToricSolveOptions opt;
    if (a.tol) opt.tol = *a.tol;
    auto r = t_solve(mu, doc.polytope, opt);
    print(std::cout, r.metric);
    std::cout << "sup: " << t_sup_minus_reference(r.metric).fraction() << "\nresidual: " << margin(r.residual.to_double())
              << "\n";
    return ok;
  }
  if (a.command == "envelope") {
    const auto& psi = lookup(doc.obstacles, name_at(a, 0, "obstacle"), "obstacle");
    auto env = t_envelope(psi, doc.polytope);
    print(std::cout, env);
    std::cout << "orthogonality defect: " << t_orthogonality_defect(psi, doc.polytope).fraction() << "\n";
    return ok;
  }
  if (a.command == "render") {
    const auto& name = name_at(a, 0, "object");
    if (auto it = doc.metrics.find(name); it != doc.metrics.end()) write_output(a, svg::render(it->second));
    else if (auto jt = doc.measures.find(name); jt != doc.measures.end())
      write_output(a, svg::render(jt->second, doc.polytope->dimension()));
    else throw Failure{precondition, "unknown object '" + name + "'"};
    return ok;
  }
  throw Failure{precondition, "unknown command '" + a.command + "'"};
}

int run_algebra(const AlgebraDocument& doc, const Args& a) {
  AlgebraContext ctx{doc};
  if (a.command == "ma") return cmd_ma(ctx, a);
  if (a.command == "energy") return cmd_energy(ctx, a);
  if (a.command == "measure-energy") return cmd_measure_energy(ctx, a);
  if (a.command == "check") {
    auto report = a_validate(*doc.algebra);
    if (!report.geometric()) {
      std::cout << "refused: the algebra fails validation, so the estimates are not theorems for it\n";
      for (const auto& d : report.diagnostics) std::cout << "note: " << d << "\n";
      if (!report.symmetric_pairing) std::cout << "note: intersection pairing is not symmetric\n";
      if (!report.degree_zero) std::cout << "note: vertical divisors do not have degree zero\n";
      if (!report.positive_semidefinite) std::cout << "note: intersection pairing is not positive semidefinite\n";
      return refused;
    }
    if (doc.algebra->dimension() != 1) {
      std::cout << "refused: psh samples for algebras are only generated in dimension 1\n";
      return refused;
    }
    return cmd_check(ctx, a);
  }
  if (a.command == "solve") {
    const auto& mu = lookup(doc.measures, name_at(a, 0, "measure"), "measure");
    check_probability(mu);
    ModelMetric m = a_solve(mu, *doc.algebra);
    ctx.show(std::cout, m);
    std::cout << "sup: " << a_sup(m, *doc.algebra).fraction() << "\nresidual: 0/1\n";
    return ok;
  }
  if (a.command == "envelope" || a.command == "render")
    throw Failure{precondition, a.command + " is not available for algebra documents"};
  throw Failure{precondition, "unknown command '" + a.command + "'"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"napt: exact non-Archimedean pluripotential computations"};
  Args a;
  app.add_option("command", a.command, "ma | solve | energy | measure-energy | envelope | check | render")
      ->required()
      ->check(CLI::IsMember({"ma", "solve", "energy", "measure-energy", "envelope", "check", "render"}));
  app.add_option("file", a.file, "problem document (JSON)")->required();
  app.add_option("names", a.names, "metric, measure or obstacle names");
  app.add_option("--tol", a.tol, "solver residual or check tolerance (toric)");
  app.add_option("--samples", a.samples, "number of sampled tuples for check");
  app.add_option("--seed", a.seed, "sampling seed");
  app.add_option("--grid", a.grid, "cells per edge for graph envelopes")->check(CLI::PositiveNumber);
  app.add_option("--out", a.out, "output path for render");
  app.add_option("--suite", a.suite, "estimates | identities | all")
      ->check(CLI::IsMember({"estimates", "identities", "all"}));
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return parse_failed;
  }

  try {
    std::ifstream in(a.file, std::ios::binary);
    if (!in) throw ParseError("cannot read '" + a.file + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    Document doc = parse_document(buf.str());
    return std::visit(
        [&](const auto& d) {
          using D = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<D, GraphDocument>) return run_graph(d, a);
          else if constexpr (std::is_same_v<D, ToricDocument>) return run_toric(d, a);
          else return run_algebra(d, a);
        },
        doc);
  } catch (const Failure& f) {
    std::cerr << "napt: " << f.message << "\n";
    return f.code;
  } catch (const ParseError& e) {
    std::cerr << "napt: parse error: " << e.what() << "\n";
    return parse_failed;
  } catch (const InfeasibleError& e) {
    std::cerr << "napt: infeasible: " << e.what() << "\n";
    return infeasible;
  } catch (const std::logic_error& e) {
    // domain_error, invalid_argument and the invariant errors derive from here.
    std::cerr << "napt: precondition failed: " << e.what() << "\n";
    return precondition;
  }
}
