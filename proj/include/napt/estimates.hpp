#pragma once

// The energy estimates as an executable battery. Every inequality has the
// shape lhs <= C * prod_i b_i^(p_i / 2^k) with nonnegative bases b_i; it is
// decided exactly by raising both sides to the power 2^k.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "napt/constants.hpp"
#include "napt/energy.hpp"
#include "napt/sampling.hpp"

namespace napt {

struct Bound {
  Rational constant;
  unsigned k = 0;
  std::vector<std::pair<Rational, unsigned>> factors;  // (base, numerator of the exponent)

  double value() const {
    double v = constant.to_double();
    const double scale = std::ldexp(1.0, -static_cast<int>(k));
    for (const auto& [b, p] : factors) v *= std::pow(b.to_double(), p * scale);
    return v;
  }

  /// The bound itself when no root is involved.
  std::optional<Rational> exact() const {
    if (k != 0) return std::nullopt;
    Rational r = constant;
    for (const auto& [b, p] : factors) r *= b.pow(p);
    return r;
  }

  /// Exact test of lhs - tol <= bound.
  bool holds(const Rational& lhs, const Rational& tol = Rational(0)) const {
    for (const auto& [b, p] : factors)
      if (p > 0 && b.sign() < 0) return false;
    Rational l = lhs - tol;
    if (l.sign() <= 0) return constant.sign() >= 0;
    if (constant.sign() < 0) return false;
    const unsigned e = 1u << k;
    Rational r = constant.pow(e);
    for (const auto& [b, p] : factors) r *= b.pow(p);
    return l.pow(e) <= r;
  }
};

struct EstimateRecord {
  std::string name;
  std::size_t sample = 0;
  Rational lhs;
  double rhs = 0;
  double margin = 0;
  bool pass = true;
};

struct EstimateSummary {
  std::size_t count = 0;
  std::size_t failures = 0;
  double min_margin = 0;
};

struct EstimateReport {
  std::vector<EstimateRecord> records;  // sorted by (name, sample)
  std::vector<std::string> notes;

  bool passed() const {
    return std::all_of(records.begin(), records.end(), [](const EstimateRecord& r) { return r.pass; });
  }

  std::map<std::string, EstimateSummary> summary() const {
    std::map<std::string, EstimateSummary> out;
    for (const auto& r : records) {
      auto [it, fresh] = out.try_emplace(r.name);
      auto& s = it->second;
      s.min_margin = fresh ? r.margin : std::min(s.min_margin, r.margin);
      ++s.count;
      if (!r.pass) ++s.failures;
    }
    return out;
  }
};

template <class M>
struct EstimateSample {
  std::vector<M> metrics;
  Rational s;  // interpolation parameter in [0, 1]
};

struct EstimateOptions {
  Rational tolerance;             // slack allowed on the left side
  std::optional<unsigned> threads;  // defaults to NAPT_THREADS, then the hardware count
};

inline unsigned worker_count(std::optional<unsigned> requested = std::nullopt) {
  unsigned n = requested.value_or(0);
  if (n == 0)
    if (const char* env = std::getenv("NAPT_THREADS")) n = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

/// Metrics per sample: enough for the mixed-measure estimates in dimension n.
inline std::size_t tuple_size(std::size_t n) { return std::max<std::size_t>(6, 2 * n + 2); }

template <class E>
std::vector<EstimateSample<metric_t<E>>> draw_samples(const E& eng, std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<EstimateSample<metric_t<E>>> out;
  for (std::size_t i = 0; i < count; ++i) {
    EstimateSample<metric_t<E>> smp;
    for (std::size_t j = 0; j < tuple_size(eng.dimension()); ++j) smp.metrics.push_back(random_psh(eng, rng));
    smp.s = Rational(static_cast<long>(uniform_index(rng, 7)), 6);
    out.push_back(std::move(smp));
  }
  return out;
}

namespace detail {

template <class T, class F>
void parallel_for(std::size_t count, unsigned threads, F&& body, std::vector<T>& out) {
  out.resize(count);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) out[i] = body(i);
  };
  const unsigned t = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1)));
  if (t <= 1) {
    work();
    return;
  }
  std::vector<std::jthread> pool;
  for (unsigned i = 0; i < t; ++i) pool.emplace_back(work);
}

template <MAEngine E>
class Battery {
 public:
  using M = metric_t<E>;

  Battery(const E& eng, const EstimateConstants& c, std::optional<Rational> d, Rational tol)
      : eng_(eng), c_(c), d_(std::move(d)), tol_(std::move(tol)), n_(eng.dimension()) {}

  std::vector<EstimateRecord> estimates(const EstimateSample<M>& smp, std::size_t idx) const {
    std::vector<EstimateRecord> out;
    const auto& m = smp.metrics;
    const M ref = eng_.reference();
    const Rational n(static_cast<long>(n_));
    const unsigned top = 1u << n_;       // 2^n
    const unsigned half = 1u << (n_ - 1);  // 2^(n-1)
    auto add = [&](const char* name, const Rational& lhs, const Bound& b) {
      const bool pass = b.holds(lhs, tol_);
      const auto r = b.exact();
      const double rhs = r ? r->to_double() : b.value();
      // With a root on the right the margin is a float estimate; the exact
      // comparison decides, so rounding is not allowed to push it below zero.
      double margin = r ? (*r - lhs).to_double() : rhs - lhs.to_double();
      if (pass && !r) margin = std::max(margin, 0.0);
      out.push_back({name, idx, lhs, rhs, margin + 0.0, pass});
    };
    auto I = [&](const M& a, const M& b) { return functional_I(eng_, a, b); };
    auto J = [&](const M& a, const M& b) { return functional_J(eng_, a, b); };
    auto Jr = [&](const M& a) { return functional_J(eng_, a); };
    auto max_J = [&](std::size_t first, std::size_t last) {
      Rational best = Jr(m[first]);
      for (std::size_t i = first; i <= last; ++i) best = max(best, Jr(m[i]));
      return best;
    };
    auto ma = [&](std::vector<M> ms) { return eng_.ma_mixed(std::span<const M>(ms)); };

    // sup bound with D_ref.
    const Rational defect = eng_.sup(m[0]) - eng_.integrate(m[0], ma_of(eng_, ref));
    add("sup_bound.lower", -defect, Bound{Rational(0), 0, {}});
    if (d_) add("sup_bound.upper", defect, Bound{*d_, 0, {}});

    // Chains.
    const Rational i01 = I(m[0], m[1]), j10 = J(m[0], m[1]), j01 = J(m[1], m[0]);
    add("j_chain.a", j01, Bound{n, 0, {{j10, 1}}});
    add("j_chain.b", j10, Bound{Rational(1), 0, {{i01, 1}}});
    add("j_chain.c", i01, Bound{n + Rational(1), 0, {{j10, 1}}});
    const Rational i0 = functional_I(eng_, m[0]), j0 = Jr(m[0]);
    add("i_minus_j.lower", j0, Bound{n, 0, {{i0 - j0, 1}}});
    add("i_minus_j.upper", i0 - j0, Bound{n, 0, {{j0, 1}}});

    // Segments from psi = m1 towards phi = m0.
    auto segment = [&](const Rational& t) {
      std::vector<M> pair{m[0], m[1]};
      std::vector<Rational> cs{t, Rational(1) - t};
      return eng_.combine(std::span<const M>(pair), std::span<const Rational>(cs));
    };
    add("segment_i", I(segment(smp.s), m[1]), Bound{n * smp.s * smp.s, 0, {{i01, 1}}});
    add("segment_j", J(segment(smp.s.pow(static_cast<unsigned>(n_))), m[1]),
        Bound{smp.s.pow(static_cast<unsigned>(n_ + 1)), 0, {{j10, 1}}});

    // -int (a - b) dd^c(a - b) ^ T / V for T = ts.
    auto neg_form = [&](const M& a, const M& b, const std::vector<M>& ts) {
      std::vector<M> with_a{a}, with_b{b};
      with_a.insert(with_a.end(), ts.begin(), ts.end());
      with_b.insert(with_b.end(), ts.begin(), ts.end());
      return -(integrate_difference(eng_, a, b, ma(with_a)) - integrate_difference(eng_, a, b, ma(with_b)));
    };
    const std::vector<M> psi_rep(n_ - 1, m[2]);
    add("mixed_form", neg_form(m[0], m[1], psi_rep),
        Bound{c_.c_mixed_form, static_cast<unsigned>(n_ - 1), {{i01, 1}, {max(I(m[0], m[2]), I(m[1], m[2])), half - 1}}});
    add("quasi_triangle", I(m[0], m[2]), Bound{c_.c_quasi_triangle, 0, {{max(i01, I(m[1], m[2])), 1}}});
    add("i_by_j", i01, Bound{c_.c_i_by_j, 0, {{max(Jr(m[0]), Jr(m[1])), 1}}});

    const std::vector<M> psis(m.begin() + 2, m.begin() + static_cast<std::ptrdiff_t>(n_ + 1));
    add("mixed_form_j", neg_form(m[0], m[1], psis),
        Bound{c_.c_mixed_form_j, static_cast<unsigned>(n_ - 1), {{i01, 1}, {max_J(0, n_), half - 1}}});

    {
      std::vector<M> phi(m.begin() + 2, m.begin() + static_cast<std::ptrdiff_t>(n_ + 2));
      std::vector<M> phi_p(m.begin() + static_cast<std::ptrdiff_t>(n_ + 2),
                           m.begin() + static_cast<std::ptrdiff_t>(2 * n_ + 2));
      Rational lhs = integrate_difference(eng_, m[0], m[1], ma(phi_p)) - integrate_difference(eng_, m[0], m[1], ma(phi));
      Rational ip = I(phi[0], phi_p[0]);
      for (std::size_t p = 1; p < n_; ++p) ip = max(ip, I(phi[p], phi_p[p]));
      add("mixed_variation", lhs.abs(),
          Bound{c_.c_mixed_variation, static_cast<unsigned>(n_), {{i01, 1}, {ip, 1}, {max_J(0, 2 * n_ + 1), top - 2}}});
    }
    {
      Rational lhs = integrate_difference(eng_, m[0], m[1], ma_of(eng_, m[2])) -
                     integrate_difference(eng_, m[0], m[1], ma_of(eng_, m[3]));
      add("ma_difference", lhs,
          Bound{c_.c_ma_difference, static_cast<unsigned>(n_), {{i01, 1}, {I(m[2], m[3]), 1}, {max_J(0, 3), top - 2}}});
    }
    {
      Rational lhs = max((i0 - functional_I(eng_, m[1])).abs(), (j0 - Jr(m[1])).abs());
      add("energy_continuity", lhs, Bound{c_.c_energy_continuity, static_cast<unsigned>(n_), {{i01, 1}, {max(j0, Jr(m[1])), top - 1}}});
    }
    if (d_) {
      const std::vector<M> phis(m.begin() + 1, m.begin() + static_cast<std::ptrdiff_t>(n_ + 1));
      Rational lhs = eng_.integrate(m[0], ma_of(eng_, ref)) - eng_.integrate(m[0], ma(phis));
      add("reference_integral", lhs, Bound{c_.c_reference, 0, {{*d_ + max_J(0, n_), 1}}});
      Rational lip = eng_.integrate(m[0], ma_of(eng_, m[1])) - eng_.integrate(m[0], ma_of(eng_, m[2]));
      add("ma_lipschitz", lip.abs(), Bound{c_.c_ma_lipschitz, 1, {{I(m[1], m[2]), 1}, {*d_ + max_J(0, 2), 1}}});
    }
    return out;
  }

  std::vector<EstimateRecord> identities(const EstimateSample<M>& smp, std::size_t idx) const {
    std::vector<EstimateRecord> out;
    const auto& m = smp.metrics;
    const M ref = eng_.reference();
    auto exact = [&](const char* name, const Rational& defect) {
      Rational d = defect.abs();
      out.push_back({name, idx, d, 0.0, -d.to_double() + 0.0, d <= tol_});
    };
    auto ma = [&](std::vector<M> ms) { return eng_.ma_mixed(std::span<const M>(ms)); };

    exact("cocycle", cocycle_defect(eng_, m[0], m[1], m[2]));
    exact("i_as_j_sum", functional_I(eng_, m[0], m[1]) - functional_J(eng_, m[0], m[1]) - functional_J(eng_, m[1], m[0]));
    std::vector<M> ts(m.begin() + 2, m.begin() + static_cast<std::ptrdiff_t>(n_ + 1));
    auto pair = [&](const M& a, const M& b) {
      std::vector<M> with_b{b}, with_ref{ref};
      with_b.insert(with_b.end(), ts.begin(), ts.end());
      with_ref.insert(with_ref.end(), ts.begin(), ts.end());
      return eng_.integrate(a, ma(with_b)) - eng_.integrate(a, ma(with_ref));
    };
    exact("integration_by_parts", pair(m[0], m[1]) - pair(m[1], m[0]));
    std::vector<M> first(m.begin(), m.begin() + static_cast<std::ptrdiff_t>(eng_.dimension()));
    exact("total_mass", ma(first).total_mass() - Rational(1));
    // Cauchy-Schwarz positivity of -int f dd^c f ^ T.
    Rational cs = pair(m[0], m[0]) - pair(m[0], m[1]) - pair(m[1], m[0]) + pair(m[1], m[1]);
    Bound zero{Rational(0), 0, {}};
    out.push_back({"cauchy_schwarz", idx, cs, 0.0, -cs.to_double() + 0.0, zero.holds(cs, tol_)});
    return out;
  }

 private:
  const E& eng_;
  EstimateConstants c_;
  std::optional<Rational> d_;
  Rational tol_;
  std::size_t n_;
};

template <class E, class F>
EstimateReport run_battery(const E& eng, const std::vector<EstimateSample<metric_t<E>>>& samples,
                           const EstimateOptions& opt, F&& per_sample) {
  for (const auto& smp : samples) {
    if (smp.metrics.size() < tuple_size(eng.dimension())) throw std::domain_error("sample tuple is too short");
    if (smp.s.sign() < 0 || smp.s > Rational(1)) throw std::domain_error("interpolation parameter outside [0, 1]");
    for (const auto& u : smp.metrics)
      if (!eng.is_psh(u)) throw std::domain_error("sample metric is not psh");
  }
  std::vector<std::vector<EstimateRecord>> parts;
  parallel_for(samples.size(), worker_count(opt.threads), [&](std::size_t i) { return per_sample(samples[i], i); },
               parts);
  EstimateReport report;
  for (auto& p : parts) report.records.insert(report.records.end(), p.begin(), p.end());
  std::stable_sort(report.records.begin(), report.records.end(), [](const auto& a, const auto& b) {
    return std::tie(a.name, a.sample) < std::tie(b.name, b.sample);
  });
  return report;
}

}  // namespace detail

/// Runs every estimate on every sample. Inequalities involving D_ref are
/// skipped, with a note, when the engine cannot supply it.
template <MAEngine E>
EstimateReport check_estimates(const E& eng, const std::vector<EstimateSample<metric_t<E>>>& samples,
                               const EstimateOptions& opt = {}) {
  const auto constants = appendix_constants(static_cast<unsigned>(eng.dimension()));
  const auto d = eng.reference_defect();
  detail::Battery<E> battery(eng, constants, d, opt.tolerance);
  auto report = detail::run_battery(eng, samples, opt,
                                    [&](const auto& smp, std::size_t i) { return battery.estimates(smp, i); });
  if (!d) report.notes.push_back("D_ref unavailable: sup_bound.upper, reference_integral and ma_lipschitz skipped");
  return report;
}

template <MAEngine E>
EstimateReport check_identities(const E& eng, const std::vector<EstimateSample<metric_t<E>>>& samples,
                                const EstimateOptions& opt = {}) {
  detail::Battery<E> battery(eng, appendix_constants(static_cast<unsigned>(eng.dimension())), std::nullopt,
                             opt.tolerance);
  return detail::run_battery(eng, samples, opt,
                             [&](const auto& smp, std::size_t i) { return battery.identities(smp, i); });
}

}  // namespace napt
