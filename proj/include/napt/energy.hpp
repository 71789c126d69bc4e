#pragma once

// Energy functionals written once against an abstract Monge-Ampère engine.
// Metrics are handled relative to the engine's reference metric, so
// integrate(u, mu) means the integral of (u - phi_ref) against mu.

#include <concepts>
#include <optional>
#include <span>
#include <vector>

#include "napt/rational.hpp"

namespace napt {

template <class E>
concept MAEngine = requires(const E& e, const typename E::metric_type& u,
                            std::span<const typename E::metric_type> us, std::span<const Rational> cs,
                            const typename E::measure_type& mu) {
  { e.dimension() } -> std::convertible_to<std::size_t>;
  { e.reference() } -> std::convertible_to<typename E::metric_type>;
  { e.ma_mixed(us) } -> std::convertible_to<typename E::measure_type>;
  { e.integrate(u, mu) } -> std::convertible_to<Rational>;
  { e.combine(us, cs) } -> std::convertible_to<typename E::metric_type>;
  { e.sup(u) } -> std::convertible_to<Rational>;
  { e.is_psh(u) } -> std::convertible_to<bool>;
  { e.reference_defect() } -> std::convertible_to<std::optional<Rational>>;
};

template <class E>
concept SolvingEngine = MAEngine<E> && requires(const E& e, const typename E::measure_type& mu) {
  { e.solve(mu) } -> std::convertible_to<typename E::metric_type>;
};

template <MAEngine E>
using metric_t = typename E::metric_type;

/// MA(phi^j, psi^(n-j)).
template <MAEngine E>
auto ma_power(const E& eng, const metric_t<E>& phi, const metric_t<E>& psi, std::size_t j) {
  std::vector<metric_t<E>> ms(eng.dimension(), psi);
  for (std::size_t s = 0; s < j; ++s) ms[s] = phi;
  return eng.ma_mixed(std::span<const metric_t<E>>(ms));
}

template <MAEngine E>
auto ma_of(const E& eng, const metric_t<E>& phi) {
  return ma_power(eng, phi, phi, eng.dimension());
}

/// Integral of (a - b) against mu.
template <MAEngine E>
Rational integrate_difference(const E& eng, const metric_t<E>& a, const metric_t<E>& b,
                              const typename E::measure_type& mu) {
  return eng.integrate(a, mu) - eng.integrate(b, mu);
}

/// E(phi, psi) = 1/(n+1) sum_j int (phi - psi) MA(phi^j psi^(n-j)).
template <MAEngine E>
Rational energy_E(const E& eng, const metric_t<E>& phi, const metric_t<E>& psi) {
  const std::size_t n = eng.dimension();
  Rational total;
  for (std::size_t j = 0; j <= n; ++j) total += integrate_difference(eng, phi, psi, ma_power(eng, phi, psi, j));
  return total / Rational(static_cast<long>(n + 1));
}

template <MAEngine E>
Rational energy_E(const E& eng, const metric_t<E>& phi) {
  return energy_E(eng, phi, eng.reference());
}

/// I(phi, psi) = int (phi - psi) (MA(psi) - MA(phi)).
template <MAEngine E>
Rational functional_I(const E& eng, const metric_t<E>& phi, const metric_t<E>& psi) {
  return integrate_difference(eng, phi, psi, ma_of(eng, psi)) - integrate_difference(eng, phi, psi, ma_of(eng, phi));
}

template <MAEngine E>
Rational functional_I(const E& eng, const metric_t<E>& phi) {
  return functional_I(eng, phi, eng.reference());
}

/// J_psi(phi) = -E(phi, psi) + int (phi - psi) MA(psi).
template <MAEngine E>
Rational functional_J(const E& eng, const metric_t<E>& phi, const metric_t<E>& psi) {
  return integrate_difference(eng, phi, psi, ma_of(eng, psi)) - energy_E(eng, phi, psi);
}

template <MAEngine E>
Rational functional_J(const E& eng, const metric_t<E>& phi) {
  return functional_J(eng, phi, eng.reference());
}

/// F_mu(phi) = E(phi) - int (phi - phi_ref) mu.
template <MAEngine E>
Rational functional_F(const E& eng, const metric_t<E>& phi, const typename E::measure_type& mu) {
  return energy_E(eng, phi) - eng.integrate(phi, mu);
}

/// E(a, b) + E(b, c) + E(c, a); vanishes identically.
template <MAEngine E>
Rational cocycle_defect(const E& eng, const metric_t<E>& a, const metric_t<E>& b, const metric_t<E>& c) {
  return energy_E(eng, a, b) + energy_E(eng, b, c) + energy_E(eng, c, a);
}

/// E*(mu) = (I - J)(phi_mu) where MA(phi_mu) = mu.
template <SolvingEngine E>
Rational measure_energy(const E& eng, const typename E::measure_type& mu) {
  auto phi = eng.solve(mu);
  return functional_I(eng, phi) - functional_J(eng, phi);
}

struct EnergyReport {
  Rational E, I, J;
  Rational I_minus_J() const { return I - J; }
};

template <MAEngine E>
EnergyReport energy_report(const E& eng, const metric_t<E>& phi, const metric_t<E>& psi) {
  return {energy_E(eng, phi, psi), functional_I(eng, phi, psi), functional_J(eng, phi, psi)};
}

}  // namespace napt
