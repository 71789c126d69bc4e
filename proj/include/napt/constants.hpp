#pragma once

// Explicit constants for the energy estimates. Every entry is a rational upper
// bound for the constant its proof produces; square roots are rounded
// outward (upward where the root multiplies, downward where it divides).

#include <stdexcept>
#include <vector>

#include "napt/rational.hpp"

namespace napt {

namespace detail {

inline Rational root2k_upper(Rational x, unsigned k) {
  for (unsigned i = 0; i < k; ++i) x = sqrt_upper(x);
  return x;
}

inline Rational root2k_lower(Rational x, unsigned k) {
  for (unsigned i = 0; i < k; ++i) x = sqrt_lower(x);
  return x;
}

inline Rational factorial(unsigned n) {
  Rational f(1);
  for (unsigned i = 2; i <= n; ++i) f *= Rational(i);
  return f;
}

}  // namespace detail

struct EstimateConstants {
  unsigned n = 1;
  std::vector<Rational> c_np;      // C_{n,p}, 0 <= p <= n - 1
  Rational c_mixed_form;           // max(8, C_{n,n-1})
  Rational c_prime;                // 2^{n+1} (n+1)^{1 - 1/2^{n-1}} C_mixed_form
  Rational c_quasi_triangle;       // C'^{2^{n-1}}
  Rational c_i_by_j;               // (n+1) C_quasi_triangle
  Rational c_mixed_form_j;         // ((n-1)^{n-1}/(n-1)!) C_mixed_form C_i_by_j^{1 - 1/2^{n-1}}
  Rational c_mixed_variation;      // n C_mixed_form_j
  Rational c_ma_difference;        // C_mixed_variation
  Rational c_energy_continuity;    // 2 C_ma_difference (n+1)^{1/2^n}
  Rational c_reference;            // (n+1)^{n+2} / n!
  Rational c_ma_lipschitz;         // n sqrt(C_reference + 1)
};

inline EstimateConstants appendix_constants(unsigned n) {
  if (n == 0) throw std::domain_error("dimension must be positive");
  EstimateConstants c;
  c.n = n;
  const Rational n1(n + 1);
  c.c_np.emplace_back(1);
  for (unsigned p = 0; p + 1 < n; ++p) c.c_np.push_back(c.c_np[p] + Rational(4) * sqrt_upper(n1 * c.c_np[p]));
  c.c_mixed_form = max(Rational(8), c.c_np.back());

  // (n+1)^{1 - 1/2^{n-1}} = (n+1) / (n+1)^{1/2^{n-1}}.
  c.c_prime = Rational(2).pow(n + 1) * n1 / detail::root2k_lower(n1, n - 1) * c.c_mixed_form;
  c.c_quasi_triangle = c.c_prime.pow(1u << (n - 1));
  c.c_i_by_j = n1 * c.c_quasi_triangle;
  if (n == 1) {
    c.c_mixed_form_j = c.c_mixed_form;
  } else {
    Rational lead = Rational(n - 1).pow(n - 1) / detail::factorial(n - 1);
    c.c_mixed_form_j = lead * c.c_mixed_form * c.c_i_by_j / detail::root2k_lower(c.c_i_by_j, n - 1);
  }
  c.c_mixed_variation = Rational(n) * c.c_mixed_form_j;
  c.c_ma_difference = c.c_mixed_variation;
  c.c_energy_continuity = Rational(2) * c.c_ma_difference * detail::root2k_upper(n1, n);
  c.c_reference = n1.pow(n + 2) / detail::factorial(n);
  c.c_ma_lipschitz = Rational(n) * sqrt_upper(c.c_reference + Rational(1));
  return c;
}

}  // namespace napt
