#pragma once

#include <functional>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "napt/rational.hpp"

namespace napt {

/// Finite atomic measure with exact masses. Atoms are kept in the canonical
/// order of Point; zero-mass atoms are never stored.
template <class Point>
class AtomicMeasure {
 public:
  using point_type = Point;
  using container = std::map<Point, Rational>;

  AtomicMeasure() = default;
  explicit AtomicMeasure(const std::vector<std::pair<Point, Rational>>& atoms) {
    for (const auto& [p, m] : atoms) add_atom(p, m);
  }

  static AtomicMeasure dirac(const Point& p) {
    AtomicMeasure m;
    m.add_atom(p, Rational(1));
    return m;
  }

  /// Adds mass at p, merging with an existing atom.
  void add_atom(const Point& p, const Rational& mass) {
    if (mass.is_zero()) return;
    auto [it, inserted] = atoms_.try_emplace(p, mass);
    if (!inserted) {
      it->second += mass;
      if (it->second.is_zero()) atoms_.erase(it);
    }
  }

  const container& atoms() const& { return atoms_; }
  container atoms() && { return std::move(atoms_); }
  bool empty() const { return atoms_.empty(); }
  std::size_t size() const { return atoms_.size(); }

  Rational mass_at(const Point& p) const {
    auto it = atoms_.find(p);
    return it == atoms_.end() ? Rational(0) : it->second;
  }

  Rational total_mass() const {
    Rational t;
    for (const auto& [p, m] : atoms_) t += m;
    return t;
  }

  bool is_positive() const {
    for (const auto& [p, m] : atoms_)
      if (m.sign() < 0) return false;
    return true;
  }

  bool is_probability() const { return is_positive() && total_mass() == Rational(1); }

  AtomicMeasure& operator+=(const AtomicMeasure& o) {
    for (const auto& [p, m] : o.atoms_) add_atom(p, m);
    return *this;
  }
  AtomicMeasure& operator-=(const AtomicMeasure& o) {
    for (const auto& [p, m] : o.atoms_) add_atom(p, -m);
    return *this;
  }
  friend AtomicMeasure operator+(AtomicMeasure a, const AtomicMeasure& b) { return a += b; }
  friend AtomicMeasure operator-(AtomicMeasure a, const AtomicMeasure& b) { return a -= b; }

  AtomicMeasure scaled(const Rational& c) const {
    AtomicMeasure out;
    for (const auto& [p, m] : atoms_) out.add_atom(p, m * c);
    return out;
  }

  /// Image measure under f; masses of colliding atoms are summed.
  template <class F>
  auto mapped(F&& f) const {
    using Q = std::decay_t<std::invoke_result_t<F, const Point&>>;
    AtomicMeasure<Q> out;
    for (const auto& [p, m] : atoms_) out.add_atom(f(p), m);
    return out;
  }

  /// Sum of mass * f(point).
  template <class F>
  Rational integrate(F&& f) const {
    Rational s;
    for (const auto& [p, m] : atoms_) s += m * f(p);
    return s;
  }

  friend bool operator==(const AtomicMeasure& a, const AtomicMeasure& b) {
    return a.atoms_ == b.atoms_;
  }

 private:
  container atoms_;
};

template <class Point>
AtomicMeasure<Point> add(const AtomicMeasure<Point>& a, const AtomicMeasure<Point>& b) {
  return a + b;
}

template <class Point>
AtomicMeasure<Point> scale(const AtomicMeasure<Point>& a, const Rational& c) {
  return a.scaled(c);
}

template <class Point>
Rational total_mass(const AtomicMeasure<Point>& a) {
  return a.total_mass();
}

template <class Point>
bool is_probability(const AtomicMeasure<Point>& a) {
  return a.is_probability();
}

}  // namespace napt
