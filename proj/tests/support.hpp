#pragma once

#include <memory>

#include "napt/graph.hpp"
#include "napt/pl_metric.hpp"

namespace napt::testing {

inline Rational q(long long p, long long d = 1) { return Rational(p, d); }

// Path a--b, one edge "e" of length 1, reference delta_a + delta_b.
inline std::shared_ptr<const MetricGraph> g1() {
  return std::make_shared<const MetricGraph>(std::vector<std::string>{"a", "b"},
                                             std::vector<Edge>{{"e", 0, 1, q(1)}},
                                             std::vector<Rational>{q(1), q(1)});
}

inline PLMetric vshape(std::shared_ptr<const MetricGraph> g) {
  return PLMetric(g, {q(0), q(0)}, {{{q(1, 2), q(-1, 2)}}});
}

inline PLMetric tent(std::shared_ptr<const MetricGraph> g) {
  return PLMetric(g, {q(0), q(0)}, {{{q(1, 2), q(1, 2)}}});
}

inline PLMetric tilt(std::shared_ptr<const MetricGraph> g) { return PLMetric(g, {q(0), q(1)}); }

}  // namespace napt::testing
