#pragma once

#include <vector>

namespace phaseless {

struct GaussRule {
  std::vector<double> nodes;    // on [−1, 1]
  std::vector<double> weights;
};

/// n-point Gauss–Legendre rule. Rules are computed once and cached.
const GaussRule& gauss_legendre(int n);

/// ∫_a^b f by the n-point rule mapped to [a, b].
template <class F>
auto integrate_gauss(F&& f, double a, double b, int n) {
  const GaussRule& rule = gauss_legendre(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  decltype(f(mid)) sum{};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return half * sum;
}

}  // namespace phaseless
