#pragma once

#include <span>
#include <vector>

#include "phaseless/types.hpp"

/// Bessel and Hankel functions of integer order and real argument, and the
/// 2D Helmholtz fundamental solution.
///
/// Conventions fixed for the whole library:
///   Φ(x, y) = (i/4) H₀⁽¹⁾(k|x − y|)
///   u^s(x) = e^{ik|x|} / √|x| · (u∞(x̂) + O(1/|x|))
///   γ = e^{iπ/4} / √(8πk), the far-field constant of Φ.
namespace phaseless::special {

inline constexpr int kMaxOrder = 60;
inline constexpr double kMaxArgument = 1.0e4;

/// J₀, J₁, Y₀, Y₁ at one argument. Unchecked fast path used by kernel
/// assembly; requires x > 0 (no upper limit).
struct Bessel01 {
  double j0, j1, y0, y1;
};
Bessel01 bessel01(double x);

/// J_order(x). Throws DomainError for order ∉ [0, 60], x < 0 or x > 1e4.
double bessel_j(int order, double x);

/// Y_order(x). Throws DomainError for x ≤ 0 (logarithmic singularity) or
/// the same range violations as bessel_j.
double bessel_y(int order, double x);

/// H⁽¹⁾_order(x) = J_order(x) + i Y_order(x).
Complex hankel1(int order, double x);

/// H⁽¹⁾′_order(x), via H′ₙ = H_{n−1} − (n/x) Hₙ (H′₀ = −H₁).
Complex hankel1_derivative(int order, double x);

/// J′_order(x).
double bessel_j_derivative(int order, double x);

/// Fills j[n] = J_n(x) for n = 0..j.size()−1 in one pass. x ≥ 0.
void bessel_j_sequence(double x, std::span<double> j);

/// Fills j[n] = J_n(x), y[n] = Y_n(x) for n = 0..size−1. x > 0.
void bessel_jy_sequence(double x, std::span<double> j, std::span<double> y);

/// H⁽¹⁾_n(x) for n = 0..max_order.
std::vector<Complex> hankel1_sequence(int max_order, double x);

/// (i/4) H₀⁽¹⁾(k|x − y|). Throws SingularityError when x = y.
Complex fundamental_solution(double k, Vec2 x, Vec2 y);

/// Gradient of Φ(·, y) at x: −(ik/4) H₁⁽¹⁾(kr) (x − y)/r.
std::pair<Complex, Complex> fundamental_solution_gradient(double k, Vec2 x, Vec2 y);

/// γ = e^{iπ/4} / √(8πk).
Complex farfield_constant(double k);

/// Far-field factor of the outgoing mode H⁽¹⁾_{|n|}(kr) e^{inφ}:
/// √(2/(πk)) e^{−i(|n|π/2 + π/4)}.
Complex mode_farfield_factor(int n, double k);

}  // namespace phaseless::special
