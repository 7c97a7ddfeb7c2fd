#include "phaseless/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "phaseless/errors.hpp"

namespace phaseless::special {
namespace {

constexpr long double kEulerGammaL = 0.577215664901532860606512090082402431L;
constexpr long double kPiL = 3.141592653589793238462643383279502884L;

// Below this argument J0, J1, Y0, Y1 come from the ascending series summed
// in long double; above it from the Hankel asymptotic expansion.
constexpr double kSeriesLimit = 17.0;

Bessel01 series01(double xd) {
  const long double x = xd;
  const long double half = x / 2.0L;
  const long double q = half * half;

  // J0 and the Y0 correction share the terms t_k = (−q)^k / (k!)².
  long double t = 1.0L;
  long double j0 = 1.0L;
  long double y0_sum = 0.0L;
  long double harmonic = 0.0L;
  for (int k = 1; k < 200; ++k) {
    t *= -q / (static_cast<long double>(k) * k);
    harmonic += 1.0L / k;
    j0 += t;
    y0_sum += harmonic * t;
    if (k > q && std::fabs(t) * (1.0L + harmonic) < 1e-22L * std::fabs(j0) + 1e-300L) break;
  }

  // J1 terms s_k = (x/2)(−q)^k / (k!(k+1)!); Y1 uses weights H_k + H_{k+1}.
  long double s = half;
  long double j1 = s;
  harmonic = 0.0L;  // H_0
  long double y1_sum = (0.0L + 1.0L) * s;
  for (int k = 1; k < 200; ++k) {
    s *= -q / (static_cast<long double>(k) * (k + 1));
    harmonic += 1.0L / k;
    const long double weight = 2.0L * harmonic + 1.0L / (k + 1);
    j1 += s;
    y1_sum += weight * s;
    if (k > q && std::fabs(s) * (1.0L + weight) < 1e-22L * std::fabs(j1) + 1e-300L) break;
  }

  const long double log_term = std::log(half) + kEulerGammaL;
  const long double y0 = (2.0L / kPiL) * (log_term * j0 - y0_sum);
  const long double y1 = -2.0L / (kPiL * x) + (2.0L / kPiL) * log_term * j1 - y1_sum / kPiL;
  return {static_cast<double>(j0), static_cast<double>(j1), static_cast<double>(y0),
          static_cast<double>(y1)};
}

// P and Q of the Hankel expansion for order nu ∈ {0, 1}.
void hankel_pq(int nu, long double x, long double& p, long double& q) {
  const long double mu = 4.0L * nu * nu;
  long double term = 1.0L;
  p = 1.0L;
  q = 0.0L;
  long double previous = 1.0L;
  for (int k = 1; k < 200; ++k) {
    const long double odd = 2.0L * k - 1.0L;
    term *= (mu - odd * odd) / (8.0L * k * x);
    const long double mag = std::fabs(term);
    if (mag > previous) break;  // asymptotic series started to diverge
    const int quarter = (k / 2) % 2;
    if (k % 2 == 0) {
      p += quarter == 0 ? term : -term;
    } else {
      q += ((k - 1) / 2) % 2 == 0 ? term : -term;
    }
    if (mag < 1e-21L) break;
    previous = mag;
  }
}

Bessel01 asymptotic01(double xd) {
  const long double x = xd;
  const long double amp = std::sqrt(2.0L / (kPiL * x));
  const long double c = std::cos(x);
  const long double s = std::sin(x);
  const long double r2 = 1.0L / std::sqrt(2.0L);

  long double p0, q0, p1, q1;
  hankel_pq(0, x, p0, q0);
  hankel_pq(1, x, p1, q1);

  // χ₀ = x − π/4, χ₁ = x − 3π/4, expanded so that x is never shifted.
  const long double cos0 = (c + s) * r2;
  const long double sin0 = (s - c) * r2;
  const long double cos1 = (s - c) * r2;
  const long double sin1 = -(s + c) * r2;

  return {static_cast<double>(amp * (p0 * cos0 - q0 * sin0)),
          static_cast<double>(amp * (p1 * cos1 - q1 * sin1)),
          static_cast<double>(amp * (p0 * sin0 + q0 * cos0)),
          static_cast<double>(amp * (p1 * sin1 + q1 * cos1))};
}

void check_order(int order) {
  if (order < 0 || order > kMaxOrder) {
    throw DomainError("Bessel order " + std::to_string(order) + " outside [0, 60]");
  }
}

void check_argument(double x, bool strictly_positive) {
  if (!std::isfinite(x) || x < 0.0 || (strictly_positive && x == 0.0)) {
    throw DomainError("Bessel argument " + std::to_string(x) +
                      (strictly_positive ? " must be > 0" : " must be >= 0"));
  }
  if (x > kMaxArgument) {
    throw DomainError("Bessel argument " + std::to_string(x) + " exceeds 1e4");
  }
}

}  // namespace

Bessel01 bessel01(double x) { return x < kSeriesLimit ? series01(x) : asymptotic01(x); }

void bessel_j_sequence(double x, std::span<double> j) {
  const int n_max = static_cast<int>(j.size()) - 1;
  if (n_max < 0) return;
  if (x == 0.0) {
    std::fill(j.begin(), j.end(), 0.0);
    j[0] = 1.0;
    return;
  }
  const Bessel01 b = bessel01(x);
  if (n_max <= 1 || static_cast<double>(n_max) < x) {
    // Forward recurrence is stable while n < x.
    j[0] = b.j0;
    if (n_max >= 1) j[1] = b.j1;
    for (int n = 1; n < n_max; ++n) j[n + 1] = (2.0 * n / x) * j[n] - j[n - 1];
    return;
  }

  // Miller's backward recurrence normalized by J₀ + 2ΣJ_{2k} = 1.
  const int base = std::max(n_max, static_cast<int>(std::ceil(x)));
  int start = base + 20 + static_cast<int>(std::sqrt(40.0 * base));
  start += start % 2;
  std::vector<double> f(static_cast<std::size_t>(start) + 2, 0.0);
  f[start + 1] = 0.0;
  f[start] = 1.0;
  for (int n = start; n >= 1; --n) {
    f[n - 1] = (2.0 * n / x) * f[n] - f[n + 1];
    if (std::fabs(f[n - 1]) > 1e200) {
      for (int m = n - 1; m <= start + 1; ++m) f[m] *= 1e-200;
    }
  }
  double norm = f[0];
  for (int n = 2; n <= start; n += 2) norm += 2.0 * f[n];
  for (int n = 0; n <= n_max; ++n) j[n] = f[n] / norm;
}

void bessel_jy_sequence(double x, std::span<double> j, std::span<double> y) {
  bessel_j_sequence(x, j);
  const int n_max = static_cast<int>(y.size()) - 1;
  if (n_max < 0) return;
  const Bessel01 b = bessel01(x);
  y[0] = b.y0;
  if (n_max >= 1) y[1] = b.y1;
  for (int n = 1; n < n_max; ++n) y[n + 1] = (2.0 * n / x) * y[n] - y[n - 1];
}

double bessel_j(int order, double x) {
  check_order(order);
  check_argument(x, false);
  if (order == 0 && x > 0.0) return bessel01(x).j0;
  if (order == 1 && x > 0.0) return bessel01(x).j1;
  std::vector<double> j(static_cast<std::size_t>(order) + 1);
  bessel_j_sequence(x, j);
  return j[order];
}

double bessel_y(int order, double x) {
  check_order(order);
  check_argument(x, true);
  const Bessel01 b = bessel01(x);
  if (order == 0) return b.y0;
  if (order == 1) return b.y1;
  double ym = b.y0;
  double yn = b.y1;
  for (int n = 1; n < order; ++n) {
    const double next = (2.0 * n / x) * yn - ym;
    ym = yn;
    yn = next;
  }
  if (!std::isfinite(yn)) {
    throw DomainError("Y_" + std::to_string(order) + "(" + std::to_string(x) + ") overflows");
  }
  return yn;
}

Complex hankel1(int order, double x) { return {bessel_j(order, x), bessel_y(order, x)}; }

Complex hankel1_derivative(int order, double x) {
  if (order == 0) return -hankel1(1, x);
  return hankel1(order - 1, x) - (static_cast<double>(order) / x) * hankel1(order, x);
}

double bessel_j_derivative(int order, double x) {
  check_order(order);
  check_argument(x, false);
  // The sequence helper has no order cap, so J_{order+1} is always available.
  std::vector<double> j(static_cast<std::size_t>(order) + 2);
  bessel_j_sequence(x, j);
  if (order == 0) return -j[1];
  return 0.5 * (j[order - 1] - j[order + 1]);
}

std::vector<Complex> hankel1_sequence(int max_order, double x) {
  check_order(max_order);
  check_argument(x, true);
  std::vector<double> j(static_cast<std::size_t>(max_order) + 1);
  std::vector<double> y(j.size());
  bessel_jy_sequence(x, j, y);
  std::vector<Complex> h(j.size());
  for (std::size_t n = 0; n < j.size(); ++n) h[n] = {j[n], y[n]};
  return h;
}

Complex fundamental_solution(double k, Vec2 x, Vec2 y) {
  const double r = distance(x, y);
  if (r == 0.0) throw SingularityError("fundamental solution evaluated at its source point");
  const Bessel01 b = bessel01(k * r);
  return 0.25 * kI * Complex(b.j0, b.y0);
}

std::pair<Complex, Complex> fundamental_solution_gradient(double k, Vec2 x, Vec2 y) {
  const Vec2 d = x - y;
  const double r = norm(d);
  if (r == 0.0) throw SingularityError("fundamental solution gradient evaluated at its source point");
  const Bessel01 b = bessel01(k * r);
  const Complex factor = -0.25 * kI * k * Complex(b.j1, b.y1) / r;
  return {factor * d.x1, factor * d.x2};
}

Complex farfield_constant(double k) {
  return std::exp(kI * (kPi / 4.0)) / std::sqrt(8.0 * kPi * k);
}

Complex mode_farfield_factor(int n, double k) {
  const int m = n < 0 ? -n : n;
  return std::sqrt(2.0 / (kPi * k)) * std::exp(-kI * (m * kPi / 2.0 + kPi / 4.0));
}

}  // namespace phaseless::special
