#pragma once

// Independent reference solutions built on Boost.Math Bessel functions.

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/bessel_prime.hpp>
#include <cmath>
#include <complex>
#include <numbers>

namespace oracle {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

inline double J(int n, double x) { return boost::math::cyl_bessel_j(n, x); }
inline double Y(int n, double x) { return boost::math::cyl_neumann(n, x); }
inline double Jp(int n, double x) { return boost::math::cyl_bessel_j_prime(n, x); }
inline double Yp(int n, double x) { return boost::math::cyl_neumann_prime(n, x); }
inline cplx H(int n, double x) { return {J(n, x), Y(n, x)}; }
inline cplx Hp(int n, double x) { return {Jp(n, x), Yp(n, x)}; }

inline cplx i_pow(int n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return 1.0;
    case 1: return I;
    case 2: return -1.0;
    default: return -I;
  }
}

enum class Bc { dirichlet, neumann, robin };

// Scattering coefficient a_n of a plane wave by a disk of radius a centered at
// the origin: u^s = Σ a_n H_n(kr) e^{in(θ−θd)}.
inline cplx disk_coefficient(Bc bc, int n, double k, double a, cplx eta = 0.0) {
  const double ka = k * a;
  switch (bc) {
    case Bc::dirichlet: return -i_pow(n) * J(n, ka) / H(n, ka);
    case Bc::neumann: return -i_pow(n) * Jp(n, ka) / Hp(n, ka);
    case Bc::robin: return -i_pow(n) * (k * Jp(n, ka) + eta * J(n, ka)) / (k * Hp(n, ka) + eta * H(n, ka));
  }
  return 0.0;
}

inline int order_for(double k, double a) { return static_cast<int>(k * a) + 30; }

// Scattered field at (r, θ) for incidence angle θd.
inline cplx disk_scattered(Bc bc, double k, double a, double r, double theta, double theta_d,
                           cplx eta = 0.0) {
  cplx s = 0.0;
  const int nmax = order_for(k, a);
  for (int n = -nmax; n <= nmax; ++n) {
    const int m = std::abs(n);
    const cplx c = disk_coefficient(bc, m, k, a, eta);
    s += c * H(m, k * r) * std::exp(I * (double(n) * (theta - theta_d)));
  }
  return s;
}

// Far field under u^s ~ e^{ikr}/√r u∞.
inline cplx disk_farfield(Bc bc, double k, double a, double theta, double theta_d, cplx eta = 0.0) {
  cplx s = 0.0;
  const int nmax = order_for(k, a);
  for (int n = -nmax; n <= nmax; ++n) {
    const int m = std::abs(n);
    const cplx factor = std::sqrt(2.0 / (pi * k)) * std::exp(-I * (m * pi / 2.0 + pi / 4.0));
    s += disk_coefficient(bc, m, k, a, eta) * factor * std::exp(I * (double(n) * (theta - theta_d)));
  }
  return s;
}

// Penetrable disk of index n0: coefficient of H_n(kr) outside.
inline cplx transmission_coefficient(int n, double k, double a, double n0) {
  const double k1 = k * std::sqrt(n0);
  const double ka = k * a;
  const double k1a = k1 * a;
  const cplx num = k1 * Jp(n, k1a) * J(n, ka) - k * J(n, k1a) * Jp(n, ka);
  const cplx den = k * J(n, k1a) * Hp(n, ka) - k1 * Jp(n, k1a) * H(n, ka);
  return i_pow(n) * num / den;
}

inline cplx transmission_farfield(double k, double a, double n0, double theta, double theta_d) {
  cplx s = 0.0;
  const int nmax = order_for(k * std::sqrt(n0), a);
  for (int n = -nmax; n <= nmax; ++n) {
    const int m = std::abs(n);
    const cplx factor = std::sqrt(2.0 / (pi * k)) * std::exp(-I * (m * pi / 2.0 + pi / 4.0));
    s += transmission_coefficient(m, k, a, n0) * factor * std::exp(I * (double(n) * (theta - theta_d)));
  }
  return s;
}

}  // namespace oracle
