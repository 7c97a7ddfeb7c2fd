#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "phaseless/errors.hpp"

namespace phaseless::detail {

struct GmresResult {
  Eigen::VectorXcd x;
  int iterations = 0;
  double residual = 0.0;
};

// Restarted GMRES(m) with Givens rotations, zero initial guess.
inline GmresResult gmres(const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>& apply,
                         const Eigen::VectorXcd& b, double tol, int restart, int max_iterations) {
  using Vec = Eigen::VectorXcd;
  using C = std::complex<double>;
  const double bnorm = b.norm();
  GmresResult out{Vec::Zero(b.size()), 0, 0.0};
  if (bnorm == 0.0) return out;

  Vec r = b;
  double rel = 1.0;
  while (out.iterations < max_iterations) {
    const double beta = r.norm();
    std::vector<Vec> V{r / beta};
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(restart + 1, restart);
    std::vector<C> cs(restart), sn(restart);
    Vec g = Vec::Zero(restart + 1);
    g[0] = beta;
    int j = 0;
    for (; j < restart && out.iterations < max_iterations; ++j) {
      ++out.iterations;
      Vec w = apply(V[j]);
      for (int i = 0; i <= j; ++i) {
        H(i, j) = V[i].dot(w);
        w -= H(i, j) * V[i];
      }
      // One reorthogonalization pass keeps the basis orthonormal to rounding.
      for (int i = 0; i <= j; ++i) {
        const C c = V[i].dot(w);
        H(i, j) += c;
        w -= c * V[i];
      }
      const double hn = w.norm();
      H(j + 1, j) = hn;
      for (int i = 0; i < j; ++i) {
        const C a = H(i, j);
        const C bb = H(i + 1, j);
        H(i, j) = std::conj(cs[i]) * a + std::conj(sn[i]) * bb;
        H(i + 1, j) = -sn[i] * a + cs[i] * bb;
      }
      const C a = H(j, j);
      const double denom = std::sqrt(std::norm(a) + hn * hn);
      cs[j] = denom == 0.0 ? C(1.0) : a / denom;
      sn[j] = denom == 0.0 ? C(0.0) : C(hn / denom);
      H(j, j) = std::conj(cs[j]) * a + std::conj(sn[j]) * hn;
      H(j + 1, j) = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = std::conj(cs[j]) * g[j];
      rel = std::abs(g[j + 1]) / bnorm;
      if (hn == 0.0 || rel < tol) {
        ++j;
        break;
      }
      V.push_back(w / hn);
    }
    const Eigen::MatrixXcd R = H.topLeftCorner(j, j);
    const Vec y = R.triangularView<Eigen::Upper>().solve(g.head(j));
    for (int i = 0; i < j; ++i) out.x += y[i] * V[i];
    r = b - apply(out.x);
    rel = r.norm() / bnorm;
    if (rel < tol) {
      out.residual = rel;
      return out;
    }
  }
  throw ConvergenceError("GMRES stopped after " + std::to_string(out.iterations) +
                             " iterations with relative residual " + std::to_string(rel),
                         rel);
}

}  // namespace phaseless::detail
