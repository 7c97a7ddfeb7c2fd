#include "phaseless/forward_obstacle.hpp"

#include <array>
#include <cmath>
#include <string>

#include "phaseless/errors.hpp"
#include "phaseless/parallel.hpp"
#include "phaseless/quadrature.hpp"
#include "phaseless/special_functions.hpp"

namespace phaseless {
namespace {

constexpr double kEulerGamma = 0.57721566490153286061;
constexpr int kPanelOrder = 16;
// Targets closer than this many local node spacings get panel quadrature.
constexpr double kNearFactor = 8.0;

using Matrix = Eigen::MatrixXcd;

// Kress weights R_{ij} = R(t_i − t_j) for ∫ ln(4 sin²((t−τ)/2)) f(τ) dτ.
Eigen::MatrixXd kress_weights(int nodes) {
  const int n = nodes / 2;
  std::vector<double> r(nodes);
  for (int d = 0; d < nodes; ++d) {
    const double s = kPi * d / n;
    double sum = 0.0;
    for (int m = 1; m < n; ++m) sum += std::cos(m * s) / m;
    r[d] = -2.0 * kPi / n * sum - kPi / (static_cast<double>(n) * n) * (d % 2 == 0 ? 1.0 : -1.0);
  }
  Eigen::MatrixXd w(nodes, nodes);
  for (int i = 0; i < nodes; ++i) {
    for (int j = 0; j < nodes; ++j) w(i, j) = r[(i - j + nodes) % nodes];
  }
  return w;
}

// Periodic cardinal function for even N: ℓ(s) = sin(Ns/2) cot(s/2) / N.
double cardinal(int nodes, double s) {
  const double half = 0.5 * s;
  const double sh = std::sin(half);
  if (std::fabs(sh) < 1e-14) return 1.0;
  return std::sin(nodes * half) * std::cos(half) / (sh * nodes);
}

struct KernelValue {
  Complex value;
  Complex d1;
  Complex d2;
};

// Combined-potential kernel ∂Φ/∂ν(y)|p'| − iη_c Φ |p'| at target x and its x-gradient.
// `ny` is the unnormalized normal (p2', −p1') so ny = ν(y)|p'(τ)|.
KernelValue combined_kernel(double k, double coupling, Vec2 x, Vec2 y, Vec2 ny, double speed,
                            bool with_gradient) {
  const Vec2 rv = x - y;
  const double r = norm(rv);
  const special::Bessel01 b = special::bessel01(k * r);
  const Complex h0(b.j0, b.y0);
  const Complex h1(b.j1, b.y1);
  const double nr = dot(ny, rv);
  KernelValue out;
  out.value = 0.25 * kI * k * h1 * nr / r + 0.25 * coupling * h0 * speed;
  if (with_gradient) {
    const Complex f = h1 / r;
    const Complex fp = k * h0 / r - 2.0 * h1 / (r * r);
    const Complex dl = 0.25 * kI * k;
    const Complex sl = -0.25 * coupling * k * h1 * speed / r;
    out.d1 = dl * (f * ny.x1 + fp * nr * rv.x1 / r) + sl * rv.x1;
    out.d2 = dl * (f * ny.x2 + fp * nr * rv.x2 / r) + sl * rv.x2;
  }
  return out;
}

Vec2 scaled_normal(Vec2 dx) { return {dx.x2, -dx.x1}; }

// Graded panels on σ = τ − t* ∈ [−π, π], refined geometrically towards 0.
std::vector<std::pair<double, double>> graded_panels(double smallest) {
  std::vector<double> edges{0.0};
  double e = std::max(smallest, 1e-13);
  while (e < kPi) {
    edges.push_back(e);
    e *= 2.0;
  }
  edges.push_back(kPi);
  std::vector<std::pair<double, double>> panels;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    panels.emplace_back(edges[i], edges[i + 1]);
    panels.emplace_back(-edges[i + 1], -edges[i]);
  }
  return panels;
}

}  // namespace

CurveDiscretization::CurveDiscretization(const BoundaryCurve& c, int nodes)
    : curve(c), n(nodes), t(nodes), x(nodes), dx(nodes), ddx(nodes), speed(nodes) {
  if (nodes < 32 || nodes % 2 != 0) {
    throw GeometryError("obstacle quadrature needs an even node count >= 32, got " +
                        std::to_string(nodes));
  }
  for (int j = 0; j < nodes; ++j) {
    t[j] = kTwoPi * j / nodes;
    x[j] = curve.point(t[j]);
    dx[j] = curve.derivative(t[j]);
    ddx[j] = curve.second_derivative(t[j]);
    speed[j] = norm(dx[j]);
  }
}

ObstacleSolver::ObstacleSolver(const Obstacle& obstacle, double k)
    : obstacle_(obstacle), k_(k), coupling_(k), disc_(obstacle.curve, obstacle.nodes) {
  obstacle_.validate();
  if (!(k > 0.0)) throw GeometryError("wavenumber must be positive");
  const int N = disc_.n;
  const int n = N / 2;
  const double w = kPi / n;
  const Eigen::MatrixXd R = kress_weights(N);
  const auto& X = disc_.x;
  const auto& dX = disc_.dx;
  const auto& ddX = disc_.ddx;
  const auto& sp = disc_.speed;

  // S, K without the factor 2; optional K', A0, Sν for the impedance case.
  const bool impedance = obstacle.bc == BoundaryCondition::impedance;
  Matrix S(N, N), K(N, N), Kp, A0, Snu;
  if (impedance) {
    Kp.resize(N, N);
    A0.resize(N, N);
    Snu.resize(N, N);
  }
  parallel_for(static_cast<std::size_t>(N), [&](std::size_t row) {
    const int i = static_cast<int>(row);
    for (int j = 0; j < N; ++j) {
      double phi_log;       // coefficient of ln(4 sin²) in Φ
      Complex phi_smooth;   // Φ − phi_log · ln(4 sin²)
      double k_log_dl, k_log_adj;
      Complex k_smooth_dl, k_smooth_adj;
      if (i == j) {
        phi_log = -1.0 / (4.0 * kPi);
        phi_smooth = 0.25 * kI - kEulerGamma / (2.0 * kPi) - std::log(0.5 * k * sp[i]) / (2.0 * kPi);
        const double curv =
            (ddX[i].x1 * dX[i].x2 - ddX[i].x2 * dX[i].x1) / (4.0 * kPi * sp[i] * sp[i]);
        k_log_dl = k_log_adj = 0.0;
        k_smooth_dl = k_smooth_adj = curv;
      } else {
        const Vec2 rv = X[i] - X[j];
        const double r = norm(rv);
        const special::Bessel01 b = special::bessel01(k * r);
        const double ls = std::log(4.0 * std::pow(std::sin(0.5 * (disc_.t[i] - disc_.t[j])), 2));
        const Complex phi = 0.25 * kI * Complex(b.j0, b.y0);
        phi_log = -b.j0 / (4.0 * kPi);
        phi_smooth = phi - phi_log * ls;
        const double nd = dX[j].x2 * rv.x1 - dX[j].x1 * rv.x2;
        const Complex dl = 0.25 * kI * k * Complex(b.j1, b.y1) / r * nd;
        k_log_dl = -k / (4.0 * kPi) * b.j1 / r * nd;
        k_smooth_dl = dl - k_log_dl * ls;
        if (impedance) {
          const double ndp = (dX[i].x2 * rv.x1 - dX[i].x1 * rv.x2) * sp[j] / sp[i];
          const Complex adj = -0.25 * kI * k * Complex(b.j1, b.y1) / r * ndp;
          k_log_adj = k / (4.0 * kPi) * b.j1 / r * ndp;
          k_smooth_adj = adj - k_log_adj * ls;
        } else {
          k_log_adj = 0.0;
          k_smooth_adj = 0.0;
        }
      }
      const double rw = R(i, j);
      const Complex phi_w = rw * phi_log + w * phi_smooth;
      S(i, j) = phi_w * sp[j];
      K(i, j) = rw * k_log_dl + w * k_smooth_dl;
      if (impedance) {
        Kp(i, j) = rw * k_log_adj + w * k_smooth_adj;
        A0(i, j) = phi_w;
        Snu(i, j) = phi_w * dot(dX[i], dX[j]) / sp[i];
      }
    }
  });

  Matrix A;
  row_scale_.assign(N, 1.0);
  if (!impedance) {
    A = Matrix::Identity(N, N) + 2.0 * K - 2.0 * kI * coupling_ * S;
  } else {
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(N, N);
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < N; ++j) {
        if (i == j) continue;
        const double sign = (i - j) % 2 == 0 ? 1.0 : -1.0;
        D(i, j) = 0.5 * sign / std::tan(0.5 * (disc_.t[i] - disc_.t[j]));
      }
    }
    const Matrix Dc = D.cast<Complex>();
    Matrix T = Dc * A0 * Dc;
    for (int i = 0; i < N; ++i) T.row(i) /= sp[i];
    T += k * k * Snu;
    const Matrix I = Matrix::Identity(N, N);
    A = T - kI * coupling_ * (Kp - 0.5 * I);
    const Matrix trace = 0.5 * I + K - kI * coupling_ * S;
    for (int i = 0; i < N; ++i) {
      const Complex eta = obstacle.eta(disc_.t[i]);
      A.row(i) += eta * trace.row(i);
      row_scale_[i] = 1.0 / (1.0 + std::abs(eta));
      A.row(i) *= row_scale_[i];
    }
  }
  lu_.compute(A);
  const double rcond = lu_.rcond();
  if (!(rcond > 1e-14)) {
    throw NumericalError("obstacle system matrix is numerically singular (rcond " +
                         std::to_string(rcond) + ")");
  }
}

Eigen::VectorXcd ObstacleSolver::right_hand_side(const IncidentField& incident) const {
  if (const auto* src = std::get_if<PointSource>(&incident.variant)) {
    if (obstacle_.curve.contains(src->y)) {
      throw GeometryError("point source lies inside or on the obstacle");
    }
  }
  const int N = disc_.n;
  Eigen::VectorXcd b(N);
  IncidentField field = incident;
  field.k = k_;
  for (int i = 0; i < N; ++i) {
    const Complex u = eval_incident(field, disc_.x[i]);
    if (obstacle_.bc == BoundaryCondition::sound_soft) {
      b[i] = -2.0 * u;
    } else {
      const auto [g1, g2] = eval_incident_gradient(field, disc_.x[i]);
      const Vec2 nu = obstacle_.curve.normal(disc_.t[i]);
      b[i] = -(g1 * nu.x1 + g2 * nu.x2 + obstacle_.eta(disc_.t[i]) * u) * row_scale_[i];
    }
  }
  return b;
}

BoundaryDensity ObstacleSolver::solve(const IncidentField& incident) const {
  const Eigen::VectorXcd phi = lu_.solve(right_hand_side(incident));
  return {std::vector<Complex>(phi.data(), phi.data() + phi.size())};
}

std::vector<BoundaryDensity> ObstacleSolver::solve_many(std::span<const IncidentField> incidents) const {
  const int N = disc_.n;
  Matrix B(N, static_cast<Eigen::Index>(incidents.size()));
  for (std::size_t c = 0; c < incidents.size(); ++c) B.col(c) = right_hand_side(incidents[c]);
  const Matrix phi = lu_.solve(B);
  std::vector<BoundaryDensity> out(incidents.size());
  for (std::size_t c = 0; c < incidents.size(); ++c) {
    out[c].values.assign(phi.col(c).data(), phi.col(c).data() + N);
  }
  return out;
}

namespace {

// Rows of the value (and optionally gradient) evaluation matrices.
void evaluation_rows(const ObstacleSolver& solver, std::span<const Vec2> points, Matrix* value,
                     Matrix* g1, Matrix* g2) {
  const CurveDiscretization& disc = solver.discretization();
  const BoundaryCurve& curve = disc.curve;
  const double k = solver.wavenumber();
  const double coupling = solver.coupling();
  const int N = disc.n;
  const double w = kTwoPi / N;
  const bool grad = g1 != nullptr;
  if (value) value->resize(static_cast<Eigen::Index>(points.size()), N);
  if (grad) {
    g1->resize(static_cast<Eigen::Index>(points.size()), N);
    g2->resize(static_cast<Eigen::Index>(points.size()), N);
  }
  const GaussRule& rule = gauss_legendre(kPanelOrder);

  parallel_for(points.size(), [&](std::size_t p) {
    const Vec2 x = points[p];
    const double ts = curve.closest_parameter(x);
    const Vec2 foot = curve.point(ts);
    const double dist = distance(x, foot);
    if (curve.contains(x)) {
      throw GeometryError("evaluation point (" + std::to_string(x.x1) + ", " +
                          std::to_string(x.x2) + ") is inside or on the obstacle");
    }
    const double speed_star = norm(curve.derivative(ts));
    const Eigen::Index row = static_cast<Eigen::Index>(p);
    if (dist >= kNearFactor * speed_star * w) {
      for (int j = 0; j < N; ++j) {
        const KernelValue kv =
            combined_kernel(k, coupling, x, disc.x[j], scaled_normal(disc.dx[j]), disc.speed[j], grad);
        if (value) (*value)(row, j) = w * kv.value;
        if (grad) {
          (*g1)(row, j) = w * kv.d1;
          (*g2)(row, j) = w * kv.d2;
        }
      }
      return;
    }
    // Panel quadrature of ∫ K(x, τ) Σ_j ℓ(τ − t_j) φ_j dτ.
    Eigen::VectorXcd rv = Eigen::VectorXcd::Zero(N), r1, r2;
    if (grad) {
      r1 = Eigen::VectorXcd::Zero(N);
      r2 = Eigen::VectorXcd::Zero(N);
    }
    for (const auto& [a, b] : graded_panels(dist / speed_star)) {
      const double half = 0.5 * (b - a);
      const double mid = 0.5 * (a + b);
      for (int q = 0; q < kPanelOrder; ++q) {
        const double tau = ts + mid + half * rule.nodes[q];
        const double wq = half * rule.weights[q];
        const Vec2 y = curve.point(tau);
        const Vec2 dy = curve.derivative(tau);
        const KernelValue kv = combined_kernel(k, coupling, x, y, scaled_normal(dy), norm(dy), grad);
        for (int j = 0; j < N; ++j) {
          const double l = wq * cardinal(N, tau - disc.t[j]);
          rv[j] += l * kv.value;
          if (grad) {
            r1[j] += l * kv.d1;
            r2[j] += l * kv.d2;
          }
        }
      }
    }
    if (value) value->row(row) = rv.transpose();
    if (grad) {
      g1->row(row) = r1.transpose();
      g2->row(row) = r2.transpose();
    }
  });
}

}  // namespace

Matrix ObstacleSolver::field_matrix(std::span<const Vec2> points) const {
  Matrix e;
  evaluation_rows(*this, points, &e, nullptr, nullptr);
  return e;
}

std::pair<Matrix, Matrix> ObstacleSolver::gradient_matrices(std::span<const Vec2> points) const {
  Matrix a, b;
  evaluation_rows(*this, points, nullptr, &a, &b);
  return {std::move(a), std::move(b)};
}

Matrix ObstacleSolver::farfield_matrix(std::span<const double> angles) const {
  const int N = disc_.n;
  const double w = kTwoPi / N;
  const Complex gamma = special::farfield_constant(k_);
  Matrix f(static_cast<Eigen::Index>(angles.size()), N);
  for (std::size_t a = 0; a < angles.size(); ++a) {
    const Vec2 xh = unit_vector(angles[a]);
    for (int j = 0; j < N; ++j) {
      const Vec2 ny = scaled_normal(disc_.dx[j]);
      const Complex kern = -kI * k_ * dot(ny, xh) - kI * coupling_ * disc_.speed[j];
      f(static_cast<Eigen::Index>(a), j) =
          gamma * w * kern * std::exp(-kI * (k_ * dot(xh, disc_.x[j])));
    }
  }
  return f;
}

namespace {

Eigen::Map<const Eigen::VectorXcd> as_vector(const BoundaryDensity& d) {
  return {d.values.data(), static_cast<Eigen::Index>(d.values.size())};
}

std::vector<Complex> to_std(const Eigen::VectorXcd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

std::vector<Complex> ObstacleSolver::scattered(const BoundaryDensity& density,
                                               std::span<const Vec2> points) const {
  if (density.nodes() != disc_.n) throw GeometryError("density size does not match the solver nodes");
  return to_std(field_matrix(points) * as_vector(density));
}

std::vector<std::pair<Complex, Complex>> ObstacleSolver::scattered_gradient(
    const BoundaryDensity& density, std::span<const Vec2> points) const {
  if (density.nodes() != disc_.n) throw GeometryError("density size does not match the solver nodes");
  const auto [a, b] = gradient_matrices(points);
  const Eigen::VectorXcd ga = a * as_vector(density);
  const Eigen::VectorXcd gb = b * as_vector(density);
  std::vector<std::pair<Complex, Complex>> out(points.size());
  for (std::size_t p = 0; p < points.size(); ++p) out[p] = {ga[p], gb[p]};
  return out;
}

std::vector<Complex> ObstacleSolver::farfield(const BoundaryDensity& density,
                                              std::span<const double> angles) const {
  if (density.nodes() != disc_.n) throw GeometryError("density size does not match the solver nodes");
  return to_std(farfield_matrix(angles) * as_vector(density));
}

namespace {

const Obstacle& scene_obstacle(const Scene& scene) {
  const auto* obstacle = std::get_if<Obstacle>(&scene.scatterer());
  if (!obstacle) throw GeometryError("scene does not contain an obstacle");
  return *obstacle;
}

ObstacleSolver solver_for(const Scene& scene, int nodes) {
  Obstacle o = scene_obstacle(scene);
  o.nodes = nodes;
  return ObstacleSolver(o, scene.wavenumber());
}

}  // namespace

BoundaryDensity solve_obstacle(const Scene& scene, const IncidentField& incident, int nodes) {
  return solver_for(scene, nodes).solve(incident);
}

// Evaluation does not need the factorization, but the density must match the
// node count; rebuilding the solver keeps one code path for the kernels.
FieldSamples eval_scattered(const BoundaryDensity& density, const Scene& scene,
                            std::span<const Vec2> points) {
  const ObstacleSolver solver = solver_for(scene, density.nodes());
  return {std::vector<Vec2>(points.begin(), points.end()), solver.scattered(density, points),
          FieldTag::scattered};
}

FarField eval_farfield(const BoundaryDensity& density, const Scene& scene,
                       std::span<const double> angles) {
  const ObstacleSolver solver = solver_for(scene, density.nodes());
  return {std::vector<double>(angles.begin(), angles.end()), solver.farfield(density, angles),
          scene.wavenumber()};
}

FarField solve_point_source(const Scene& scene, Vec2 y, std::span<const double> angles) {
  const double k = scene.wavenumber();
  const Complex gamma = special::farfield_constant(k);
  FarField out{std::vector<double>(angles.begin(), angles.end()),
               std::vector<Complex>(angles.size()), k};
  for (std::size_t a = 0; a < angles.size(); ++a) {
    out.values[a] = gamma * std::exp(-kI * (k * dot(unit_vector(angles[a]), y)));
  }
  if (std::holds_alternative<NoScatterer>(scene.scatterer())) return out;
  if (!std::holds_alternative<Obstacle>(scene.scatterer())) {
    throw GeometryError("solve_point_source needs an obstacle scene");
  }
  const ObstacleSolver solver(scene_obstacle(scene), k);
  const auto scattered = solver.farfield(solver.solve(IncidentField::point_source(k, y)), angles);
  for (std::size_t a = 0; a < angles.size(); ++a) out.values[a] += scattered[a];
  return out;
}

}  // namespace phaseless
