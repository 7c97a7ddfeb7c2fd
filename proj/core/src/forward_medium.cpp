#include "phaseless/forward_medium.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include "gmres.hpp"
#include "phaseless/errors.hpp"
#include "phaseless/parallel.hpp"
#include "phaseless/quadrature.hpp"
#include "phaseless/special_functions.hpp"

namespace phaseless {
namespace {

constexpr double kGmresTolerance = 1e-10;
constexpr int kGmresRestart = 60;
constexpr int kGmresMaxIterations = 3000;

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// ∫₀^R r Φ(r) dr for the radial ray integral about a point inside the cell.
Complex radial_integral(double k, double R) {
  const special::Bessel01 b = special::bessel01(k * R);
  return 0.25 * kI * (R * Complex(b.j1, b.y1) / k + 2.0 * kI / (kPi * k * k));
}

// Tensor Gauss rule of order q on each of s×s subcells of the square.
Complex tensor_gauss(double k, Vec2 x, Vec2 lo, double h, int s, int q) {
  const GaussRule& rule = gauss_legendre(q);
  const double sub = h / s;
  Complex sum = 0.0;
  for (int a = 0; a < s; ++a) {
    for (int b = 0; b < s; ++b) {
      const Vec2 o = lo + Vec2{(a + 0.5) * sub, (b + 0.5) * sub};
      for (int i = 0; i < q; ++i) {
        for (int j = 0; j < q; ++j) {
          const Vec2 y = o + 0.5 * sub * Vec2{rule.nodes[i], rule.nodes[j]};
          const special::Bessel01 bj = special::bessel01(k * distance(x, y));
          sum += rule.weights[i] * rule.weights[j] * Complex(-bj.y0, bj.j0);
        }
      }
    }
  }
  return 0.25 * sum * (0.25 * sub * sub);
}

}  // namespace

Complex cell_integral(double k, Vec2 x, Vec2 c, double h) {
  const Vec2 d = x - c;
  const double half = 0.5 * h;
  const double gap = std::max(std::fabs(d.x1), std::fabs(d.x2)) - half;
  if (gap < 0.0) {
    // Polar integration about x; the ray length is piecewise smooth between corners.
    const Vec2 lo = c - Vec2{half, half};
    const Vec2 hi = c + Vec2{half, half};
    std::vector<double> breaks;
    for (Vec2 corner : {lo, hi, Vec2{lo.x1, hi.x2}, Vec2{hi.x1, lo.x2}}) {
      breaks.push_back(wrap_angle(std::atan2(corner.x2 - x.x2, corner.x1 - x.x1)));
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.push_back(breaks.front() + kTwoPi);
    auto ray = [&](double th) {
      const double c1 = std::cos(th);
      const double s1 = std::sin(th);
      double R = 1e300;
      if (c1 > 0) R = std::min(R, (hi.x1 - x.x1) / c1);
      if (c1 < 0) R = std::min(R, (lo.x1 - x.x1) / c1);
      if (s1 > 0) R = std::min(R, (hi.x2 - x.x2) / s1);
      if (s1 < 0) R = std::min(R, (lo.x2 - x.x2) / s1);
      return radial_integral(k, R);
    };
    Complex sum = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
      if (breaks[i + 1] - breaks[i] > 1e-15) sum += integrate_gauss(ray, breaks[i], breaks[i + 1], 24);
    }
    return sum;
  }
  const Vec2 lo = c - Vec2{half, half};
  if (gap < 1.0 * h) return tensor_gauss(k, x, lo, h, 4, 12);
  if (gap < 3.0 * h) return tensor_gauss(k, x, lo, h, 2, 10);
  if (gap < 8.0 * h) return tensor_gauss(k, x, lo, h, 1, 8);
  return tensor_gauss(k, x, lo, h, 1, 5);
}

struct MediumSolver::Fft {
  int size = 0;  // 2N
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  std::vector<Complex> kernel_hat;

  ~Fft() {
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

namespace {

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))), size(n) {
    std::fill_n(reinterpret_cast<double*>(data), 2 * n, 0.0);
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  Complex* complex() { return reinterpret_cast<Complex*>(data); }
  fftw_complex* data;
  std::size_t size;
};

}  // namespace

MediumSolver::MediumSolver(const MediumIndex& medium, double k)
    : medium_(medium), k_(k), fft_(std::make_unique<Fft>()) {
  if (!(k > 0.0)) throw GeometryError("wavenumber must be positive");
  const int N = medium.cells_per_side();
  const double h = medium.cell_size();
  for (int i2 = 0; i2 < N; ++i2) {
    for (int i1 = 0; i1 < N; ++i1) {
      if (medium.value(i1, i2) != Complex(1.0, 0.0)) support_.push_back(static_cast<std::size_t>(i2) * N + i1);
    }
  }
  if (!support_.empty()) {
    support_center_ = medium.support_box().center();
    support_radius_ = medium.support_radius(support_center_);
  } else {
    support_center_ = medium.center();
  }

  // Kernel values depend on |d1|, |d2| and are symmetric under swapping them.
  std::vector<Complex> g(static_cast<std::size_t>(N) * N);
  std::vector<std::pair<int, int>> offsets;
  for (int a = 0; a < N; ++a) {
    for (int b = 0; b <= a; ++b) offsets.emplace_back(a, b);
  }
  parallel_for(offsets.size(), [&](std::size_t i) {
    const auto [a, b] = offsets[i];
    const Complex v = cell_integral(k, Vec2{a * h, b * h}, Vec2{}, h);
    g[static_cast<std::size_t>(a) * N + b] = v;
    g[static_cast<std::size_t>(b) * N + a] = v;
  });

  const int M = 2 * N;
  fft_->size = M;
  FftwBuffer buf(static_cast<std::size_t>(M) * M);
  Complex* kb = buf.complex();
  for (int r = 0; r < M; ++r) {
    if (r == N) continue;
    const int d2 = r < N ? r : M - r;
    for (int c = 0; c < M; ++c) {
      if (c == N) continue;
      const int d1 = c < N ? c : M - c;
      kb[static_cast<std::size_t>(r) * M + c] = g[static_cast<std::size_t>(d1) * N + d2];
    }
  }
  {
    std::lock_guard lock(planner_mutex());
    FftwBuffer scratch(static_cast<std::size_t>(M) * M);
    fft_->forward = fftw_plan_dft_2d(M, M, scratch.data, scratch.data, FFTW_FORWARD, FFTW_ESTIMATE);
    fft_->backward = fftw_plan_dft_2d(M, M, scratch.data, scratch.data, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  fftw_execute_dft(fft_->forward, buf.data, buf.data);
  fft_->kernel_hat.assign(kb, kb + static_cast<std::size_t>(M) * M);
}

MediumSolver::~MediumSolver() = default;

std::vector<Complex> MediumSolver::apply(std::span<const Complex> u) const {
  const int N = medium_.cells_per_side();
  const int M = fft_->size;
  std::vector<Complex> out(u.begin(), u.end());
  if (support_.empty()) return out;
  FftwBuffer buf(static_cast<std::size_t>(M) * M);
  Complex* w = buf.complex();
  const auto& n = medium_.values();
  for (std::size_t p : support_) {
    const std::size_t i2 = p / N;
    const std::size_t i1 = p % N;
    w[i2 * M + i1] = (n[p] - 1.0) * u[p];
  }
  fftw_execute_dft(fft_->forward, buf.data, buf.data);
  for (std::size_t i = 0; i < buf.size; ++i) w[i] *= fft_->kernel_hat[i];
  fftw_execute_dft(fft_->backward, buf.data, buf.data);
  const double scale = k_ * k_ / (static_cast<double>(M) * M);
  for (int i2 = 0; i2 < N; ++i2) {
    for (int i1 = 0; i1 < N; ++i1) {
      out[static_cast<std::size_t>(i2) * N + i1] -= scale * w[static_cast<std::size_t>(i2) * M + i1];
    }
  }
  return out;
}

VolumeField MediumSolver::solve(const IncidentField& incident) const {
  const int N = medium_.cells_per_side();
  if (const auto* src = std::get_if<PointSource>(&incident.variant)) {
    const Vec2 d = src->y - medium_.center();
    if (std::max(std::fabs(d.x1), std::fabs(d.x2)) <= medium_.half_width()) {
      throw GeometryError("point source lies inside the medium grid");
    }
  }
  IncidentField field = incident;
  field.k = k_;
  Eigen::VectorXcd b(static_cast<Eigen::Index>(N) * N);
  for (int i2 = 0; i2 < N; ++i2) {
    for (int i1 = 0; i1 < N; ++i1) {
      b[static_cast<Eigen::Index>(i2) * N + i1] = eval_incident(field, medium_.cell_center(i1, i2));
    }
  }
  VolumeField out;
  if (support_.empty()) {
    out.values.assign(b.data(), b.data() + b.size());
    return out;
  }
  auto op = [&](const Eigen::VectorXcd& v) {
    const std::vector<Complex> r = apply(std::span<const Complex>(v.data(), static_cast<std::size_t>(v.size())));
    return Eigen::VectorXcd(Eigen::Map<const Eigen::VectorXcd>(r.data(), static_cast<Eigen::Index>(r.size())));
  };
  const detail::GmresResult res =
      detail::gmres(op, b, kGmresTolerance, kGmresRestart, kGmresMaxIterations);
  out.values.assign(res.x.data(), res.x.data() + res.x.size());
  out.iterations = res.iterations;
  out.residual = res.residual;
  return out;
}

std::vector<Complex> MediumSolver::farfield(const VolumeField& field, std::span<const double> angles) const {
  const int N = medium_.cells_per_side();
  const double h = medium_.cell_size();
  const Complex pre = special::farfield_constant(k_) * k_ * k_ * h * h;
  const auto& n = medium_.values();
  std::vector<Complex> out(angles.size());
  parallel_for(angles.size(), [&](std::size_t a) {
    const Vec2 xh = unit_vector(angles[a]);
    Complex sum = 0.0;
    for (std::size_t p : support_) {
      const Vec2 y = medium_.cell_center(static_cast<int>(p % N), static_cast<int>(p / N));
      sum += std::exp(-kI * (k_ * dot(xh, y))) * (n[p] - 1.0) * field.values[p];
    }
    out[a] = pre * sum;
  });
  return out;
}

namespace {

// c_n = (i/4) k² h² Σ J_|n|(k|y − c|) e^{−inφ_y} (n − 1) u over support cells.
std::vector<Complex> multipole_coefficients(const MediumIndex& medium, double k,
                                            const std::vector<std::size_t>& support, Vec2 center,
                                            int order, const VolumeField& field) {
  const int N = medium.cells_per_side();
  const double h = medium.cell_size();
  const auto& n = medium.values();
  std::vector<Complex> c(2 * static_cast<std::size_t>(order) + 1, 0.0);
  std::vector<double> j(static_cast<std::size_t>(order) + 1);
  for (std::size_t p : support) {
    const Vec2 y = medium.cell_center(static_cast<int>(p % N), static_cast<int>(p / N)) - center;
    const double rho = norm(y);
    special::bessel_j_sequence(k * rho, j);
    const Complex w = (n[p] - 1.0) * field.values[p];
    const Complex step = rho > 0.0 ? std::exp(-kI * std::atan2(y.x2, y.x1)) : Complex(1.0);
    Complex e = 1.0;
    c[order] += j[0] * w;
    for (int m = 1; m <= order; ++m) {
      e *= step;
      c[order + m] += j[m] * e * w;
      c[order - m] += j[m] * std::conj(e) * w;
    }
  }
  const Complex pre = 0.25 * kI * k * k * h * h;
  for (auto& v : c) v *= pre;
  return c;
}

}  // namespace

RadiatingExpansion MediumSolver::expansion(const VolumeField& field) const {
  RadiatingExpansion e;
  e.k = k_;
  e.center = support_center_;
  e.reference_radius = support_radius_;
  e.order = std::min(expansion_order(k_, support_radius_), special::kMaxOrder);
  e.coefficients = multipole_coefficients(medium_, k_, support_, support_center_, e.order, field);
  return e;
}

std::vector<Complex> MediumSolver::scattered(const VolumeField& field, std::span<const Vec2> points) const {
  std::vector<Complex> out(points.size(), 0.0);
  if (support_.empty()) return out;
  const int N = medium_.cells_per_side();
  const double h = medium_.cell_size();
  const auto& n = medium_.values();

  double rmin = 1e300;
  for (Vec2 x : points) rmin = std::min(rmin, distance(x, support_center_));
  const double ratio = support_radius_ / rmin;
  int order = -1;
  if (ratio < 0.9) {
    // Terms beyond kρ decay like (ρ/r)^n.
    order = static_cast<int>(std::ceil(k_ * support_radius_)) +
            static_cast<int>(std::ceil(std::log(1e-16) / std::log(ratio))) + 10;
    if (order > 400) order = -1;
  }
  if (order >= 0) {
    const std::vector<Complex> c = multipole_coefficients(medium_, k_, support_, support_center_, order, field);
    parallel_for(points.size(), [&](std::size_t i) {
      const Vec2 rel = points[i] - support_center_;
      const double r = norm(rel);
      std::vector<double> jv(static_cast<std::size_t>(order) + 1), yv(jv.size());
      special::bessel_jy_sequence(k_ * r, jv, yv);
      const Complex step = std::exp(kI * std::atan2(rel.x2, rel.x1));
      Complex e = 1.0;
      Complex sum = c[order] * Complex(jv[0], yv[0]);
      for (int m = 1; m <= order; ++m) {
        e *= step;
        sum += Complex(jv[m], yv[m]) * (c[order + m] * e + c[order - m] * std::conj(e));
      }
      out[i] = sum;
    });
    return out;
  }
  const double half = 0.5 * h;
  parallel_for(points.size(), [&](std::size_t i) {
    Complex sum = 0.0;
    for (std::size_t p : support_) {
      const Vec2 y = medium_.cell_center(static_cast<int>(p % N), static_cast<int>(p / N));
      const Vec2 d = points[i] - y;
      if (std::max(std::fabs(d.x1), std::fabs(d.x2)) <= half) {
        throw GeometryError("scattered-field point lies inside the medium support");
      }
      sum += special::fundamental_solution(k_, points[i], y) * (n[p] - 1.0) * field.values[p];
    }
    out[i] = k_ * k_ * h * h * sum;
  });
  return out;
}

namespace {

const MediumIndex& scene_medium(const Scene& scene) {
  const auto* medium = std::get_if<MediumIndex>(&scene.scatterer());
  if (!medium) throw GeometryError("scene does not contain a medium");
  return *medium;
}

}  // namespace

VolumeField solve_medium(const Scene& scene, const IncidentField& incident) {
  return MediumSolver(scene_medium(scene), scene.wavenumber()).solve(incident);
}

FarField medium_farfield(const VolumeField& field, const Scene& scene, std::span<const double> angles) {
  const MediumSolver solver(scene_medium(scene), scene.wavenumber());
  return {std::vector<double>(angles.begin(), angles.end()), solver.farfield(field, angles),
          scene.wavenumber()};
}

}  // namespace phaseless
