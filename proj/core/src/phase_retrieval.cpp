#include "phaseless/phase_retrieval.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "csv.hpp"
#include "json_io.hpp"
#include "phaseless/errors.hpp"
#include "phaseless/parallel.hpp"
#include "phaseless/special_functions.hpp"

namespace phaseless {
namespace {

constexpr double kMaskTolerance = 1e-8;
constexpr double kAmbiguityRatio = 10.0;
constexpr double kSvdThreshold = 1e-10;
constexpr double kZoneSine = 0.3;

std::string angle_text(double a) { return detail::format_double(a); }

}  // namespace

CorrelationField extract_correlation(const PhaselessDataset& data) {
  const Eigen::VectorXd r0 = data.singles_d0();
  CorrelationField out;
  const auto& r = data.singles;
  const auto& p = data.pairs;
  out.c = 0.5 * (p.array().square() - r.array().square()).matrix();
  out.c.array().colwise() -= 0.5 * r0.array().square();
  const Eigen::MatrixXd prod = (r.array().colwise() * r0.array()).matrix();
  const double scale = prod.size() > 0 ? prod.maxCoeff() : 0.0;
  out.valid = prod.array() >= kMaskTolerance * scale;
  if (scale == 0.0) out.valid.setConstant(false);
  return out;
}

RelativePhaseField principal_relative_phase(const CorrelationField& corr, const PhaselessDataset& data) {
  const Eigen::VectorXd r0 = data.singles_d0();
  RelativePhaseField out;
  out.d0_index = data.meta.d0_index;
  out.valid = corr.valid;
  out.delta = Eigen::MatrixXd::Zero(corr.c.rows(), corr.c.cols());
  for (Eigen::Index m = 0; m < corr.c.rows(); ++m) {
    for (Eigen::Index j = 0; j < corr.c.cols(); ++j) {
      if (!corr.valid(m, j) || j == out.d0_index) continue;
      const double r = data.singles(m, j);
      const double a = r0[m];
      const double p = data.pairs(m, j);
      // Half-angle form of arccos(c / (r a)); stays accurate near 0 and π.
      // Moduli within rounding of r + a or |r − a| are taken as exactly 0 or π.
      const double slack = 4.0 * std::numeric_limits<double>::epsilon() * (r + a);
      const double num = r + a - p <= slack ? 0.0 : (r + a - p) * (r + a + p);
      const double den = p - std::fabs(r - a) <= slack ? 0.0 : (p - r + a) * (p + r - a);
      double delta;
      if (den == 0.0) {
        delta = num == 0.0 ? std::acos(std::clamp(corr.c(m, j) / (r * a), -1.0, 1.0)) : kPi;
      } else {
        delta = 2.0 * std::atan(std::sqrt(num / den));
      }
      out.delta(m, j) = delta;
    }
  }
  return out;
}

namespace {

struct Continued {
  std::vector<double> psi;  // per direction, unwrapped
};

// Signed continuation of δ along the traversal starting at d₀ for one point.
std::vector<double> continue_point(int m, const Eigen::MatrixXd& delta, const Mask& valid,
                                   const std::vector<double>& angles, int j0) {
  const int D = static_cast<int>(angles.size());
  std::vector<int> seq;
  std::vector<double> pos;  // angle from d₀ along the traversal
  for (int s = 0; s < D; ++s) {
    const int j = (j0 + s) % D;
    if (s > 0 && !valid(m, j)) continue;
    seq.push_back(j);
    double a = angles[j] - angles[j0];
    if (s > 0 && a <= 0.0) a += kTwoPi;
    pos.push_back(s == 0 ? 0.0 : a);
  }
  const int K = static_cast<int>(seq.size());
  const int max_gap = std::max(1, D / 8);
  for (int i = 1; i <= K; ++i) {
    const int prev = (j0 + 0) % D;
    (void)prev;
    const int a = seq[i - 1];
    const int b = i < K ? seq[i] : j0;
    const int gap = ((b - a) % D + D) % D;
    if (gap - 1 > max_gap) {
      throw ContinuationError("point " + std::to_string(m) + ": " + std::to_string(gap - 1) +
                              " consecutive masked directions between d = " + angle_text(angles[a]) +
                              " and d = " + angle_text(angles[b]));
    }
    if (i < K && std::fabs(delta(m, b) - delta(m, a)) >= kPi / 2.0) {
      throw ContinuationError("point " + std::to_string(m) + ": relative phase jumps by " +
                              angle_text(std::fabs(delta(m, b) - delta(m, a))) + " between d = " +
                              angle_text(angles[a]) + " and d = " + angle_text(angles[b]) +
                              "; the direction grid is too coarse");
    }
  }

  std::vector<int> sign(K, 1);
  auto dval = [&](int k) { return delta(m, seq[k]); };
  auto slope = [&](int k, int sp, int sk) {
    return wrap_phase(sk * dval(k) - sp * dval(k - 1)) / (pos[k] - pos[k - 1]);
  };
  if (K >= 3) {
    // State (s_{k−1}, s_k) indexed 2·[s_{k−1} < 0] + [s_k < 0]; s₀ = s₁ = +1.
    constexpr double inf = std::numeric_limits<double>::infinity();
    auto sgn = [](int bit) { return bit ? -1 : 1; };
    std::vector<std::array<double, 4>> cost(K);
    std::vector<std::array<int, 4>> back(K);
    cost[1] = {0.0, inf, inf, inf};
    for (int k = 2; k < K; ++k) {
      for (int st = 0; st < 4; ++st) {
        const int sp = sgn(st >> 1);
        const int sk = sgn(st & 1);
        double best = inf;
        int arg = 0;
        for (int pbit = 0; pbit < 2; ++pbit) {
          const int prev_state = pbit * 2 + ((st >> 1) & 1);
          const double c0 = cost[k - 1][prev_state];
          if (c0 == inf) continue;
          const double d = slope(k, sp, sk) - slope(k - 1, sgn(pbit), sp);
          const double c = c0 + d * d;
          if (c < best) {
            best = c;
            arg = prev_state;
          }
        }
        cost[k][st] = best;
        back[k][st] = arg;
      }
    }
    // Closing the loop back to d₀ (ψ = 0 at angle 2π).
    const double s1 = slope(1, 1, 1);
    int best_state = 0;
    double best = inf;
    for (int st = 0; st < 4; ++st) {
      if (cost[K - 1][st] == inf) continue;
      const int sp = sgn(st >> 1);
      const int sk = sgn(st & 1);
      const double close = wrap_phase(-sk * dval(K - 1)) / (kTwoPi - pos[K - 1]);
      const double last = slope(K - 1, sp, sk);
      const double c = cost[K - 1][st] + (close - last) * (close - last) + (s1 - close) * (s1 - close);
      if (c < best) {
        best = c;
        best_state = st;
      }
    }
    int st = best_state;
    for (int k = K - 1; k >= 2; --k) {
      sign[k] = sgn(st & 1);
      sign[k - 1] = sgn(st >> 1);
      st = back[k][st];
    }
  }

  std::vector<double> psi_seq(K);
  psi_seq[0] = 0.0;
  for (int k = 1; k < K; ++k) {
    psi_seq[k] = psi_seq[k - 1] + wrap_phase(sign[k] * dval(k) - sign[k - 1] * dval(k - 1));
  }
  const double psi_end = psi_seq[K - 1] + wrap_phase(-sign[K - 1] * dval(K - 1));

  std::vector<double> psi(D, 0.0);
  for (int k = 0; k < K; ++k) psi[seq[k]] = psi_seq[k];
  // Linear interpolation in angle across masked runs.
  for (int k = 0; k < K; ++k) {
    const double a0 = pos[k];
    const double p0 = psi_seq[k];
    const double a1 = k + 1 < K ? pos[k + 1] : kTwoPi;
    const double p1 = k + 1 < K ? psi_seq[k + 1] : psi_end;
    const int ja = seq[k];
    const int jb = k + 1 < K ? seq[k + 1] : j0;
    for (int j = (ja + 1) % D; j != jb; j = (j + 1) % D) {
      double a = angles[j] - angles[j0];
      if (a <= 0.0) a += kTwoPi;
      psi[j] = p0 + (p1 - p0) * (a - a0) / (a1 - a0);
    }
  }
  return psi;
}

}  // namespace

BranchCandidates continue_branch(const RelativePhaseField& rel, const PhaselessDataset& data) {
  const int M = static_cast<int>(rel.delta.rows());
  const int D = static_cast<int>(rel.delta.cols());
  const int j0 = rel.d0_index;
  const auto& angles = data.meta.directions;
  const auto& pts = data.meta.measurement.points();
  const double k = data.meta.k;
  const Vec2 d0 = unit_vector(angles[j0]);

  BranchCandidates out;
  out.phase = Eigen::MatrixXd::Zero(M, D);
  out.plus.resize(M, D);
  out.minus.resize(M, D);
  out.valid = rel.valid;
  out.point_valid.assign(M, 1);
  parallel_for(static_cast<std::size_t>(M), [&](std::size_t mi) {
    const int m = static_cast<int>(mi);
    if (!rel.valid(m, j0)) {
      out.point_valid[m] = 0;
      for (int j = 0; j < D; ++j) out.plus(m, j) = out.minus(m, j) = data.singles(m, j);
      return;
    }
    std::vector<double> psi = continue_point(m, rel.delta, rel.valid, angles, j0);
    Complex score_plus = 0.0;
    Complex score_minus = 0.0;
    for (int j = 0; j < D; ++j) {
      const Complex free = std::exp(-kI * (k * dot(pts[m], unit_vector(angles[j]) - d0)));
      score_plus += data.singles(m, j) * std::exp(kI * psi[j]) * free;
      score_minus += data.singles(m, j) * std::exp(-kI * psi[j]) * free;
    }
    if (score_minus.real() > score_plus.real()) {
      for (double& v : psi) v = -v;
    }
    for (int j = 0; j < D; ++j) {
      out.phase(m, j) = psi[j];
      out.plus(m, j) = data.singles(m, j) * std::exp(kI * psi[j]);
      out.minus(m, j) = std::conj(out.plus(m, j));
    }
  });
  return out;
}

AnchorPhase anchor_phase(const Eigen::MatrixXcd& candidate, const Mask& measured,
                         const std::vector<char>& point_valid, const PhaselessDataset& data,
                         const Disk& bound, bool refine) {
  const int M = static_cast<int>(candidate.rows());
  const int D = static_cast<int>(candidate.cols());
  const double k = data.meta.k;
  const int N = expansion_order(k, bound.radius);
  if (D < 2 * N + 2) {
    throw AnchoringError("anchoring needs more than " + std::to_string(2 * N + 1) +
                         " directions for a support bound of radius " + angle_text(bound.radius) +
                         ", the dataset has " + std::to_string(D));
  }
  const auto& angles = data.meta.directions;
  Eigen::MatrixXcd B(D, 2 * N + 1);
  for (int j = 0; j < D; ++j) {
    const Vec2 d = unit_vector(angles[j]);
    const Complex shift = std::exp(kI * (k * dot(d, bound.center)));
    for (int n = -N; n <= N; ++n) B(j, n + N) = shift * std::exp(kI * (n * angles[j]));
  }
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(B, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  int rank = 0;
  while (rank < sv.size() && sv[rank] > kSvdThreshold * sv[0]) ++rank;
  const Eigen::MatrixXcd U = svd.matrixU().leftCols(rank);
  const Eigen::MatrixXcd P = Eigen::MatrixXcd::Identity(D, D) - U * U.adjoint();

  AnchorPhase out;
  out.theta0.assign(M, 0.0);
  out.point_residual.assign(M, std::numeric_limits<double>::quiet_NaN());
  out.anchored.assign(M, 0);
  out.relative = candidate;
  std::vector<int> flips(M, 0);
  const auto& pts = data.meta.measurement.points();
  const int j0 = data.meta.d0_index;
  parallel_for(static_cast<std::size_t>(M), [&](std::size_t mi) {
    const int m = static_cast<int>(mi);
    if (!point_valid[m]) return;
    Eigen::VectorXcd f(D);
    for (int j = 0; j < D; ++j) f[j] = std::exp(kI * (k * dot(pts[m], unit_vector(angles[j]))));
    Eigen::VectorXcd v = candidate.row(m).transpose();
    Eigen::VectorXcd a = P * v;
    const Eigen::VectorXcd g = P * f;
    const double gg = g.squaredNorm();
    double aa = a.squaredNorm();
    Complex ag = a.dot(g);
    // Defect after optimizing the phase only: |a|² + |g|² − 2|aᴴg|.
    auto defect = [&](double a2, Complex c) { return a2 + gg - 2.0 * std::abs(c); };
    if (refine) {
      // Moves: single entries near ψ ≈ 0 or π, and whole runs between them.
      std::vector<std::vector<int>> moves;
      std::vector<int> run;
      for (int s = 0; s < D; ++s) {
        const int j = (j0 + s) % D;
        if (!measured(m, j)) continue;
        const double r = std::abs(v[j]);
        if (r > 0.0 && std::fabs(v[j].imag()) < kZoneSine * r) {
          if (run.size() > 0) moves.push_back(std::move(run));
          run.clear();
          moves.push_back({j});
        } else {
          run.push_back(j);
        }
      }
      if (!run.empty()) moves.push_back(std::move(run));
      Eigen::VectorXcd w(D);
      for (int pass = 0; pass < 4 * D; ++pass) {
        const double current = defect(aa, ag);
        double best = current;
        int arg = -1;
        for (std::size_t i = 0; i < moves.size(); ++i) {
          w.setZero();
          for (int j : moves[i]) w += (std::conj(v[j]) - v[j]) * P.col(j);
          const double d = defect((a + w).squaredNorm(), (a + w).dot(g));
          if (d < best - 1e-14 * (current + gg)) {
            best = d;
            arg = static_cast<int>(i);
          }
        }
        if (arg < 0) break;
        for (int j : moves[arg]) {
          a += (std::conj(v[j]) - v[j]) * P.col(j);
          v[j] = std::conj(v[j]);
        }
        aa = a.squaredNorm();
        ag = a.dot(g);
        flips[m] += static_cast<int>(moves[arg].size());
      }
    }
    if (!(aa > 1e-300)) return;
    const double theta = wrap_angle(std::arg(ag));
    out.theta0[m] = theta;
    out.point_residual[m] = (std::exp(kI * theta) * a - g).norm() / f.norm();
    out.anchored[m] = 1;
    out.relative.row(m) = v.transpose();
  });
  double sum = 0.0;
  int count = 0;
  for (int m = 0; m < M; ++m) {
    out.entries_flipped += flips[m];
    if (!out.anchored[m]) continue;
    sum += out.point_residual[m] * out.point_residual[m];
    out.worst = std::max(out.worst, out.point_residual[m]);
    ++count;
  }
  if (count == 0) throw AnchoringError("no measurement point could be anchored");
  out.residual = std::sqrt(sum / count);
  return out;
}

std::string BranchReport::to_json() const {
  detail::Json j;
  j["residual_plus"] = residual_plus;
  j["residual_minus"] = residual_minus;
  j["chosen"] = chosen;
  j["ratio"] = ratio;
  j["points_reoriented"] = points_reoriented;
  j["expansion_residual"] = expansion_residual;
  j["entries_flipped"] = entries_flipped;
  return j.dump(2);
}

BranchDecision disambiguate_branch(const BranchCandidates& cand, const PhaselessDataset& data,
                                   const Disk& bound) {
  const AnchorPhase plus = anchor_phase(cand.plus, cand.valid, cand.point_valid, data, bound, true);
  const AnchorPhase minus =
      anchor_phase(plus.relative.conjugate(), cand.valid, cand.point_valid, data, bound, false);
  BranchDecision out;
  out.report.residual_plus = plus.residual;
  out.report.residual_minus = minus.residual;
  const bool take_plus = plus.residual <= minus.residual;
  const double lo = std::min(plus.residual, minus.residual);
  const double hi = std::max(plus.residual, minus.residual);
  out.report.ratio = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  out.report.chosen = take_plus ? "plus" : "minus";
  if (!(out.report.ratio >= kAmbiguityRatio)) {
    throw AmbiguityError("branch residuals " + angle_text(plus.residual) + " (plus) and " +
                             angle_text(minus.residual) + " (minus) differ by less than a factor 10",
                         plus.residual, minus.residual);
  }
  const AnchorPhase& chosen = take_plus ? plus : minus;
  const AnchorPhase& other = take_plus ? minus : plus;
  out.relative = chosen.relative;
  out.anchor = chosen;
  out.report.entries_flipped = chosen.entries_flipped;
  for (std::size_t m = 0; m < chosen.anchored.size(); ++m) {
    if (!chosen.anchored[m] || !other.anchored[m]) continue;
    if (chosen.point_residual[m] > kAmbiguityRatio * other.point_residual[m]) {
      out.relative.row(static_cast<Eigen::Index>(m)) = other.relative.row(static_cast<Eigen::Index>(m));
      out.anchor.theta0[m] = other.theta0[m];
      out.anchor.point_residual[m] = other.point_residual[m];
      ++out.report.points_reoriented;
    }
  }
  if (out.report.points_reoriented > 0) {
    double sum = 0.0;
    int count = 0;
    out.anchor.worst = 0.0;
    for (std::size_t m = 0; m < out.anchor.anchored.size(); ++m) {
      if (!out.anchor.anchored[m]) continue;
      sum += out.anchor.point_residual[m] * out.anchor.point_residual[m];
      out.anchor.worst = std::max(out.anchor.worst, out.anchor.point_residual[m]);
      ++count;
    }
    out.anchor.residual = std::sqrt(sum / count);
  }
  return out;
}

namespace {

Eigen::MatrixXcd expansion_basis(double k, const Disk& bound, int N, std::span<const Vec2> points) {
  Eigen::MatrixXcd A(static_cast<Eigen::Index>(points.size()), 2 * N + 1);
  std::vector<double> jv(static_cast<std::size_t>(N) + 1), yv(jv.size());
  for (std::size_t p = 0; p < points.size(); ++p) {
    const Vec2 rel = points[p] - bound.center;
    const double r = norm(rel);
    if (!(r > bound.radius)) throw GeometryError("expansion fit point lies inside the support bound");
    special::bessel_jy_sequence(k * r, jv, yv);
    const double phi = std::atan2(rel.x2, rel.x1);
    for (int n = -N; n <= N; ++n) {
      const int a = n < 0 ? -n : n;
      A(static_cast<Eigen::Index>(p), n + N) = Complex(jv[a], yv[a]) * std::exp(kI * (n * phi));
    }
  }
  return A;
}

std::vector<RadiatingExpansion> fit_many(double k, const Disk& bound, std::span<const Vec2> points,
                                         const Eigen::MatrixXcd& values, std::vector<double>* residuals) {
  const int N = std::min(expansion_order(k, bound.radius), special::kMaxOrder);
  const Eigen::MatrixXcd A = expansion_basis(k, bound, N, points);
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(kSvdThreshold);
  const Eigen::MatrixXcd C = svd.solve(values);
  std::vector<RadiatingExpansion> out(static_cast<std::size_t>(values.cols()));
  if (residuals) residuals->assign(out.size(), 0.0);
  for (Eigen::Index c = 0; c < values.cols(); ++c) {
    RadiatingExpansion& e = out[c];
    e.k = k;
    e.center = bound.center;
    e.reference_radius = bound.radius;
    e.order = N;
    e.coefficients.assign(C.col(c).data(), C.col(c).data() + C.rows());
    if (residuals) {
      const double vn = values.col(c).norm();
      (*residuals)[c] = vn > 0.0 ? (A * C.col(c) - values.col(c)).norm() / vn : 0.0;
    }
  }
  return out;
}

}  // namespace

RadiatingExpansion fit_expansion(double k, const Disk& bound, std::span<const Vec2> points,
                                 std::span<const Complex> values, double* relative_residual) {
  const Eigen::MatrixXcd v =
      Eigen::Map<const Eigen::VectorXcd>(values.data(), static_cast<Eigen::Index>(values.size()));
  std::vector<double> res;
  auto e = fit_many(k, bound, points, v, &res);
  if (relative_residual) *relative_residual = res[0];
  return std::move(e[0]);
}

RetrievalResult retrieve(const PhaselessDataset& data, const Disk& bound) {
  data.validate();
  const CorrelationField corr = extract_correlation(data);
  const RelativePhaseField rel = principal_relative_phase(corr, data);
  const BranchCandidates cand = continue_branch(rel, data);
  BranchDecision decision = disambiguate_branch(cand, data, bound);

  const int M = data.points();
  const int D = data.directions();
  const double k = data.meta.k;
  const auto& pts = data.meta.measurement.points();
  RetrievalResult out;
  out.k = k;
  out.points = pts;
  out.directions = data.meta.directions;
  out.support_bound = bound;
  out.anchor = decision.anchor;
  out.report = decision.report;
  out.total.resize(M, D);
  out.scattered.resize(M, D);

  Eigen::MatrixXcd incident(M, D);
  for (int m = 0; m < M; ++m) {
    for (int j = 0; j < D; ++j) {
      incident(m, j) = std::exp(kI * (k * dot(pts[m], unit_vector(out.directions[j]))));
    }
  }
  std::vector<Vec2> fit_points;
  std::vector<int> fit_rows;
  for (int m = 0; m < M; ++m) {
    if (!out.anchor.anchored[m]) continue;
    fit_points.push_back(pts[m]);
    fit_rows.push_back(m);
    const Complex e = std::exp(kI * out.anchor.theta0[m]);
    out.total.row(m) = e * decision.relative.row(m);
  }
  Eigen::MatrixXcd us_fit(static_cast<Eigen::Index>(fit_rows.size()), D);
  for (std::size_t i = 0; i < fit_rows.size(); ++i) {
    us_fit.row(static_cast<Eigen::Index>(i)) = out.total.row(fit_rows[i]) - incident.row(fit_rows[i]);
  }
  std::vector<double> residuals;
  out.expansions = fit_many(k, bound, fit_points, us_fit, &residuals);
  out.report.expansion_residual = *std::max_element(residuals.begin(), residuals.end());
  for (int m = 0; m < M; ++m) {
    if (out.anchor.anchored[m]) continue;
    for (int j = 0; j < D; ++j) out.total(m, j) = incident(m, j) + out.expansions[j].evaluate(pts[m]);
  }
  out.scattered = out.total - incident;
  return out;
}

RetrievalResult retrieve(const PhaselessDataset& data, const Scene& geometry) {
  if (std::fabs(geometry.wavenumber() - data.meta.k) > 1e-12 * data.meta.k) {
    throw GeometryError("scene wavenumber differs from the dataset wavenumber");
  }
  return retrieve(data, geometry.support_bound());
}

FieldSamples RetrievalResult::field(int direction, FieldTag tag) const {
  FieldSamples s;
  s.points = points;
  s.tag = tag;
  s.values.resize(points.size());
  for (std::size_t m = 0; m < points.size(); ++m) {
    const Complex u = total(static_cast<Eigen::Index>(m), direction);
    const Complex us = scattered(static_cast<Eigen::Index>(m), direction);
    s.values[m] = tag == FieldTag::total ? u : tag == FieldTag::scattered ? us : u - us;
  }
  return s;
}

void write_fields(const FieldTable& t, const std::filesystem::path& path) {
  detail::Json header;
  header["format"] = "phased-fields";
  header["k"] = t.k;
  header["points"] = t.points.size();
  header["directions"] = t.directions.size();
  header["support_bound"] = {{"center", detail::vec_json(t.support_bound.center)},
                             {"radius", t.support_bound.radius}};
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write fields " + path.string());
  out << "# " << header.dump() << '\n' << "x1,x2,d_angle,re_u,im_u,re_us,im_us\n";
  using detail::format_double;
  for (std::size_t m = 0; m < t.points.size(); ++m) {
    for (std::size_t j = 0; j < t.directions.size(); ++j) {
      const Complex u = t.total(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(j));
      const Complex us = t.scattered(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(j));
      out << format_double(t.points[m].x1) << ',' << format_double(t.points[m].x2) << ','
          << format_double(t.directions[j]) << ',' << format_double(u.real()) << ','
          << format_double(u.imag()) << ',' << format_double(us.real()) << ',' << format_double(us.imag())
          << '\n';
    }
  }
}

void write_fields(const RetrievalResult& r, const std::filesystem::path& path) {
  write_fields(FieldTable{r.k, r.support_bound, r.points, r.directions, r.total, r.scattered}, path);
}

FieldTable read_fields(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open fields file " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind('#', 0) != 0) throw ParseError("missing '#' JSON header", 1);
  FieldTable t;
  std::size_t M = 0;
  std::size_t D = 0;
  try {
    const detail::Json h = detail::Json::parse(line.substr(1));
    t.k = detail::get_double(h, "k");
    M = detail::require(h, "points").get<std::size_t>();
    D = detail::require(h, "directions").get<std::size_t>();
    if (h.contains("support_bound")) {
      const auto& b = h.at("support_bound");
      t.support_bound = {detail::get_vec(b, "center"), detail::get_double(b, "radius")};
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("fields header: ") + e.what(), 1);
  } catch (const ParseError& e) {
    throw ParseError(e.what(), 1);
  }
  if (!std::getline(in, line) || detail::trim(line) != "x1,x2,d_angle,re_u,im_u,re_us,im_us") {
    throw ParseError("expected column header x1,x2,d_angle,re_u,im_u,re_us,im_us", 2);
  }
  t.points.resize(M);
  t.directions.resize(D);
  t.total.resize(static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(D));
  t.scattered.resize(static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(D));
  std::size_t count = 0;
  int lineno = 2;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    if (count >= M * D) throw ParseError("more rows than declared in the header", lineno);
    const auto f = detail::split_fields(line);
    if (f.size() != 7) throw ParseError("expected 7 columns, got " + std::to_string(f.size()), lineno);
    double v[7];
    for (int i = 0; i < 7; ++i) v[i] = detail::parse_double(f[i], lineno);
    const std::size_t m = count / D;
    const std::size_t j = count % D;
    if (j == 0) t.points[m] = {v[0], v[1]};
    if (m == 0) t.directions[j] = v[2];
    t.total(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(j)) = {v[3], v[4]};
    t.scattered(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(j)) = {v[5], v[6]};
    ++count;
  }
  if (count != M * D) {
    throw ParseError("fields file has " + std::to_string(count) + " rows, header declares " +
                         std::to_string(M * D),
                     lineno);
  }
  return t;
}

}  // namespace phaseless
