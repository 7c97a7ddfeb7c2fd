#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "helpers.hpp"
#include "phaseless/errors.hpp"
#include "phaseless/forward.hpp"
#include "phaseless/phase_retrieval.hpp"

using namespace phaseless;
namespace fs = std::filesystem;

namespace {

// Dataset whose first column is `a` and whose reference column is `b`.
PhaselessDataset two_column_dataset(Complex a, Complex b) {
  DatasetMeta meta;
  meta.measurement = MeasurementSet::circle({}, 1.0, 3);
  meta.directions = {0.0, 1.0};
  meta.d0_index = 1;
  Eigen::MatrixXcd total(3, 2);
  total.col(0).setConstant(a);
  total.col(1).setConstant(b);
  return dataset_from_fields(meta, total);
}

Eigen::MatrixXcd phased_totals(const Scene& s, const PhaselessDataset& data) {
  return ForwardModel(s).total(plane_waves(s.wavenumber(), data.meta.directions), s.measurement().points());
}

double max_error(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_SUITE("phase_retrieval") {

TEST_CASE("correlation from three moduli") {
  const Complex one{1.0, 0.0};
  const auto c1 = extract_correlation(two_column_dataset(one, one));
  const auto c2 = extract_correlation(two_column_dataset(kI, one));
  const auto c3 = extract_correlation(two_column_dataset(std::exp(kI * (kPi / 3)), one));
  CHECK(c1.c(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::fabs(c2.c(0, 0)) <= 1e-15);
  CHECK(c3.c(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(c1.valid.all());
}

TEST_CASE("vanishing moduli are masked") {
  const auto c = extract_correlation(two_column_dataset(0.0, 1.0));
  CHECK(!c.valid(0, 0));
  CHECK(c.valid(0, 1));
}

TEST_CASE("principal phase at aligned and opposed fields") {
  const auto aligned = two_column_dataset(2.0, 1.0);
  const auto opposed = two_column_dataset(-2.0, 1.0);
  const auto pa = principal_relative_phase(extract_correlation(aligned), aligned);
  const auto po = principal_relative_phase(extract_correlation(opposed), opposed);
  CHECK(pa.delta(0, 0) == 0.0);
  CHECK(po.delta(0, 0) == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(pa.delta(0, 1) == 0.0);
}

TEST_CASE("correlation and principal phase agree with phased solves") {
  const Scene s = testing::retrieval_scene(testing::circle_obstacle(1.0), 2.0, 32, 48);
  const auto data = synthesize(s);
  const Eigen::MatrixXcd u = phased_totals(s, data);
  const auto corr = extract_correlation(data);
  const auto rel = principal_relative_phase(corr, data);
  const int j0 = data.meta.d0_index;
  double ec = 0.0, ed = 0.0;
  for (int m = 0; m < data.points(); ++m) {
    for (int j = 0; j < data.directions(); ++j) {
      const Complex w = u(m, j) * std::conj(u(m, j0));
      ec = std::max(ec, std::fabs(corr.c(m, j) - w.real()));
      ed = std::max(ed, std::fabs(rel.delta(m, j) - std::fabs(wrap_phase(std::arg(u(m, j)) - std::arg(u(m, j0))))));
      CHECK(std::fabs(std::cos(rel.delta(m, j)) - corr.c(m, j) / (data.singles(m, j) * data.singles(m, j0))) <= 1e-10);
    }
  }
  CHECK(ec <= 1e-10);
  CHECK(ed <= 1e-8);
}

TEST_CASE("empty scene candidates are the free-space relative phases") {
  const Scene s = testing::retrieval_scene(NoScatterer{});
  const auto data = synthesize(s);
  const auto rel = principal_relative_phase(extract_correlation(data), data);
  const auto cand = continue_branch(rel, data);
  const Vec2 d0 = unit_vector(data.meta.d0_angle);
  double err = 0.0;
  for (int m = 0; m < data.points(); ++m) {
    const Vec2 x = s.measurement().points()[m];
    for (int j = 0; j < data.directions(); ++j) {
      const Complex want = std::exp(kI * (2.0 * dot(x, unit_vector(data.meta.directions[j]) - d0)));
      err = std::max(err, std::abs(cand.plus(m, j) - want));
      CHECK(std::abs(cand.minus(m, j) - std::conj(cand.plus(m, j))) <= 1e-15);
    }
  }
  CHECK(err <= 1e-8);
}

TEST_CASE("continued phase vanishes at the reference direction") {
  const Scene s = testing::retrieval_scene(testing::kite_obstacle());
  const auto data = synthesize(s);
  const auto cand = continue_branch(principal_relative_phase(extract_correlation(data), data), data);
  CHECK(cand.phase.col(data.meta.d0_index).cwiseAbs().maxCoeff() == 0.0);
  CHECK((cand.plus.col(data.meta.d0_index) - cand.minus.col(data.meta.d0_index)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("conjugating the truth swaps the matching candidate") {
  const Scene s = testing::retrieval_scene(testing::circle_obstacle(1.0));
  const auto data = synthesize(s);
  const Eigen::MatrixXcd u = phased_totals(s, data);
  const auto cand = continue_branch(principal_relative_phase(extract_correlation(data), data), data);
  const int j0 = data.meta.d0_index;
  double plus_true = 0.0, minus_conj = 0.0, minus_true = 0.0;
  for (int m = 0; m < data.points(); ++m) {
    const Complex ref = std::conj(u(m, j0)) / std::abs(u(m, j0));
    for (int j = 0; j < data.directions(); ++j) {
      if (std::fabs(std::sin(cand.phase(m, j))) < 0.3) continue;
      const Complex truth = u(m, j) * ref;
      plus_true = std::max(plus_true, std::abs(cand.plus(m, j) - truth));
      minus_conj = std::max(minus_conj, std::abs(cand.minus(m, j) - std::conj(truth)));
      minus_true = std::max(minus_true, std::abs(cand.minus(m, j) - truth));
    }
  }
  CHECK(plus_true <= 1e-6);
  CHECK(minus_conj <= 1e-6);
  CHECK(minus_true >= 0.1);
}

TEST_CASE("coarse direction grids cannot be continued") {
  const Scene s = testing::retrieval_scene(testing::circle_obstacle(1.0), 2.0, 64, 16);
  const auto data = synthesize(s);
  const auto rel = principal_relative_phase(extract_correlation(data), data);
  CHECK_THROWS_AS(continue_branch(rel, data), ContinuationError);
}

TEST_CASE("anchoring on an empty scene recovers the incident phase") {
  const Scene s = testing::retrieval_scene(NoScatterer{});
  const auto data = synthesize(s);
  const auto cand = continue_branch(principal_relative_phase(extract_correlation(data), data), data);
  const Disk bound{{0, 0}, 1.0};
  const AnchorPhase a = anchor_phase(cand.plus, cand.valid, cand.point_valid, data, bound);
  CHECK(a.residual <= 1e-10);
  const Vec2 d0 = unit_vector(data.meta.d0_angle);
  for (int m = 0; m < data.points(); ++m) {
    const double want = wrap_angle(2.0 * dot(s.measurement().points()[m], d0));
    CHECK(std::fabs(wrap_phase(a.theta0[m] - want)) <= 1e-9);
    CHECK(a.theta0[m] >= 0.0);
    CHECK(a.theta0[m] < kTwoPi);
  }
}

TEST_CASE("too few directions for the support bound") {
  const Scene s(1.0, testing::circle_obstacle(1.0), MeasurementSet::circle({}, 3.0, 32), DirectionGrid{24, 1.5 * kPi});
  const auto data = synthesize(s);
  const auto cand = continue_branch(principal_relative_phase(extract_correlation(data), data), data);
  CHECK_THROWS_AS(anchor_phase(cand.plus, cand.valid, cand.point_valid, data, s.support_bound()), AnchoringError);
}

TEST_CASE("exact data separate the branches") {
  const Scene s = testing::retrieval_scene(testing::circle_obstacle(1.0));
  const auto data = synthesize(s);
  const auto cand = continue_branch(principal_relative_phase(extract_correlation(data), data), data);
  const BranchDecision d = disambiguate_branch(cand, data, s.support_bound());
  CHECK(d.report.chosen == "plus");
  CHECK(d.report.residual_plus <= 1e-8);
  CHECK(d.report.residual_minus >= 1e-2);
  CHECK(d.report.ratio >= 1e6);
  CHECK(d.anchor.iterations <= 200);
  const auto json = d.report.to_json();
  CHECK(json.find("\"residual_plus\"") != std::string::npos);
  CHECK(json.find("\"chosen\"") != std::string::npos);
}

TEST_CASE("one percent noise still selects the right branch") {
  const Scene s = testing::retrieval_scene(testing::circle_obstacle(1.0));
  const auto data = synthesize(s, 0.01, 7);
  const auto cand = continue_branch(principal_relative_phase(extract_correlation(data), data), data);
  const BranchDecision d = disambiguate_branch(cand, data, s.support_bound());
  CHECK(d.report.chosen == "plus");
  CHECK(d.report.ratio >= 10.0);
}

TEST_CASE("circle retrieval") {
  const Scene s = testing::retrieval_scene(testing::circle_obstacle(1.0));
  const auto data = synthesize(s);
  const RetrievalResult r = retrieve(data, s);
  const Eigen::MatrixXcd u = phased_totals(s, data);
  CHECK(max_error(r.total, u) <= 1e-6);
  CHECK(r.expansions.size() == data.meta.directions.size());

  SUBCASE("moduli of the retrieved fields reproduce the data") {
    const auto again = dataset_from_fields(data.meta, r.total);
    CHECK((again.singles - data.singles).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK((again.pairs - data.pairs).cwiseAbs().maxCoeff() <= 1e-8);
  }
  SUBCASE("scattered part and expansions") {
    const auto inc = plane_waves(2.0, data.meta.directions);
    for (int j : {0, 50, 150}) {
      const FieldSamples us = r.field(j, FieldTag::scattered);
      const FieldSamples ui = r.field(j, FieldTag::incident);
      for (std::size_t m = 0; m < us.points.size(); m += 16) {
        CHECK(std::abs(ui.values[m] - eval_incident(inc[j], us.points[m])) <= 1e-12);
        CHECK(std::abs(r.expansions[j].evaluate(us.points[m]) - us.values[m]) <= 1e-6);
      }
    }
  }
}

TEST_CASE("kite retrieval") {
  const Scene s = testing::retrieval_scene(testing::kite_obstacle());
  const auto data = synthesize(s);
  const RetrievalResult r = retrieve(data, s);
  CHECK(max_error(r.total, phased_totals(s, data)) <= 1e-5);
  CHECK(r.anchor.iterations <= 200);
}

TEST_CASE("medium retrieval") {
  const Scene s = testing::retrieval_scene(MediumIndex::disk({}, 1.0, 1.2, 64, {}, 1.1));
  const auto data = synthesize(s);
  const RetrievalResult r = retrieve(data, s);
  CHECK(max_error(r.total, phased_totals(s, data)) <= 1e-4);
}

TEST_CASE("retrieval checks the wavenumber of the geometry") {
  const Scene s = testing::retrieval_scene(NoScatterer{});
  const auto data = synthesize(s);
  CHECK_THROWS(retrieve(data, testing::retrieval_scene(NoScatterer{}, 3.0)));
}

TEST_CASE("expansion fit reproduces an exact expansion") {
  RadiatingExpansion e;
  e.k = 1.5;
  e.center = {0.2, -0.1};
  e.order = 4;
  e.reference_radius = 1.0;
  for (int n = -4; n <= 4; ++n) e.coefficients.push_back(Complex(1.0 / (1 + n * n), 0.1 * n));
  std::vector<Vec2> pts;
  std::vector<Complex> vals;
  for (int m = 0; m < 64; ++m) {
    pts.push_back(e.center + 4.0 * unit_vector(kTwoPi * m / 64));
    vals.push_back(e.evaluate(pts.back()));
  }
  double res = 1.0;
  const RadiatingExpansion f = fit_expansion(1.5, Disk{e.center, 1.0}, pts, vals, &res);
  CHECK(res <= 1e-12);
  const Vec2 probe{7.0, 3.0};
  CHECK(std::abs(f.evaluate(probe) - e.evaluate(probe)) <= 1e-10 * std::abs(e.evaluate(probe)));
  CHECK_THROWS_AS(e.evaluate(e.center), GeometryError);
}

TEST_CASE("field files round trip") {
  const Scene s = testing::retrieval_scene(testing::circle_obstacle(1.0));
  const RetrievalResult r = retrieve(synthesize(s), s);
  const fs::path p = fs::temp_directory_path() / "phaseless_fields_roundtrip.csv";
  write_fields(r, p);
  const FieldTable t = read_fields(p);
  CHECK(t.total == r.total);
  CHECK(t.scattered == r.scattered);
  CHECK(t.directions == r.directions);
  CHECK(t.k == r.k);
  CHECK(t.support_bound == r.support_bound);

  std::ofstream(p, std::ios::app) << "1,2,3\n";
  try {
    read_fields(p);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() > 2);
  }
}

}  // TEST_SUITE
