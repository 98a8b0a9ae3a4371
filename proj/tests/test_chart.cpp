#include <doctest.h>

#include "fp/chart.hpp"
#include "test_support.hpp"

using namespace fp;
using namespace fptest;

TEST_SUITE("chart") {

TEST_CASE("identity chart is exact") {
  const Frame frame = load_bundled("ap-exponential");
  const ChartMap chart = ChartMap::from_strings({"x1", "x2"}, 2);
  const auto pts = sample(2, 10, 19);
  const IdentityResidual r = chart_transform_check(frame, chart, pts);
  CHECK(r.pass);
  CHECK(r.residual <= 1e-13);
}

TEST_CASE("nonlinear chart on the exponential frame") {
  const Frame frame = load_bundled("ap-exponential");
  const ChartMap chart = ChartMap::from_document(frame.document());
  const auto pts = sample(2, 20, 23);
  const IdentityResidual r = chart_transform_check(frame, chart, pts, 1e-7);
  CHECK(r.pass);
  CHECK(r.residual <= 1e-7);
}

TEST_CASE("linear chart on the quartic frame: no inhomogeneous term") {
  const Frame frame = load_bundled("quartic-minkowski");
  const ChartMap chart = ChartMap::from_strings({"2*x1", "2*x2"}, 2);
  const auto pts = sample(2, 15, 29);
  const IdentityResidual r = chart_transform_check(frame, chart, pts, 1e-9);
  CHECK(r.pass);
  CHECK(r.residual <= 1e-9);
}

TEST_CASE("curved twisted frame under a mixing chart") {
  const Frame frame = hyperbolic_twisted();
  const ChartMap chart = ChartMap::from_strings({"x1 + 0.3*x2^2", "x2 - 0.2*x1^2"}, 2);
  const auto pts = sample(2, 15, 37);
  const IdentityResidual r = chart_transform_check(frame, chart, pts, 1e-7);
  CHECK(r.pass);
}

TEST_CASE("three-dimensional frame under a nonlinear chart") {
  const Frame frame = rotated_riemannian3();
  const ChartMap chart =
      ChartMap::from_strings({"x1 + 0.2*x2^2", "x2 - 0.1*x3^2", "x3 + 0.1*x1*x2"}, 3);
  const auto pts = sample(3, 8, 41);
  const IdentityResidual r = chart_transform_check(frame, chart, pts, 1e-7);
  CHECK(r.pass);
}

TEST_CASE("degenerate chart is rejected") {
  const Frame frame = load_bundled("identity");
  const ChartMap chart = ChartMap::from_strings({"x1*x1", "x2"}, 2);
  // Jacobian row (2 x1, 0) degenerates at x1 = 0.
  const std::vector<EvalPoint> pts = {EvalPoint({0.0, 0.2}, {1.0, 0.5})};
  CHECK_THROWS_AS(chart_transform_check(frame, chart, pts), SingularError);
}

TEST_CASE("charts cannot use direction variables") {
  CHECK_THROWS_AS(ChartMap::from_strings({"x1 + y1", "x2"}, 2), Error);
}

}  // TEST_SUITE
