#include <doctest.h>

#include <cmath>

#include "fp/frame.hpp"
#include "fp/frame_document.hpp"
#include "fp/geometry.hpp"
#include "fp/sampling.hpp"
#include "test_support.hpp"

using namespace fp;
using namespace fptest;

TEST_SUITE("frame") {

TEST_CASE("frame document parsing") {
  const FrameDocument doc = parse_frame_document(R"doc(
# a comment
name = "demo"
n = 2
frame = [["exp(x1)", "0"],
         ["0", "1"],]  # trailing comma tolerated
chart_map = ["x1 + x2^2", "x2"]
)doc");
  CHECK(doc.n == 2);
  CHECK(doc.name == "demo");
  CHECK(doc.frame_text[0][0] == "exp(x1)");
  CHECK(doc.has_chart_map());

  CHECK_THROWS_AS(parse_frame_document("n = 2"), ParseError);  // missing frame
  CHECK_THROWS_AS(parse_frame_document("frame = [[\"1\"]]"), ParseError);
  CHECK_THROWS_AS(parse_frame_document("n = 2\nframe = [[\"1\",\"0\"],[\"0\",\"x9\"]]"),
                  ParseError);
  // chart maps live on the base manifold
  CHECK_THROWS_AS(parse_frame_document(
                      "n = 2\nframe = [[\"1\",\"0\"],[\"0\",\"1\"]]\nchart_map = [\"y1\", \"x2\"]"),
                  ParseError);
}

TEST_CASE("document fuzz corpus never crashes the parser") {
  Rng rng(1337);
  const std::string alphabet = "nframe=[]\",x1y2#\n +-*/^abcde.0123";
  for (int trial = 0; trial < 1500; ++trial) {
    std::string text;
    const int len = static_cast<int>(rng.next_u64() % 60);
    for (int i = 0; i < len; ++i) text.push_back(alphabet[rng.next_u64() % alphabet.size()]);
    try {
      parse_frame_document(text);
    } catch (const ParseError&) {
      // expected for malformed documents
    }
  }
  CHECK(true);
}

TEST_CASE("abs in a frame entry produces a warning") {
  const FrameDocument doc =
      parse_frame_document("n = 2\nframe = [[\"1 + abs(y1)\",\"0\"],[\"0\",\"1\"]]");
  REQUIRE(doc.warnings.size() == 1);
  CHECK(doc.warnings[0].find("abs") != std::string::npos);
}

TEST_CASE("identity frame basics") {
  const Frame frame = load_bundled("identity");
  const EvalPoint p({0.4, -0.3}, {1.0, 2.0});
  const Tensor lam = frame_matrix(frame, p, 1);
  CHECK(lam.at(0, 0) == 1.0);
  CHECK(lam.at(0, 1) == 0.0);
  const Tensor g = metric(frame, p);
  CHECK(g.at(0, 0) == doctest::Approx(1.0));
  CHECK(g.at(0, 1) == doctest::Approx(0.0));

  // Euclidean norms
  CHECK(finsler_function(frame, EvalPoint({0.0, 0.0}, {3.0, 4.0})) == doctest::Approx(5.0));
}

TEST_CASE("exponential frame: hand-derived metric and coframe") {
  const Frame frame = load_bundled("ap-exponential");

  const EvalPoint origin({0.0, 0.0}, {1.0, 1.0});
  const Tensor lam0 = frame_matrix(frame, origin, 1);
  CHECK(lam0.at(0, 0) == doctest::Approx(1.0));
  CHECK(lam0.at(1, 1) == doctest::Approx(1.0));

  // d/dx1 of the first leg is exp(x1)
  GeometryContext ctx(frame, origin, 1);
  CHECK(ctx.dx(ctx.lambda().at(0, 0), 0).value() == doctest::Approx(1.0));

  const EvalPoint p({1.0, 0.0}, {0.5, 2.0});
  const Tensor cf = coframe_matrix(frame, p);
  CHECK(cf.at(0, 0) == doctest::Approx(std::exp(-1.0)));
  CHECK(cf.at(1, 1) == doctest::Approx(1.0));

  const Tensor g = metric(frame, p);
  CHECK(g.at(0, 0) == doctest::Approx(std::exp(-2.0)));
  CHECK(g.at(1, 1) == doctest::Approx(1.0));
  CHECK(g.at(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("duality holds at random points") {
  const Frame frame = load_bundled("rotated-riemannian");
  for (const EvalPoint& p : sample(2, 20, 99)) {
    GeometryContext ctx(frame, p, 0);
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        double mesh = 0.0, world = 0.0;
        for (int k = 0; k < 2; ++k) {
          mesh += ctx.lambda().at(k, a).value() * ctx.coframe().at(k, b).value();
          world += ctx.lambda().at(a, k).value() * ctx.coframe().at(b, k).value();
        }
        CHECK(std::fabs(mesh - (a == b ? 1.0 : 0.0)) < 1e-12);
        CHECK(std::fabs(world - (a == b ? 1.0 : 0.0)) < 1e-12);
      }
    }
  }
}

TEST_CASE("quartic frame reproduces the quartic norm") {
  const Frame frame = load_bundled("quartic-minkowski");
  const EvalPoint p({0.0, 0.0}, {1.0, 1.0});
  const Tensor g = metric(frame, p);
  const double s2 = std::sqrt(2.0);
  CHECK(g.at(0, 0) == doctest::Approx(s2).epsilon(1e-9));
  CHECK(g.at(1, 1) == doctest::Approx(s2).epsilon(1e-9));
  CHECK(g.at(0, 1) == doctest::Approx(-1.0 / s2).epsilon(1e-9));

  CHECK(lagrangian(frame, p) == doctest::Approx(s2).epsilon(1e-9));
  CHECK(finsler_function(frame, p) == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-9));

  // F(x, a y) = a F(x, y)
  for (const EvalPoint& q : sample(2, 50, 31)) {
    std::vector<double> y2 = q.y();
    for (double& v : y2) v *= 2.0;
    const double f1 = finsler_function(frame, q);
    const double f2 = finsler_function(frame, EvalPoint(q.x(), y2));
    CHECK(std::fabs(f2 - 2.0 * f1) <= 1e-12 * (1.0 + f2));
  }
}

TEST_CASE("singular frame is reported with the point") {
  const Frame frame = frame_from_rows(2, {{"1", "0"}, {"0", "x1"}});
  const EvalPoint bad({0.0, 0.5}, {1.0, 1.0});
  CHECK_THROWS_AS(frame_matrix(frame, bad, 1), SingularError);
  try {
    frame_matrix(frame, bad, 1);
  } catch (const SingularError& err) {
    CHECK(std::string(err.what()).find("x=(0") != std::string::npos);
  }
  // Away from x1 = 0 the same frame works.
  CHECK_NOTHROW(frame_matrix(frame, EvalPoint({1.0, 0.5}, {1.0, 1.0}), 1));
}

TEST_CASE("validation levels and failures") {
  const auto pts = sample(2, 40, 12);

  const ValidationReport good = validate_structure(load_bundled("quartic-minkowski"), pts);
  CHECK(good.gap_valid);
  CHECK(good.lagrange_valid);
  CHECK(good.finsler_valid);
  for (const auto& c : good.conditions) CHECK(c.pass);

  // Inhomogeneous frame: Euler residual is y1 at the first leg.
  const Frame inhom = frame_from_rows(2, {{"1 + y1", "0"}, {"0", "1"}});
  const ValidationReport bad = validate_structure(inhom, pts);
  CHECK(bad.gap_valid);
  CHECK_FALSE(bad.finsler_valid);
  const ValidationCondition* hom = bad.find("lambda-homogeneity");
  REQUIRE(hom != nullptr);
  CHECK_FALSE(hom->pass);
  double max_y1 = 0.0;
  for (const auto& p : pts) max_y1 = std::max(max_y1, std::fabs(p.y()[0]));
  CHECK(hom->max_residual == doctest::Approx(max_y1).epsilon(1e-9));

  // Generic GAP frame: valid at GAP level only.
  const ValidationReport gap_only = validate_structure(generic_gap2(), pts);
  CHECK(gap_only.gap_valid);
  CHECK_FALSE(gap_only.finsler_valid);
}

TEST_CASE("frame synthesis from a metric") {
  // Identity metric gives the identity frame.
  const FrameDocument id = frame_from_metric({{"1", "0"}, {"0", "1"}}, 2);
  const Frame id_frame(id);
  const EvalPoint p({0.2, -0.4}, {1.0, 0.7});
  CHECK(frame_matrix(id_frame, p, 0).at(0, 0) == doctest::Approx(1.0));
  CHECK(frame_matrix(id_frame, p, 0).at(1, 0) == doctest::Approx(0.0));

  // diag(e^{-2x1}, 1) recovers the exponential coframe.
  const FrameDocument expdoc = frame_from_metric({{"exp(-2*x1)", "0"}, {"0", "1"}}, 2);
  const Frame exp_frame(expdoc);
  const Tensor cf = coframe_matrix(exp_frame, EvalPoint({1.0, 0.0}, {1.0, 1.0}));
  CHECK(cf.at(0, 0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(cf.at(1, 1) == doctest::Approx(1.0).epsilon(1e-12));

  // Quartic Hessian metric: round trip against the closed forms at 100
  // random directions.
  const std::string s = "(y1^4 + y2^4)";
  const std::vector<std::vector<std::string>> quartic = {
      {"y1^2*(y1^4 + 3*y2^4)/" + s + "^(3/2)", "-2*y1^3*y2^3/" + s + "^(3/2)"},
      {"-2*y1^3*y2^3/" + s + "^(3/2)", "y2^2*(y2^4 + 3*y1^4)/" + s + "^(3/2)"}};
  const Frame quartic_frame(frame_from_metric(quartic, 2, "quartic"));
  Rng rng(7);
  SampleOptions opts;
  opts.count = 100;
  for (const EvalPoint& q : sample_points(2, rng, opts)) {
    const Tensor g = metric(quartic_frame, q);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        const double want = evaluate_real(parse_expression(quartic[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], 2), q);
        CHECK(std::fabs(g.at(i, j) - want) <= 1e-10);
      }
    }
  }

  // Non-positive-definite input is rejected with the failing minor.
  CHECK_THROWS_WITH_AS(frame_from_metric({{"-1", "0"}, {"0", "1"}}, 2),
                       doctest::Contains("leading minor"), Error);
  CHECK_THROWS_AS(frame_from_metric({{"1", "x1"}, {"0", "1"}}, 2), Error);  // asymmetric
}

TEST_CASE("metric coincides with the direction Hessian of the energy") {
  for (const char* name : {"quartic-minkowski", "rotated-riemannian"}) {
    const Frame frame = load_bundled(name);
    for (const EvalPoint& p : sample(2, 25, 55)) {
      GeometryContext ctx(frame, p, 4);
      for (int mu = 0; mu < 2; ++mu) {
        for (int nu = 0; nu < 2; ++nu) {
          const double hess = 0.5 * ctx.dy(ctx.dy(ctx.lagrangian(), mu), nu).value();
          CHECK(std::fabs(ctx.metric().at(mu, nu).value() - hess) <= 1e-8);
        }
      }
    }
  }
}

}  // TEST_SUITE
