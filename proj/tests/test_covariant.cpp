#include <doctest.h>

#include <cmath>

#include "fp/covariant.hpp"
#include "test_support.hpp"

using namespace fp;
using namespace fptest;

TEST_SUITE("covariant") {

TEST_CASE("metricity of the Cartan (Miron) connection") {
  for (const EvalPoint& p : sample(2, 20, 17)) {
    GeometryContext ctx(hyperbolic_twisted(), p, 4);
    CHECK(values_of(h_covariant(ctx, ConnectionKind::CartanMiron, ctx.metric())).max_abs() <= 1e-10);
    CHECK(values_of(v_covariant(ctx, ConnectionKind::CartanMiron, ctx.metric())).max_abs() <= 1e-10);
  }
}

TEST_CASE("frame is parallel under the canonical connection") {
  for (const char* name : {"ap-exponential", "quartic-minkowski", "rotated-riemannian"}) {
    const Frame frame = load_bundled(name);
    for (const EvalPoint& p : sample(2, 15, 23)) {
      GeometryContext ctx(frame, p, 4);
      CHECK(values_of(h_covariant(ctx, ConnectionKind::Canonical, ctx.lambda())).max_abs() <= 1e-9);
      CHECK(values_of(v_covariant(ctx, ConnectionKind::Canonical, ctx.lambda())).max_abs() <= 1e-9);
    }
  }
}

TEST_CASE("energy is horizontally constant under the Berwald connection") {
  const Frame frame = load_bundled("quartic-minkowski");
  for (const EvalPoint& p : sample(2, 20, 29)) {
    GeometryContext ctx(frame, p, 4);
    JetGrid scalar(2, {});
    scalar.at() = ctx.lagrangian();
    const JetGrid cov = h_covariant(ctx, ConnectionKind::Berwald, scalar);
    CHECK(values_of(cov).max_abs() <= 1e-8);
  }
}

TEST_CASE("berwald vertical derivative is the plain direction derivative") {
  const EvalPoint p({0.2, -0.5}, {1.4, 0.6});
  GeometryContext ctx(hyperbolic_twisted(), p, 4);
  const JetGrid& g = ctx.metric();
  const JetGrid cov = v_covariant(ctx, ConnectionKind::Berwald, g);
  for (int mu = 0; mu < 2; ++mu) {
    for (int nu = 0; nu < 2; ++nu) {
      for (int sg = 0; sg < 2; ++sg) {
        CHECK(cov.at(mu, nu, sg).value() ==
              doctest::Approx(ctx.dy(g.at(mu, nu), sg).value()).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("coframe derivatives reproduce the contortion") {
  const EvalPoint p({0.35, 0.15}, {0.7, -1.3});
  GeometryContext ctx(load_bundled("rotated-riemannian"), p, 4);
  const CoframeDerivatives cd = miron_covariant_of_coframe(ctx);
  const JetGrid& A = ctx.contortion_h();
  const JetGrid& lam = ctx.lambda();
  for (int a = 0; a < 2; ++a) {
    for (int mu = 0; mu < 2; ++mu) {
      for (int nu = 0; nu < 2; ++nu) {
        double hsum = 0.0;
        for (int leg = 0; leg < 2; ++leg) {
          hsum += lam.at(leg, a).value() * cd.horizontal.at(leg, mu, nu).value();
        }
        CHECK(std::fabs(hsum - A.at(a, mu, nu).value()) <= 1e-9);
      }
    }
  }
  // The exponential frame has vanishing contortion, so both derivatives die.
  GeometryContext flat(load_bundled("ap-exponential"), p, 4);
  const CoframeDerivatives flat_cd = miron_covariant_of_coframe(flat);
  CHECK(values_of(flat_cd.horizontal).max_abs() <= 1e-12);
  CHECK(values_of(flat_cd.vertical).max_abs() <= 1e-12);
}

TEST_CASE("interchange between Miron and canonical derivatives on random fields") {
  // Moving the horizontal derivative between the two metrical-connection
  // pictures costs one contortion term per index.
  Rng rng(6060);
  const Frame frame = hyperbolic_twisted();
  for (int trial = 0; trial < 10; ++trial) {
    // random (1,2) tensor field built from expressions
    std::vector<ExprPtr> entries;
    for (int k = 0; k < 8; ++k) {
      entries.push_back(parse_expression(
          "sin(" + std::to_string(rng.uniform(-1, 1)) + "*x1 + " +
              std::to_string(rng.uniform(-1, 1)) + "*y2) + " +
              std::to_string(rng.uniform(-1, 1)) + "*y1*y1/(y1^2 + y2^2)",
          2));
    }
    TensorField field;
    field.variances = {Variance::Upper, Variance::Lower, Variance::Lower};
    field.eval = [entries](const GeometryContext& ctx) {
      JetGrid x(2, {Variance::Upper, Variance::Lower, Variance::Lower});
      int k = 0;
      for (int a = 0; a < 2; ++a) {
        for (int m = 0; m < 2; ++m) {
          for (int nn = 0; nn < 2; ++nn) {
            x.at(a, m, nn) = evaluate_with(entries[static_cast<std::size_t>(k++ % 8)], ctx.seeds());
          }
        }
      }
      return x;
    };

    const EvalPoint p({rng.uniform(-1, 1), rng.uniform(-1, 1)},
                      {rng.uniform(0.6, 1.5), rng.uniform(0.6, 1.5)});
    GeometryContext ctx(frame, p, 3);
    const JetGrid x = field.eval(ctx);
    const JetGrid miron = h_covariant(ctx, ConnectionKind::CartanMiron, x);
    const JetGrid canon = h_covariant(ctx, ConnectionKind::Canonical, x);
    const JetGrid& A = ctx.contortion_h();

    for (int a = 0; a < 2; ++a) {
      for (int m = 0; m < 2; ++m) {
        for (int nn = 0; nn < 2; ++nn) {
          for (int b = 0; b < 2; ++b) {
            double rhs = canon.at(a, m, nn, b).value();
            for (int e = 0; e < 2; ++e) {
              rhs -= x.at(e, m, nn).value() * A.at(a, e, b).value();
              rhs += x.at(a, e, nn).value() * A.at(e, m, b).value();
              rhs += x.at(a, m, e).value() * A.at(e, nn, b).value();
            }
            CHECK(std::fabs(miron.at(a, m, nn, b).value() - rhs) <= 1e-8);
          }
        }
      }
    }
  }
}

TEST_CASE("dual connection is not metric: coframe derivative survives") {
  bool found_nonzero = false;
  for (const EvalPoint& p : sample(2, 20, 48)) {
    GeometryContext ctx(load_bundled("rotated-riemannian"), p, 4);
    const JetGrid cov = h_covariant(ctx, ConnectionKind::Dual, ctx.coframe());
    if (values_of(cov).max_abs() > 1e-6) found_nonzero = true;
  }
  CHECK(found_nonzero);
}

TEST_CASE("tensor-field wrapper produces the value-level derivative") {
  const EvalPoint p({0.0, 0.0}, {1.0, 1.0});
  GeometryContext ctx(load_bundled("identity"), p, 2);
  TensorField field;
  field.variances = {Variance::Upper};
  field.eval = [](const GeometryContext& c) {
    JetGrid v(2, {Variance::Upper});
    v.at(0) = c.seeds()[2];  // y1
    v.at(1) = c.seeds()[3];  // y2
    return v;
  };
  const Tensor hc = h_covariant(field, ConnectionKind::Canonical, ctx);
  CHECK(hc.rank() == 2);
  CHECK(hc.max_abs() == 0.0);  // flat frame, x-independent field
  const Tensor vc = v_covariant(field, ConnectionKind::Canonical, ctx);
  CHECK(vc.at(0, 0) == doctest::Approx(1.0));
  CHECK(vc.at(0, 1) == doctest::Approx(0.0));
}

}  // TEST_SUITE
