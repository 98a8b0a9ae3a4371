#include <doctest.h>

#include <cmath>

#include "fp/expr.hpp"
#include "fp/finite_diff.hpp"
#include "fp/jet.hpp"
#include "fp/sampling.hpp"

using namespace fp;

TEST_SUITE("jet") {

TEST_CASE("coordinate seeds carry value and unit first derivative") {
  const EvalPoint p({0.0, 0.0}, {1.0, 1.0});
  const auto seeds = jet_lift(p, 1);
  REQUIRE(seeds.size() == 4);

  // x1 seed at order 1
  CHECK(seeds[0].value() == 0.0);
  CHECK(seeds[0].partial(MultiIndex::of({1, 0, 0, 0})) == 1.0);
  CHECK(seeds[0].partial(MultiIndex::of({0, 1, 0, 0})) == 0.0);
  CHECK(seeds[0].partial(MultiIndex::of({0, 0, 1, 0})) == 0.0);

  // y2 seed
  CHECK(seeds[3].value() == 1.0);
  CHECK(seeds[3].partial(MultiIndex::of({0, 0, 0, 1})) == 1.0);
}

TEST_CASE("order above the configured cap is rejected") {
  const EvalPoint p({0.0, 0.0}, {1.0, 1.0});
  CHECK_THROWS_AS(jet_lift(p, max_jet_order() + 1), Error);
  CHECK_THROWS_AS(jet_lift(p, -1), Error);
}

TEST_CASE("extraction is factorial-normalized") {
  const EvalPoint p({2.0, 0.0}, {3.0, 1.0});
  const auto seeds = jet_lift(p, 3);
  const Jet y1 = seeds[2];

  // (y1)^2: second derivative is 2, not the raw Taylor coefficient 1.
  const Jet sq = y1 * y1;
  CHECK(jet_extract(sq, MultiIndex::of({0, 0, 2, 0})) == doctest::Approx(2.0).epsilon(1e-15));

  // x1*y1 mixed term.
  const Jet mixed = seeds[0] * y1;
  CHECK(mixed.partial(MultiIndex::of({1, 0, 1, 0})) == doctest::Approx(1.0).epsilon(1e-15));

  // exp(x1) at x1 = 0.3: third x1-derivative equals the value.
  const EvalPoint q({0.3, 0.0}, {1.0, 1.0});
  const Jet ex = exp(jet_lift(q, 3)[0]);
  CHECK(ex.partial(MultiIndex::of({3, 0, 0, 0})) ==
        doctest::Approx(std::exp(0.3)).epsilon(1e-12));

  CHECK_THROWS_AS(ex.partial(MultiIndex::of({4, 0, 0, 0})), Error);
}

TEST_CASE("multiplication is commutative and associative to truncation order") {
  Rng rng(20240817);
  const EvalPoint p({0.4, -0.7}, {1.2, 0.5});
  const auto seeds = jet_lift(p, 4);
  for (int trial = 0; trial < 20; ++trial) {
    Jet a = Jet::constant(seeds[0].space(), rng.uniform(-2, 2), 4);
    Jet b = a;
    Jet c = a;
    for (int v = 0; v < 4; ++v) {
      a += rng.uniform(-1, 1) * seeds[static_cast<std::size_t>(v)];
      b += rng.uniform(-1, 1) * seeds[static_cast<std::size_t>(v)];
      c += rng.uniform(-1, 1) * seeds[static_cast<std::size_t>(v)];
    }
    a = a * a;  // quadratic, still order 4
    CHECK(identical(a * b, b * a));
    CHECK(max_coefficient_difference((a * b) * c, a * (b * c)) < 1e-13);
  }
}

TEST_CASE("derivative lowers the order and shifts coefficients") {
  const EvalPoint p({0.5, 0.0}, {2.0, 1.0});
  const auto seeds = jet_lift(p, 3);
  const Jet f = sin(seeds[0]) * seeds[2];  // sin(x1) y1
  const Jet df = f.derivative(0);
  CHECK(df.order() == 2);
  CHECK(df.value() == doctest::Approx(std::cos(0.5) * 2.0).epsilon(1e-14));
  CHECK_THROWS_AS(f.derivative(0).derivative(0).derivative(0).derivative(0), Error);
}

TEST_CASE("chain rule: substitution of jets equals direct evaluation") {
  const EvalPoint p({0.3, 0.2}, {0.9, 1.4});
  const auto seeds = jet_lift(p, 4);
  const Jet g = seeds[0] * seeds[0] + seeds[3];  // x1^2 + y2

  // 1-variable jet of exp around g's value, composed with g.
  auto line = JetSpace::get(1, 4);
  const Jet u = Jet::variable(line, 0, g.value(), 4);
  const Jet f_of_u = exp(u);
  const Jet composed = f_of_u.substitute(std::span<const Jet>(&g, 1));
  const Jet direct = exp(g);
  CHECK(max_coefficient_difference(composed, direct) < 1e-13);
}

TEST_CASE("domain errors carry through") {
  const EvalPoint p({-1.0, 0.0}, {1.0, 1.0});
  const auto seeds = jet_lift(p, 2);
  CHECK_THROWS_AS(log(seeds[0]), DomainError);
  CHECK_THROWS_AS(sqrt(seeds[0]), DomainError);
  CHECK_THROWS_AS(inverse(seeds[0] + 1.0), DomainError);  // value zero
  CHECK_NOTHROW(pow(seeds[0], 3ll));                      // integer power of negative base
  CHECK_THROWS_AS(pow(seeds[0], 0.5), DomainError);
}

TEST_CASE("jet derivatives agree with the finite-difference oracle") {
  // Randomized smooth fields built from safe combinators; orders 1..4.
  Rng rng(98761);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> x = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    std::vector<double> y = {rng.uniform(0.6, 1.8) * (rng.next_unit() < 0.5 ? -1 : 1),
                             rng.uniform(0.6, 1.8) * (rng.next_unit() < 0.5 ? -1 : 1)};
    const EvalPoint p(x, y);

    // Exercises the whole smooth library: sin, cos, exp, log, sqrt, pow,
    // division, with arguments kept in tame ranges.
    const double a = rng.uniform(-1, 1), b = rng.uniform(-1, 1), c = rng.uniform(-0.5, 0.5);
    auto field = [&](const EvalPoint& q) {
      const double u = a * q.x()[0] + b * q.y()[1];
      return std::sin(u) * std::exp(c * q.x()[1]) +
             q.y()[0] * q.y()[0] / (2.0 + q.x()[0] * q.x()[0]) +
             std::log(1.5 + q.y()[1] * q.y()[1]) + std::sqrt(1.1 + q.x()[1] * q.x()[1]) +
             0.2 * std::pow(1.2 + q.y()[0] * q.y()[0], 1.5) + std::cos(q.x()[0]);
    };
    const auto seeds = jet_lift(p, 4);
    const Jet u = a * seeds[0] + b * seeds[3];
    const Jet jf = sin(u) * exp(c * seeds[1]) +
                   seeds[2] * seeds[2] / (2.0 + seeds[0] * seeds[0]) +
                   log(1.5 + seeds[3] * seeds[3]) + sqrt(1.1 + seeds[1] * seeds[1]) +
                   0.2 * pow(1.2 + seeds[2] * seeds[2], 1.5) + cos(seeds[0]);

    // random multi-index of degree 1..4
    MultiIndex idx(4);
    const int degree = 1 + static_cast<int>(rng.next_u64() % 4);
    for (int d = 0; d < degree; ++d) idx.bump(static_cast<int>(rng.next_u64() % 4), 1);

    double fd = 0.0;
    try {
      fd = fd_derivative(field, p, idx);
    } catch (const Error&) {
      continue;  // stencil refused near y = 0
    }
    const double jet_value = jf.partial(idx);
    CHECK(std::fabs(fd - jet_value) <= 1e-5 * (1.0 + std::fabs(jet_value)));
    ++checked;
  }
  CHECK(checked > 80);
}

TEST_CASE("oracle sanity on closed forms") {
  const EvalPoint p({0.0, 0.0}, {0.7, 1.1});
  // d/dy1 d/dy1 of y1^2 is exactly 2 for the quadratic stencil.
  auto sq = [](const EvalPoint& q) { return q.y()[0] * q.y()[0]; };
  CHECK(fd_derivative(sq, p, MultiIndex::of({0, 0, 2, 0})) == doctest::Approx(2.0).epsilon(1e-6));

  auto sine = [](const EvalPoint& q) { return std::sin(q.x()[0]); };
  CHECK(fd_derivative(sine, p, MultiIndex::of({1, 0, 0, 0})) ==
        doctest::Approx(1.0).epsilon(1e-8));

  // Stencil that would cross y = 0 is refused.
  const EvalPoint tight({0.0, 0.0}, {1e-9, 1e-9});
  CHECK_THROWS_AS(fd_derivative(sq, tight, MultiIndex::of({0, 0, 1, 0})), Error);
}

}  // TEST_SUITE
