#include <doctest.h>

#include <cmath>

#include "fp/classify.hpp"
#include "test_support.hpp"

using namespace fp;
using namespace fptest;

TEST_SUITE("classification") {

TEST_CASE("identity frame sits in every class") {
  FrameSampler sampler(load_bundled("identity"), grouped_sample(2, 10, 3));
  const Classification cls = classify(sampler);
  for (const char* name : {"FP-Landsberg", "FP-Berwald", "FP-Minkowskian", "FP-Riemannian"}) {
    CHECK(cls.holds(name));
  }
  CHECK(cls.inclusion_consistent);
}

TEST_CASE("exponential frame: the full positional chain holds") {
  FrameSampler sampler(load_bundled("ap-exponential"), grouped_sample(2, 12, 9));
  const Classification cls = classify(sampler);
  CHECK(cls.holds("FP-Riemannian"));
  CHECK(cls.holds("FP-Berwald"));
  CHECK(cls.holds("FP-Landsberg"));
  CHECK(cls.inclusion_consistent);
}

TEST_CASE("rotated frame fails the frame-level class but keeps the metric-level note") {
  FrameSampler sampler(load_bundled("rotated-riemannian"), grouped_sample(2, 12, 9));
  const Classification cls = classify(sampler);
  const ClassRecord* riemann = cls.find("FP-Riemannian");
  REQUIRE(riemann != nullptr);
  CHECK(riemann->verdict == "fails");
  CHECK(riemann->conditions[0].residual > 1e-3);
  CHECK(cls.holds("FP-Landsberg"));
  CHECK(cls.inclusion_consistent);

  bool metric_x_only = false;
  bool lambda_x_only = true;
  for (const auto& extra : cls.extras) {
    if (extra.name == "metric-x-only") metric_x_only = extra.pass;
    if (extra.name == "lambda-x-only") lambda_x_only = extra.pass;
  }
  CHECK(metric_x_only);
  CHECK_FALSE(lambda_x_only);
}

TEST_CASE("conformal quartic frame is in no special class") {
  FrameSampler sampler(conformal_quartic(), grouped_sample(2, 12, 21));
  const Classification cls = classify(sampler);
  for (const char* name : {"FP-Landsberg", "FP-Berwald", "FP-Minkowskian", "FP-Riemannian"}) {
    CHECK_FALSE(cls.holds(name));
  }
  CHECK(cls.inclusion_consistent);
}

TEST_CASE("direction rescaling does not change the Landsberg verdict") {
  for (const Frame& frame : {load_bundled("quartic-minkowski"), conformal_quartic()}) {
    std::vector<EvalPoint> base = grouped_sample(2, 8, 77);
    std::vector<EvalPoint> doubled;
    for (const EvalPoint& p : base) {
      std::vector<double> y = p.y();
      for (double& v : y) v *= 2.0;
      doubled.emplace_back(p.x(), y);
    }
    FrameSampler s1(frame, base);
    FrameSampler s2(frame, doubled);
    const Classification c1 = classify(s1);
    const Classification c2 = classify(s2);
    CHECK(c1.holds("FP-Landsberg") == c2.holds("FP-Landsberg"));
  }
}

TEST_CASE("n = 3 rotated frame classifies like its planar counterpart") {
  const Frame frame = rotated_riemannian3();
  FrameSampler sampler(frame, grouped_sample(3, 6, 15));
  CHECK(sampler.validation().finsler_valid);
  const Classification cls = classify(sampler);
  CHECK(cls.holds("FP-Landsberg"));
  CHECK(cls.holds("FP-Minkowskian"));
  CHECK_FALSE(cls.holds("FP-Berwald"));
  CHECK_FALSE(cls.holds("FP-Riemannian"));
  CHECK(cls.inclusion_consistent);
}

TEST_CASE("insufficient direction multiplicity is an error") {
  FrameSampler sampler(load_bundled("identity"), sample(2, 10, 5));
  CHECK_THROWS_WITH_AS(classify(sampler), doctest::Contains("directions"), Error);
}

TEST_CASE("table suites: exponential frame passes the positional table") {
  FrameSampler sampler(load_bundled("ap-exponential"), grouped_sample(2, 12, 13));
  const auto cells = verify_special_tables(sampler, "FP-Riemannian");
  CHECK(cells.size() > 10);
  for (const auto& cell : cells) {
    INFO(cell.name);
    CHECK(cell.pass);
    CHECK_FALSE(cell.skipped_reason);
    CHECK(cell.residual <= 1e-8);
  }
}

TEST_CASE("table suites: natural-chart cells need the declaration") {
  // The quartic document declares its chart natural.
  FrameSampler declared(load_bundled("quartic-minkowski"), grouped_sample(2, 12, 13));
  const auto with = verify_special_tables(declared, "FP-Minkowskian");
  bool found_natural = false;
  for (const auto& cell : with) {
    INFO(cell.name);
    CHECK(cell.pass);
    if (cell.name.find("natural-") != std::string::npos) {
      found_natural = true;
      CHECK_FALSE(cell.skipped_reason);
    }
  }
  CHECK(found_natural);

  // The rotated frame holds at Minkowski level but declares nothing, so the
  // positional-form cells are skipped.
  FrameSampler undeclared(load_bundled("rotated-riemannian"), grouped_sample(2, 12, 13));
  const auto without = verify_special_tables(undeclared, "FP-Minkowskian");
  bool skipped_natural = false;
  for (const auto& cell : without) {
    if (cell.skipped_reason &&
        cell.skipped_reason->find("natural chart") != std::string::npos) {
      skipped_natural = true;
    }
  }
  CHECK(skipped_natural);
}

TEST_CASE("table suites: unmet hypothesis reports a skip") {
  FrameSampler sampler(conformal_quartic(), grouped_sample(2, 10, 31));
  const auto cells = verify_special_tables(sampler, "FP-Berwald");
  REQUIRE(cells.size() == 1);
  REQUIRE(cells[0].skipped_reason);
  CHECK(cells[0].skipped_reason->find("hypothesis not met") != std::string::npos);
  CHECK_THROWS_AS(verify_special_tables(sampler, "FP-Landsberg"), Error);
}

TEST_CASE("berwald table on the quartic frame") {
  FrameSampler sampler(load_bundled("quartic-minkowski"), grouped_sample(2, 12, 41));
  const auto cells = verify_special_tables(sampler, "FP-Berwald");
  for (const auto& cell : cells) {
    INFO(cell.name);
    CHECK(cell.pass);
  }
}

}  // TEST_SUITE
