#include "doctest.h"

#include "hitr/error.hpp"
#include "hitr/sparse.hpp"

using namespace hitr;

TEST_CASE("constructor rejects malformed entries") {
  CHECK_NOTHROW(SparseDistribution(3, {{0, 0.5}, {2, 0.5}}));
  CHECK_THROWS_AS(SparseDistribution(3, {{0, 0.5}, {3, 0.5}}), Error);
  CHECK_THROWS_AS(SparseDistribution(3, {{2, 0.5}, {1, 0.5}}), Error);
  CHECK_THROWS_AS(SparseDistribution(3, {{0, 0.5}, {0, 0.5}}), Error);
  CHECK_THROWS_AS(SparseDistribution(3, {{0, 1.0}, {1, 0.0}}), Error);
  CHECK_THROWS_AS(SparseDistribution(3, {{0, 0.4}, {1, 0.4}}), Error);
}

TEST_CASE("lookup, densify and argmax") {
  SparseDistribution d(5, {{1, 0.25}, {3, 0.75}});
  CHECK(d.prob(3) == 0.75);
  CHECK(d.prob(0) == 0.0);
  CHECK(d.prob(4) == 0.0);
  CHECK(d.to_dense() == std::vector<double>{0, 0.25, 0, 0.75, 0});
  CHECK(d.argmax() == 3);
  CHECK(d.support_size() == 2);
}

TEST_CASE("argmax ties resolve to the lowest index") {
  SparseDistribution d(4, {{1, 0.5}, {2, 0.5}});
  CHECK(d.argmax() == 1);
  CHECK_THROWS_AS(SparseDistribution().argmax(), Error);
}

TEST_CASE("from_dense normalizes and skips zeros") {
  const std::vector<double> w{0.0, 2.0, 0.0, 6.0};
  auto d = SparseDistribution::from_dense(w);
  CHECK(d.dim() == 4);
  CHECK(d.support_size() == 2);
  CHECK(d.prob(1) == doctest::Approx(0.25));
  CHECK(d.prob(3) == doctest::Approx(0.75));
  const std::vector<double> zeros(3, 0.0);
  CHECK_THROWS_AS(SparseDistribution::from_dense(zeros), Error);
}

TEST_CASE("uniform") {
  auto u = SparseDistribution::uniform(4);
  CHECK(u.support_size() == 4);
  CHECK(check_distribution(4, u.entries()).empty());
}

TEST_CASE("count vectors") {
  CountVector c(4, {{0, 2.0}, {3, 5.0}});
  CHECK(c.total() == 7.0);
  CHECK(c.count(3) == 5.0);
  CHECK(c.count(1) == 0.0);
  CHECK_THROWS_AS(CountVector(4, {{3, 1.0}, {0, 1.0}}), Error);
  CHECK_THROWS_AS(CountVector(4, {{0, -1.0}}), Error);

  auto s = CountVector::scaled(SparseDistribution(4, {{1, 0.2}, {2, 0.8}}),
                               1000.0);
  CHECK(s.count(1) == doctest::Approx(200.0));
  CHECK(s.total() == doctest::Approx(1000.0));
}
