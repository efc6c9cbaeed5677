#include "doctest.h"

#include <random>

#include "hitr/error.hpp"
#include "hitr/parallel.hpp"
#include "hitr/parsimonizer.hpp"

using namespace hitr;

namespace {

// Golden values from tests/oracles/plm_golden.py.
const std::vector<double> kBg3{0.9, 0.05, 0.05};
const CountVector kDoc3(3, {{0, 50}, {1, 10}, {2, 10}});

void check_close(const SparseDistribution& d, const std::vector<double>& want) {
  REQUIRE(d.dim() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    CHECK(std::abs(d.prob(static_cast<Index>(i)) - want[i]) < 1e-12);
  }
}

CountVector random_counts(std::mt19937_64& g, std::size_t dim) {
  std::vector<CountEntry> e;
  std::uniform_int_distribution<int> n(0, 20);
  for (std::size_t i = 0; i < dim; ++i) {
    if (int c = n(g); c > 0 && g() % 3 != 0) e.push_back({Index(i), double(c)});
  }
  if (e.empty()) e.push_back({0, 1.0});
  return CountVector(dim, e);
}

}  // namespace

TEST_CASE("initialize is the ML estimate") {
  auto d = initialize(CountVector(4, {{0, 1}, {2, 3}, {3, 0}}));
  CHECK(d.support_size() == 2);
  CHECK(d.prob(0) == 0.25);
  CHECK(d.prob(2) == 0.75);
  CHECK_THROWS_AS(initialize(CountVector(2, {{0, 0.0}})), Error);
}

TEST_CASE("single EM step on a two-word example") {
  CountVector c(2, {{0, 8}, {1, 2}});
  SparseDistribution cur(2, {{0, 0.8}, {1, 0.2}});
  const std::vector<double> bg{0.5, 0.5};
  auto next = em_step(c, cur, bg, 0.5);
  CHECK(std::abs(next.prob(0) - 0.896) < 1e-12);
  CHECK(std::abs(next.prob(1) - 0.10400000000000001) < 1e-12);
}

TEST_CASE("golden: three-word document converges to the specific words") {
  EmConfig cfg{0.1, 0.01, 50, 1e-6};
  auto out = parsimonize_traced(kDoc3, kBg3, cfg);
  CHECK(out.converged);
  CHECK(out.iterations == 9);
  check_close(out.dist, {0.0, 0.5, 0.5});
}

TEST_CASE("golden: truncated runs") {
  auto three = parsimonize_traced(kDoc3, kBg3, {0.1, 0.01, 3, 1e-6});
  CHECK_FALSE(three.converged);
  check_close(three.dist,
              {0.1479572877281935, 0.4260213561359033, 0.4260213561359033});

  auto two = parsimonize_traced(kDoc3, kBg3, {0.1, 0.0, 2, 1e-6});
  check_close(two.dist, {0.2617338144785563, 0.36913309276072187,
                         0.36913309276072187});
}

TEST_CASE("golden: four-word vector") {
  CountVector c(4, {{0, 30}, {1, 20}, {2, 10}, {3, 1}});
  const std::vector<double> bg{0.5, 0.2, 0.1, 0.2};
  auto full = parsimonize_traced(c, bg, {0.5, 0.01, 50, 1e-6});
  CHECK(full.iterations == 16);
  check_close(full.dist, {0.40000045242819204, 0.3999996983812053,
                          0.19999984919060265, 0.0});

  auto one = parsimonize_traced(c, bg, {0.5, 0.0, 1, 1e-6});
  check_close(one.dist, {0.44293245331033926, 0.3698745814392757,
                         0.18493729071963785, 0.0022556745307470982});
}

TEST_CASE("lambda = 1 with no threshold returns the ML estimate bit for bit") {
  std::mt19937_64 g(11);
  for (int rep = 0; rep < 50; ++rep) {
    auto c = random_counts(g, 30);
    std::vector<double> bg(30, 1.0 / 30);
    auto out = parsimonize_traced(c, bg, {1.0, 0.0, 50, 1e-6});
    CHECK(out.dist == initialize(c));
  }
}

TEST_CASE("zero background leaves counts as they are") {
  CountVector c(3, {{0, 3}, {1, 1}});
  const std::vector<double> bg(3, 0.0);
  CHECK(parsimonize_traced(c, bg, {0.3, 0.0, 50, 1e-6}).dist == initialize(c));
}

TEST_CASE("everything pruned keeps the argmax") {
  // Two equal words against a uniform background stay at 0.5 each; a
  // threshold above that prunes both.
  CountVector c(2, {{0, 5}, {1, 5}});
  const std::vector<double> bg{0.5, 0.5};
  auto d = parsimonize_traced(c, bg, {0.5, 0.6, 5, 1e-6}).dist;
  CHECK(d.support_size() == 1);
  CHECK(d.prob(0) == 1.0);
}

TEST_CASE("output is a valid distribution above the threshold") {
  std::mt19937_64 g(5);
  for (int rep = 0; rep < 100; ++rep) {
    auto c = random_counts(g, 40);
    std::vector<double> bg(40);
    for (auto& b : bg) b = 0.1 + double(g() % 100);
    double s = 0;
    for (double b : bg) s += b;
    for (auto& b : bg) b /= s;
    auto d = parsimonize_traced(c, bg, {0.3, 0.02, 50, 1e-6}).dist;
    CHECK(check_distribution(40, d.entries()).empty());
    for (const auto& e : d.entries()) {
      CHECK(e.prob >= 0.02);
      CHECK(c.count(e.index) > 0.0);
    }
  }
}

TEST_CASE("invalid configs are rejected") {
  const std::vector<double> bg{0.5, 0.5};
  CountVector c(2, {{0, 1}});
  CHECK_THROWS_AS(parsimonize_traced(c, bg, {0.0, 0.0, 50, 1e-6}), Error);
  CHECK_THROWS_AS(parsimonize_traced(c, bg, {1.5, 0.0, 50, 1e-6}), Error);
  CHECK_THROWS_AS(parsimonize_traced(c, bg, {0.5, 1.0, 50, 1e-6}), Error);
  CHECK_THROWS_AS(parsimonize_traced(c, bg, {0.5, 0.0, 0, 1e-6}), Error);
}

TEST_CASE("parallel batch equals the serial reference") {
  std::mt19937_64 g(3);
  std::vector<CountVector> rows;
  for (int i = 0; i < 64; ++i) rows.push_back(random_counts(g, 25));
  std::vector<double> bg(25, 1.0 / 25);
  EmConfig cfg{0.4, 0.01, 50, 1e-6};
  auto ref = serial::parsimonize_all(rows, bg, cfg);
  for (int threads : {1, 2, 4}) {
    parallel::set_threads(threads);
    auto par = parsimonize_all(rows, bg, cfg);
    REQUIRE(par.size() == ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
      CHECK(par[i].dist == ref[i].dist);
      CHECK(par[i].iterations == ref[i].iterations);
    }
  }
  parallel::set_threads(0);
}
