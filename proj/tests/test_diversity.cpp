#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "hitr/diversity.hpp"
#include "hitr/error.hpp"
#include "hitr/parallel.hpp"

using namespace hitr;

namespace {

std::vector<SparseDistribution> random_doc_topic(std::mt19937_64& g,
                                                 std::size_t docs,
                                                 std::size_t T) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<SparseDistribution> rows;
  for (std::size_t d = 0; d < docs; ++d) {
    std::vector<double> w(T);
    for (auto& x : w) x = u(g) < 0.4 ? 0.0 : u(g);
    w[g() % T] += 0.5;
    rows.push_back(SparseDistribution::from_dense(w));
  }
  return rows;
}

}  // namespace

TEST_CASE("angular distance on known angles") {
  const std::vector<double> x{1, 0}, y{0, 1}, xy{1, 1}, x3{3, 0};
  CHECK(angular_distance(x, y) == doctest::Approx(0.5));
  CHECK(angular_distance(x, xy) == doctest::Approx(0.25));
  CHECK(angular_distance(x, x3) == 0.0);
  const std::vector<double> neg{-1, 0};
  CHECK(angular_distance(x, neg) == doctest::Approx(1.0));
  const std::vector<double> zero{0, 0};
  CHECK_THROWS_AS(angular_distance(x, zero), Error);
  const std::vector<double> three{1, 0, 0};
  CHECK_THROWS_AS(angular_distance(x, three), Error);
}

TEST_CASE("topic vectors are the columns of doc_topic") {
  std::vector<SparseDistribution> rows{SparseDistribution(2, {{0, 1.0}}),
                                       SparseDistribution(2, {{0, 0.25}, {1, 0.75}})};
  auto v = topic_vectors(rows);
  CHECK(v == std::vector<std::vector<double>>{{1.0, 0.25}, {0.0, 0.75}});
}

TEST_CASE("rao diversity by hand") {
  // Topic vectors (1, 0.5) and (0, 0.5).
  std::vector<SparseDistribution> rows{SparseDistribution(2, {{0, 1.0}}),
                                       SparseDistribution(2, {{0, 0.5}, {1, 0.5}})};
  auto delta = topic_distances(rows);
  const double d01 = std::acos(1.0 / std::sqrt(5.0)) / std::numbers::pi;
  CHECK(delta(0, 1) == doctest::Approx(d01));
  CHECK(delta(0, 0) == 0.0);
  CHECK(rao_diversity(rows[0], delta) == 0.0);
  CHECK(rao_diversity(rows[1], delta) == doctest::Approx(2 * 0.25 * d01));
}

TEST_CASE("topics that never occur are at distance one") {
  std::vector<SparseDistribution> rows{SparseDistribution(3, {{0, 1.0}}),
                                       SparseDistribution(3, {{1, 1.0}})};
  auto delta = topic_distances(rows);
  CHECK(delta.zero_topics == std::vector<std::size_t>{2});
  CHECK(delta(0, 2) == 1.0);
  CHECK(delta(0, 1) == doctest::Approx(0.5));
}

TEST_CASE("single-topic documents score zero") {
  std::mt19937_64 g(1);
  auto rows = random_doc_topic(g, 20, 5);
  rows.push_back(SparseDistribution(5, {{3, 1.0}}));
  auto delta = topic_distances(rows);
  CHECK(rao_diversity(rows.back(), delta) == 0.0);
}

TEST_CASE("parallel scoring equals the serial reference") {
  std::mt19937_64 g(2);
  auto rows = random_doc_topic(g, 80, 7);
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < rows.size(); ++i) ids.push_back("d" + std::to_string(i));
  auto ref = serial::score_corpus(rows, ids);
  for (int threads : {1, 4}) {
    parallel::set_threads(threads);
    auto par = score_corpus(rows, ids);
    for (std::size_t i = 0; i < ref.size(); ++i) {
      CHECK(par[i].doc_id == ref[i].doc_id);
      CHECK(par[i].score == ref[i].score);
    }
    auto a = topic_distances(rows);
    auto b = serial::topic_distances(rows);
    for (std::size_t i = 0; i < 7; ++i) {
      for (std::size_t j = 0; j < 7; ++j) CHECK(a(i, j) == b(i, j));
    }
  }
  parallel::set_threads(0);
}

TEST_CASE("shape errors") {
  std::vector<SparseDistribution> rows{SparseDistribution::uniform(3)};
  std::vector<std::string> ids{"a", "b"};
  CHECK_THROWS_AS(score_corpus(rows, ids), Error);
  CHECK_THROWS_AS(topic_vectors({}), Error);
  auto delta = topic_distances(rows);
  CHECK_THROWS_AS(rao_diversity(SparseDistribution::uniform(4), delta), Error);
}
