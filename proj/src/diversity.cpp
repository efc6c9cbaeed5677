#include "hitr/diversity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hitr/error.hpp"

namespace hitr {

double TopicDistanceMatrix::max_off_diagonal() const {
  double m = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      if (i != j) m = std::max(m, values_[i * dim_ + j]);
    }
  }
  return m;
}

std::vector<std::vector<double>> topic_vectors(
    std::span<const SparseDistribution> doc_topic) {
  if (doc_topic.empty()) {
    throw data_error("EmptyInput", "no documents to build topic vectors from");
  }
  const auto T = doc_topic.front().dim();
  std::vector<std::vector<double>> v(T, std::vector<double>(doc_topic.size()));
  for (std::size_t y = 0; y < doc_topic.size(); ++y) {
    if (doc_topic[y].dim() != T) {
      throw data_error("ShapeMismatch", "doc_topic rows differ in dimension");
    }
    for (const auto& e : doc_topic[y].entries()) v[e.index][y] = e.prob;
  }
  return v;
}

namespace {

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Angle between unit-scaled vectors, divided by pi.
double scaled_angle(std::span<const double> a, double na,
                    std::span<const double> b, double nb) {
  double diff = 0.0, sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double x = a[k] / na;
    const double y = b[k] / nb;
    diff += (x - y) * (x - y);
    sum += (x + y) * (x + y);
  }
  const double angle = 2.0 * std::atan2(std::sqrt(diff), std::sqrt(sum));
  return std::clamp(angle / std::numbers::pi, 0.0, 1.0);
}

struct TopicTable {
  std::vector<std::vector<double>> vectors;
  std::vector<double> norms;
};

TopicTable make_table(std::span<const SparseDistribution> doc_topic) {
  TopicTable t{topic_vectors(doc_topic), {}};
  t.norms.reserve(t.vectors.size());
  for (const auto& v : t.vectors) t.norms.push_back(norm(v));
  return t;
}

double pair_distance(const TopicTable& t, std::size_t i, std::size_t j) {
  if (t.norms[i] == 0.0 || t.norms[j] == 0.0) return 1.0;
  return scaled_angle(t.vectors[i], t.norms[i], t.vectors[j], t.norms[j]);
}

void note_zero_topics(const TopicTable& t, TopicDistanceMatrix& m) {
  for (std::size_t i = 0; i < t.norms.size(); ++i) {
    if (t.norms[i] == 0.0) m.zero_topics.push_back(i);
  }
}

void check_ids(std::span<const SparseDistribution> doc_topic,
               std::span<const std::string> ids) {
  if (doc_topic.size() != ids.size()) {
    throw data_error("ShapeMismatch", "doc_topic and ids differ in length");
  }
}

}  // namespace

double angular_distance(std::span<const double> v1,
                        std::span<const double> v2) {
  if (v1.size() != v2.size()) {
    throw data_error("ShapeMismatch", "vectors differ in length");
  }
  const double n1 = norm(v1);
  const double n2 = norm(v2);
  if (n1 == 0.0 || n2 == 0.0) {
    throw data_error("ZeroVector", "angular distance of an all-zero vector");
  }
  return scaled_angle(v1, n1, v2, n2);
}

TopicDistanceMatrix topic_distances(
    std::span<const SparseDistribution> doc_topic) {
  const auto table = make_table(doc_topic);
  const auto T = table.vectors.size();
  TopicDistanceMatrix m(T);
  const auto pairs = static_cast<std::ptrdiff_t>(T * T);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t p = 0; p < pairs; ++p) {
    const auto i = static_cast<std::size_t>(p) / T;
    const auto j = static_cast<std::size_t>(p) % T;
    if (i < j) m.set(i, j, pair_distance(table, i, j));
  }
  note_zero_topics(table, m);
  return m;
}

double rao_diversity(const SparseDistribution& p,
                     const TopicDistanceMatrix& delta) {
  if (p.dim() != delta.dim()) {
    throw data_error("ShapeMismatch", "distribution and distance matrix differ");
  }
  const auto e = p.entries();
  double div = 0.0;
  for (const auto& a : e) {
    double row = 0.0;
    for (const auto& b : e) row += b.prob * delta(a.index, b.index);
    div += a.prob * row;
  }
  return div;
}

std::vector<DiversityScore> score_corpus(
    std::span<const SparseDistribution> doc_topic,
    std::span<const std::string> ids) {
  check_ids(doc_topic, ids);
  const auto delta = topic_distances(doc_topic);
  std::vector<DiversityScore> out(doc_topic.size());
  const auto n = static_cast<std::ptrdiff_t>(doc_topic.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t d = 0; d < n; ++d) {
    out[d] = {ids[d], rao_diversity(doc_topic[d], delta)};
  }
  return out;
}

namespace serial {

TopicDistanceMatrix topic_distances(
    std::span<const SparseDistribution> doc_topic) {
  const auto table = make_table(doc_topic);
  const auto T = table.vectors.size();
  TopicDistanceMatrix m(T);
  for (std::size_t i = 0; i < T; ++i) {
    for (std::size_t j = i + 1; j < T; ++j) {
      m.set(i, j, pair_distance(table, i, j));
    }
  }
  note_zero_topics(table, m);
  return m;
}

std::vector<DiversityScore> score_corpus(
    std::span<const SparseDistribution> doc_topic,
    std::span<const std::string> ids) {
  check_ids(doc_topic, ids);
  const auto delta = serial::topic_distances(doc_topic);
  std::vector<DiversityScore> out;
  out.reserve(doc_topic.size());
  for (std::size_t d = 0; d < doc_topic.size(); ++d) {
    out.push_back({ids[d], rao_diversity(doc_topic[d], delta)});
  }
  return out;
}

}  // namespace serial

}  // namespace hitr
