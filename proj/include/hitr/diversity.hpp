#pragma once

#include <span>
#include <string>
#include <vector>

#include "hitr/sparse.hpp"

namespace hitr {

// Symmetric T x T matrix of topic distances in [0, 1] with zero diagonal.
class TopicDistanceMatrix {
 public:
  TopicDistanceMatrix() = default;
  explicit TopicDistanceMatrix(std::size_t dim)
      : dim_(dim), values_(dim * dim, 0.0) {}

  std::size_t dim() const noexcept { return dim_; }
  double operator()(std::size_t i, std::size_t j) const {
    return values_[i * dim_ + j];
  }
  void set(std::size_t i, std::size_t j, double v) {
    values_[i * dim_ + j] = v;
    values_[j * dim_ + i] = v;
  }
  double max_off_diagonal() const;

  // Topics whose co-occurrence vector was all-zero; they sit at distance 1
  // from every other topic.
  std::vector<std::size_t> zero_topics;

 private:
  std::size_t dim_ = 0;
  std::vector<double> values_;
};

struct DiversityScore {
  std::string doc_id;
  double score = 0.0;
};

// Row x of the result is V_x with V_x[y] = P(t = x | d = y).
// Throws Error{"EmptyInput"} / Error{"ShapeMismatch"}.
std::vector<std::vector<double>> topic_vectors(
    std::span<const SparseDistribution> doc_topic);

// arccos(cosine(v1, v2)) / pi. Computed as 2 atan2(|u1 - u2|, |u1 + u2|) on
// the unit vectors, which equals the arccos form but stays accurate near 0
// and 1 where arccos loses half its digits.
// Throws Error{"ZeroVector"} if either vector is all zero.
double angular_distance(std::span<const double> v1, std::span<const double> v2);

// Distances between every pair of topic co-occurrence vectors. OpenMP over
// topic pairs; bit-identical to serial::topic_distances.
TopicDistanceMatrix topic_distances(
    std::span<const SparseDistribution> doc_topic);

// Rao's quadratic entropy: sum_i sum_j p_i p_j delta(i, j) over the support.
double rao_diversity(const SparseDistribution& p,
                     const TopicDistanceMatrix& delta);

// Builds the distance matrix once from the whole set, then scores every
// document. OpenMP over documents.
std::vector<DiversityScore> score_corpus(
    std::span<const SparseDistribution> doc_topic,
    std::span<const std::string> ids);

namespace serial {
TopicDistanceMatrix topic_distances(
    std::span<const SparseDistribution> doc_topic);
std::vector<DiversityScore> score_corpus(
    std::span<const SparseDistribution> doc_topic,
    std::span<const std::string> ids);
}  // namespace serial

}  // namespace hitr
