#include "hitr/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hitr/error.hpp"

namespace hitr {

std::string check_distribution(std::size_t dim,
                               std::span<const ProbEntry> entries,
                               double tol) {
  double sum = 0.0;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& e = entries[k];
    if (e.index >= dim) {
      return "index " + std::to_string(e.index) + " out of range " +
             std::to_string(dim);
    }
    if (k > 0 && entries[k - 1].index >= e.index) {
      return "indices not strictly increasing at position " +
             std::to_string(k);
    }
    if (!(e.prob > 0.0) || !std::isfinite(e.prob)) {
      return "non-positive probability at index " + std::to_string(e.index);
    }
    sum += e.prob;
  }
  if (std::abs(sum - 1.0) > tol) {
    return "probabilities sum to " + std::to_string(sum);
  }
  return {};
}

SparseDistribution::SparseDistribution(std::size_t dim,
                                       std::vector<ProbEntry> entries)
    : dim_(dim), entries_(std::move(entries)) {
  if (auto why = check_distribution(dim_, entries_); !why.empty()) {
    throw data_error("InvalidDistribution", "invalid distribution: " + why);
  }
}

SparseDistribution SparseDistribution::uniform(std::size_t dim) {
  std::vector<ProbEntry> entries;
  entries.reserve(dim);
  const double p = 1.0 / static_cast<double>(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    entries.push_back({static_cast<Index>(i), p});
  }
  return unchecked(dim, std::move(entries));
}

SparseDistribution SparseDistribution::from_dense(
    std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0)) {
    throw data_error("ZeroTotalCounts", "cannot normalize an all-zero vector");
  }
  std::vector<ProbEntry> entries;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] > 0.0) {
      entries.push_back({static_cast<Index>(i), weights[i] / total});
    }
  }
  return unchecked(weights.size(), std::move(entries));
}

double SparseDistribution::prob(Index i) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), i,
      [](const ProbEntry& e, Index idx) { return e.index < idx; });
  return (it != entries_.end() && it->index == i) ? it->prob : 0.0;
}

std::vector<double> SparseDistribution::to_dense() const {
  std::vector<double> dense(dim_, 0.0);
  for (const auto& e : entries_) dense[e.index] = e.prob;
  return dense;
}

Index SparseDistribution::argmax() const {
  if (entries_.empty()) {
    throw data_error("EmptyDistribution", "argmax of an empty distribution");
  }
  const ProbEntry* best = &entries_.front();
  for (const auto& e : entries_) {
    if (e.prob > best->prob) best = &e;
  }
  return best->index;
}

CountVector::CountVector(std::size_t dim, std::vector<CountEntry> entries)
    : dim_(dim), entries_(std::move(entries)) {
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    const auto& e = entries_[k];
    if (e.index >= dim_ || (k > 0 && entries_[k - 1].index >= e.index) ||
        !(e.count >= 0.0) || !std::isfinite(e.count)) {
      throw data_error("InvalidCounts",
                       "invalid count vector at position " + std::to_string(k));
    }
  }
}

double CountVector::total() const noexcept {
  double t = 0.0;
  for (const auto& e : entries_) t += e.count;
  return t;
}

double CountVector::count(Index i) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), i,
      [](const CountEntry& e, Index idx) { return e.index < idx; });
  return (it != entries_.end() && it->index == i) ? it->count : 0.0;
}

CountVector CountVector::scaled(const SparseDistribution& dist, double scale) {
  std::vector<CountEntry> entries;
  entries.reserve(dist.support_size());
  for (const auto& e : dist.entries()) {
    entries.push_back({e.index, e.prob * scale});
  }
  CountVector v;
  v.dim_ = dist.dim();
  v.entries_ = std::move(entries);
  return v;
}

}  // namespace hitr
