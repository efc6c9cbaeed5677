#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hitr {

using Index = std::uint32_t;

struct ProbEntry {
  Index index;
  double prob;
  bool operator==(const ProbEntry&) const = default;
};

struct CountEntry {
  Index index;
  double count;
  bool operator==(const CountEntry&) const = default;
};

// Normalized probability vector stored as (index, prob) pairs.
//
// Invariants: indices strictly increasing and < dim, every prob > 0, probs
// sum to 1 within 1e-9. The checked constructor enforces all three; the
// unchecked one is for kernels that produce valid rows by construction.
class SparseDistribution {
 public:
  SparseDistribution() = default;

  // Throws Error{"InvalidDistribution"} on any invariant violation.
  SparseDistribution(std::size_t dim, std::vector<ProbEntry> entries);

  static SparseDistribution unchecked(std::size_t dim,
                                      std::vector<ProbEntry> entries) {
    SparseDistribution d;
    d.dim_ = dim;
    d.entries_ = std::move(entries);
    return d;
  }

  // Uniform 1/dim over every index.
  static SparseDistribution uniform(std::size_t dim);

  // Normalizes a dense non-negative vector, dropping zeros.
  static SparseDistribution from_dense(std::span<const double> weights);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t support_size() const noexcept { return entries_.size(); }
  std::span<const ProbEntry> entries() const noexcept { return entries_; }
  bool empty() const noexcept { return entries_.empty(); }

  // Probability of index i (0 if absent). O(log support).
  double prob(Index i) const;

  std::vector<double> to_dense() const;

  // Index of the largest probability, lowest index on ties.
  Index argmax() const;

  bool operator==(const SparseDistribution&) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<ProbEntry> entries_;
};

// Non-negative (pseudo-)counts over a fixed dimension, indices strictly
// increasing.
class CountVector {
 public:
  CountVector() = default;
  CountVector(std::size_t dim, std::vector<CountEntry> entries);

  std::size_t dim() const noexcept { return dim_; }
  std::span<const CountEntry> entries() const noexcept { return entries_; }
  double total() const noexcept;
  double count(Index i) const;

  // count(i) = scale * P(i) for every entry of dist.
  static CountVector scaled(const SparseDistribution& dist, double scale);

 private:
  std::size_t dim_ = 0;
  std::vector<CountEntry> entries_;
};

// Validates the distribution invariants; returns an empty string when all
// hold, otherwise a description of the first violation.
std::string check_distribution(std::size_t dim,
                               std::span<const ProbEntry> entries,
                               double tol = 1e-9);

}  // namespace hitr
