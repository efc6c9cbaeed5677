#pragma once

#include <span>
#include <vector>

#include "hitr/sparse.hpp"

namespace hitr {

// Parsimonious language model estimation.
//
// Observed counts are modelled as a two-component mixture
//   P(i) = lambda * P(i | specific) + (1 - lambda) * P(i | background)
// with the background held fixed. EM moves mass away from items that the
// background already explains; after every M-step, entries below
// prune_threshold are removed and the survivors renormalized.
//
// The same engine serves documents (items = words), topics (items = words)
// and topic assignments (items = topics).

struct EmConfig {
  double lambda = 0.5;            // (0, 1]; 1 disables parsimonization
  double prune_threshold = 0.01;  // [0, 1)
  int max_iterations = 50;
  double convergence_tol = 1e-6;  // max per-entry absolute change

  // Throws Error{"InvalidEmConfig"}.
  void validate() const;
};

struct EmOutcome {
  SparseDistribution dist;
  int iterations = 0;
  bool converged = false;
};

// Maximum-likelihood estimate count(i) / total over the positive entries.
// Throws Error{"ZeroTotalCounts"}.
SparseDistribution initialize(const CountVector& counts);

// One E-step plus M-step:
//   e_i = count(i) * lambda*cur(i) / (lambda*cur(i) + (1-lambda)*bg(i))
//   result(i) = e_i / sum(e)
// Items with bg(i) == 0 keep e_i = count(i). Support never grows.
// Throws Error{"DegenerateStep"} when sum(e) == 0.
SparseDistribution em_step(const CountVector& counts,
                           const SparseDistribution& current,
                           const SparseDistribution& background,
                           double lambda);
SparseDistribution em_step(const CountVector& counts,
                           const SparseDistribution& current,
                           std::span<const double> background,
                           double lambda);

// Runs em_step with pruning until convergence or max_iterations. When the
// threshold would remove every entry, the argmax survives with prob 1.
SparseDistribution parsimonize(const CountVector& counts,
                               const SparseDistribution& background,
                               const EmConfig& cfg);

EmOutcome parsimonize_traced(const CountVector& counts,
                             std::span<const double> background,
                             const EmConfig& cfg);

// Batch kernel: parsimonizes every row against one shared background.
// OpenMP-parallel over rows; bit-identical to serial::parsimonize_all.
std::vector<EmOutcome> parsimonize_all(std::span<const CountVector> rows,
                                       std::span<const double> background,
                                       const EmConfig& cfg);

namespace serial {
std::vector<EmOutcome> parsimonize_all(std::span<const CountVector> rows,
                                       std::span<const double> background,
                                       const EmConfig& cfg);
}  // namespace serial

}  // namespace hitr
