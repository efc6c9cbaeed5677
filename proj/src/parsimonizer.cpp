#include "hitr/parsimonizer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hitr/error.hpp"
#include "hitr/parallel.hpp"

namespace hitr {

void EmConfig::validate() const {
  auto fail = [](const std::string& what) {
    throw config_error("InvalidEmConfig", what);
  };
  if (!(lambda > 0.0 && lambda <= 1.0)) fail("lambda must be in (0, 1]");
  if (!(prune_threshold >= 0.0 && prune_threshold < 1.0)) {
    fail("prune threshold must be in [0, 1)");
  }
  if (max_iterations < 1) fail("max_iterations must be positive");
  if (!(convergence_tol > 0.0)) fail("convergence_tol must be positive");
}

namespace {

double background_at(std::span<const double> background, Index i) {
  return i < background.size() ? background[i] : 0.0;
}

// E-step + M-step over the support of `current`. `counts` and `current`
// are both sorted by index, so the count lookup is a merge walk.
std::vector<ProbEntry> step(std::span<const CountEntry> counts,
                            std::span<const ProbEntry> current,
                            std::span<const double> background,
                            double lambda) {
  std::vector<ProbEntry> next;
  next.reserve(current.size());
  double sum = 0.0;
  std::size_t c = 0;
  for (const auto& cur : current) {
    while (c < counts.size() && counts[c].index < cur.index) ++c;
    const double tf =
        (c < counts.size() && counts[c].index == cur.index) ? counts[c].count
                                                            : 0.0;
    const double bg = background_at(background, cur.index);
    // lambda == 1 short-circuits so the identity case is exact in floating
    // point as well.
    const double e =
        (bg > 0.0 && lambda < 1.0) ? tf * (lambda * cur.prob) /
                       (lambda * cur.prob + (1.0 - lambda) * bg)
                 : tf;
    if (e > 0.0) {
      next.push_back({cur.index, e});
      sum += e;
    }
  }
  if (!(sum > 0.0)) {
    throw data_error("DegenerateStep",
                     "EM step left no mass outside the background");
  }
  for (auto& e : next) e.prob /= sum;
  return next;
}

// Drops entries below threshold and renormalizes the survivors. Rows that
// lose nothing are left untouched so the lambda = 1 path stays bit-exact.
void prune(std::vector<ProbEntry>& dist, double threshold) {
  if (threshold <= 0.0) return;
  const auto best = std::max_element(
      dist.begin(), dist.end(),
      [](const ProbEntry& a, const ProbEntry& b) { return a.prob < b.prob; });
  const ProbEntry keep{best->index, 1.0};
  const auto old_size = dist.size();
  std::erase_if(dist, [&](const ProbEntry& e) { return e.prob < threshold; });
  if (dist.empty()) {
    dist.push_back(keep);
    return;
  }
  if (dist.size() == old_size) return;
  double sum = 0.0;
  for (const auto& e : dist) sum += e.prob;
  for (auto& e : dist) e.prob /= sum;
}

double max_change(std::span<const ProbEntry> before,
                  std::span<const ProbEntry> after) {
  double delta = 0.0;
  std::size_t i = 0, j = 0;
  while (i < before.size() || j < after.size()) {
    if (j == after.size() ||
        (i < before.size() && before[i].index < after[j].index)) {
      delta = std::max(delta, before[i++].prob);
    } else if (i == before.size() || after[j].index < before[i].index) {
      delta = std::max(delta, after[j++].prob);
    } else {
      delta = std::max(delta, std::abs(after[j++].prob - before[i++].prob));
    }
  }
  return delta;
}

std::vector<double> densify(const SparseDistribution& background) {
  return background.to_dense();
}

}  // namespace

SparseDistribution initialize(const CountVector& counts) {
  const double total = counts.total();
  if (!(total > 0.0)) {
    throw data_error("ZeroTotalCounts", "counts have zero total");
  }
  std::vector<ProbEntry> entries;
  entries.reserve(counts.entries().size());
  for (const auto& c : counts.entries()) {
    if (c.count > 0.0) entries.push_back({c.index, c.count / total});
  }
  return SparseDistribution::unchecked(counts.dim(), std::move(entries));
}

SparseDistribution em_step(const CountVector& counts,
                           const SparseDistribution& current,
                           std::span<const double> background,
                           double lambda) {
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    throw config_error("InvalidEmConfig", "lambda must be in (0, 1]");
  }
  return SparseDistribution::unchecked(
      current.dim(),
      step(counts.entries(), current.entries(), background, lambda));
}

SparseDistribution em_step(const CountVector& counts,
                           const SparseDistribution& current,
                           const SparseDistribution& background,
                           double lambda) {
  return em_step(counts, current, densify(background), lambda);
}

EmOutcome parsimonize_traced(const CountVector& counts,
                             std::span<const double> background,
                             const EmConfig& cfg) {
  cfg.validate();
  EmOutcome out;
  auto init = initialize(counts);
  std::vector<ProbEntry> cur(init.entries().begin(), init.entries().end());
  for (int it = 1; it <= cfg.max_iterations; ++it) {
    auto next = step(counts.entries(), cur, background, cfg.lambda);
    prune(next, cfg.prune_threshold);
    const double delta = max_change(cur, next);
    cur = std::move(next);
    out.iterations = it;
    if (delta < cfg.convergence_tol) {
      out.converged = true;
      break;
    }
  }
  out.dist = SparseDistribution::unchecked(counts.dim(), std::move(cur));
  return out;
}

SparseDistribution parsimonize(const CountVector& counts,
                               const SparseDistribution& background,
                               const EmConfig& cfg) {
  return parsimonize_traced(counts, densify(background), cfg).dist;
}

std::vector<EmOutcome> parsimonize_all(std::span<const CountVector> rows,
                                       std::span<const double> background,
                                       const EmConfig& cfg) {
  cfg.validate();
  std::vector<EmOutcome> out(rows.size());
  parallel::ExceptionSlot failure;
  const auto n = static_cast<std::ptrdiff_t>(rows.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t r = 0; r < n; ++r) {
    failure.run([&] { out[r] = parsimonize_traced(rows[r], background, cfg); });
  }
  failure.rethrow();
  return out;
}

namespace serial {

std::vector<EmOutcome> parsimonize_all(std::span<const CountVector> rows,
                                       std::span<const double> background,
                                       const EmConfig& cfg) {
  cfg.validate();
  std::vector<EmOutcome> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    out.push_back(parsimonize_traced(row, background, cfg));
  }
  return out;
}

}  // namespace serial

}  // namespace hitr
