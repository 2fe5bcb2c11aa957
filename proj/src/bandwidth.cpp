#include "fts/bandwidth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fts/errors.hpp"
#include "fts/parallel.hpp"

namespace fts {

std::vector<double> bandwidth_grid(std::size_t n, int grid_size)
{
  if (n < 4)
    throw InvalidArgument("bandwidth grid needs n >= 4");
  if (grid_size < 2)
    throw InvalidArgument("bandwidth grid needs at least two points");
  const double lo = 1.0 / static_cast<double>(n);
  const double hi = 1.0 / std::sqrt(static_cast<double>(n));
  const double log_lo = std::log(lo);
  const double log_ratio = std::log(hi) - log_lo;

  std::vector<double> grid(static_cast<std::size_t>(grid_size));
  for (int j = 0; j < grid_size; ++j)
    grid[j] = std::exp(log_lo + log_ratio * j / (grid_size - 1));
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

std::vector<std::vector<std::size_t>> make_folds(std::size_t n,
                                                 int k,
                                                 FoldScheme scheme)
{
  if (k < 2 || static_cast<std::size_t>(k) > n)
    throw InvalidArgument("fold count must lie in [2, n]");
  const auto folds_count = static_cast<std::size_t>(k);
  std::vector<std::vector<std::size_t>> folds(folds_count);
  if (scheme == FoldScheme::Interleaved) {
    for (std::size_t i = 0; i < n; ++i)
      folds[i % folds_count].push_back(i);
  } else {
    const std::size_t base = n / folds_count;
    const std::size_t extra = n % folds_count;
    std::size_t next = 0;
    for (std::size_t f = 0; f < folds_count; ++f) {
      const std::size_t size = base + (f < extra ? 1 : 0);
      for (std::size_t j = 0; j < size; ++j)
        folds[f].push_back(next++);
    }
  }
  return folds;
}

CvReport cross_validate(const FunctionalSeries& series,
                        const CvConfig& cfg,
                        const Kernel& kernel)
{
  const std::size_t n = series.size();
  if (cfg.k < 2 || static_cast<std::size_t>(cfg.k) * 4 > n)
    throw InvalidArgument("cross-validation needs 2 <= k <= n/4");

  CvReport report;
  report.grid = bandwidth_grid(n, cfg.grid_size);
  report.scores.assign(report.grid.size(),
                       std::numeric_limits<double>::infinity());

  struct Fold
  {
    FunctionalSeries train;
    std::vector<double> times;
    RowMatrix observed;
  };
  std::vector<Fold> folds;
  for (const auto& held_out : make_folds(n, cfg.k, cfg.fold_scheme)) {
    std::vector<std::size_t> train_rows;
    std::vector<double> times;
    RowMatrix observed(static_cast<Eigen::Index>(held_out.size()),
                       series.values().cols());
    std::size_t next = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (next < held_out.size() && held_out[next] == i) {
        times.push_back(series.times()[i]);
        observed.row(static_cast<Eigen::Index>(next)) =
          series.values().row(static_cast<Eigen::Index>(i));
        ++next;
      } else {
        train_rows.push_back(i);
      }
    }
    folds.push_back({ series.subset(train_rows), std::move(times),
                      std::move(observed) });
  }

  parallel_for(report.grid.size(), [&](std::size_t g) {
    const SmoothConfig smooth{ report.grid[g], kernel };
    double total = 0.0;
    for (const auto& fold : folds) {
      try {
        const Estimate fit =
          smooth_mean(cfg.estimator, fold.train, smooth, fold.times);
        total += (fit.mu_hat - fold.observed).squaredNorm() /
                 static_cast<double>(fold.observed.size());
      } catch (const NumericError&) {
        return;
      }
    }
    if (std::isfinite(total))
      report.scores[g] = total / static_cast<double>(folds.size());
  });

  // Scores closer than a tiny fraction of the data's mean square are ties,
  // so rounding noise cannot override the smallest-bandwidth rule.
  const double tie =
    1e-12 * series.values().squaredNorm() / static_cast<double>(series.values().size());
  double minimum = std::numeric_limits<double>::infinity();
  for (double score : report.scores)
    minimum = std::min(minimum, score);
  if (!std::isfinite(minimum))
    throw AllBandwidthsInvalid(
      "no bandwidth in the grid gives valid fits on every fold");
  std::size_t best = 0;
  while (!(report.scores[best] <= minimum + tie))
    ++best;
  report.best_h = report.grid[best];
  return report;
}

FoldScheme parse_fold_scheme(const std::string& name)
{
  if (name == "interleaved")
    return FoldScheme::Interleaved;
  if (name == "blocks" || name == "contiguous")
    return FoldScheme::ContiguousBlocks;
  throw InvalidArgument("unknown fold scheme '" + name +
                        "' (expected interleaved or blocks)");
}

} // namespace fts
