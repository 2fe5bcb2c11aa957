#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fts/estimators.hpp"
#include "fts/kernel.hpp"
#include "fts/series.hpp"

namespace fts {

enum class FoldScheme
{
  Interleaved,      //!< index i goes to fold i mod k
  ContiguousBlocks  //!< k consecutive blocks, sizes differing by at most one
};

struct CvConfig
{
  int k{ 5 };
  int grid_size{ 20 };
  EstimatorKind estimator{ EstimatorKind::LocalLinear };
  FoldScheme fold_scheme{ FoldScheme::Interleaved };
};

struct CvReport
{
  std::vector<double> grid;
  //! Mean validation MSE per grid bandwidth; +inf where a fit failed.
  std::vector<double> scores;
  double best_h{ 0.0 };
};

//! `grid_size` geometrically spaced bandwidths from 1/n to 1/sqrt(n), n >= 4.
std::vector<double> bandwidth_grid(std::size_t n, int grid_size);

//! Index sets of the k validation folds.
std::vector<std::vector<std::size_t>> make_folds(std::size_t n,
                                                 int k,
                                                 FoldScheme scheme);

//! k-fold cross-validation over bandwidth_grid(n, grid_size).
//!
//! Each fold is fitted on the remaining observations and predicted at the
//! held-out time stamps; the score of a bandwidth is the squared prediction
//! error averaged over held-out stamps and coordinates, then over folds.
//! Bandwidths whose fit fails on any fold score +inf. The smallest
//! bandwidth whose score is within 1e-12 times the mean squared observation
//! of the minimum wins. Throws AllBandwidthsInvalid.
CvReport cross_validate(const FunctionalSeries& series,
                        const CvConfig& cfg,
                        const Kernel& kernel = Kernel::quartic());

FoldScheme parse_fold_scheme(const std::string& name);

} // namespace fts
