#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "fts/estimators.hpp"
#include "fts/series.hpp"
#include "fts/types.hpp"

namespace fts {

struct MetricReport
{
  double mse{ 0.0 };
  double mae{ 0.0 };
  //! Squared discretized L2 error per time point; mse is its mean.
  std::vector<double> per_time;
};

//! Mean over time points and grid points of the squared (absolute) error.
//! Throws ShapeMismatch.
double mse(const RowMatrix& est, const RowMatrix& truth);
double mae(const RowMatrix& est, const RowMatrix& truth);
MetricReport metrics(const RowMatrix& est, const RowMatrix& truth);

//! Discretized norm of one row: mean |v| (L1), root mean square (L2) or
//! max |v| (Sup).
double discretized_norm(std::span<const double> row, Norm norm);

//! ||X_i - mu_hat(t_i)|| per time point.
std::vector<double> residual_norms(const RowMatrix& observed,
                                   const RowMatrix& smoothed,
                                   Norm norm);
std::vector<double> residual_norms(const FunctionalSeries& series,
                                   const Estimate& smoothed,
                                   Norm norm);

struct CusumResult
{
  //! process[k-1] = (S_k - (k/n) S_n) / sqrt(n) for k = 1, ..., n.
  std::vector<double> process;
  //! 1-based k maximizing |process|; ties go to the smallest k.
  std::size_t argmax_index{ 1 };
  //! max_k |process[k-1]|
  double max_value{ 0.0 };
};

CusumResult cusum(std::span<const double> z);

//! Inclusive 0-based index range.
using IndexRange = std::pair<std::size_t, std::size_t>;

inline constexpr double mad_consistency = 1.4826;

//! Maximal runs of z_i > median(z) + threshold_multiplier * MAD(z), with the
//! MAD scaled by 1.4826 to estimate a Gaussian standard deviation.
std::vector<IndexRange> detect_peaks(std::span<const double> z,
                                     double threshold_multiplier = 5.0);

//! Sliding-window embedding of an N x d signal: observation i = 1, ..., n
//! with n = floor(N/stride) - (m-1) holds the d channels at rows
//! stride*i + j - 1, j = 0, ..., m-1 (channel-major), time stamp i/n.
//! Throws InputTooShort.
FunctionalSeries sliding_embed(const RowMatrix& raw,
                               std::size_t stride,
                               std::size_t m);

} // namespace fts
