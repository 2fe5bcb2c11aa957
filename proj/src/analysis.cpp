#include "fts/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fts/errors.hpp"

namespace fts {

namespace {

void check_shapes(const RowMatrix& a, const RowMatrix& b)
{
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeMismatch("shape " + std::to_string(a.rows()) + "x" +
                        std::to_string(a.cols()) + " does not match " +
                        std::to_string(b.rows()) + "x" +
                        std::to_string(b.cols()));
  if (a.size() == 0)
    throw ShapeMismatch("empty matrices");
}

double median(std::vector<double> values)
{
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1)
    return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lower + upper);
}

} // namespace

double mse(const RowMatrix& est, const RowMatrix& truth)
{
  check_shapes(est, truth);
  return (est - truth).squaredNorm() / static_cast<double>(est.size());
}

double mae(const RowMatrix& est, const RowMatrix& truth)
{
  check_shapes(est, truth);
  return (est - truth).cwiseAbs().sum() / static_cast<double>(est.size());
}

MetricReport metrics(const RowMatrix& est, const RowMatrix& truth)
{
  MetricReport report;
  report.mse = mse(est, truth);
  report.mae = mae(est, truth);
  report.per_time.resize(static_cast<std::size_t>(est.rows()));
  for (Eigen::Index i = 0; i < est.rows(); ++i)
    report.per_time[i] = (est.row(i) - truth.row(i)).squaredNorm() /
                         static_cast<double>(est.cols());
  return report;
}

double discretized_norm(std::span<const double> row, Norm norm)
{
  if (row.empty())
    return 0.0;
  double acc = 0.0;
  switch (norm) {
    case Norm::L1:
      for (double v : row)
        acc += std::abs(v);
      return acc / static_cast<double>(row.size());
    case Norm::L2:
      for (double v : row)
        acc += v * v;
      return std::sqrt(acc / static_cast<double>(row.size()));
    case Norm::Sup:
      for (double v : row)
        acc = std::max(acc, std::abs(v));
      return acc;
  }
  return acc;
}

std::vector<double> residual_norms(const RowMatrix& observed,
                                   const RowMatrix& smoothed,
                                   Norm norm)
{
  check_shapes(observed, smoothed);
  const RowMatrix residual = observed - smoothed;
  std::vector<double> z(static_cast<std::size_t>(residual.rows()));
  const auto cols = static_cast<std::size_t>(residual.cols());
  for (Eigen::Index i = 0; i < residual.rows(); ++i)
    z[i] = discretized_norm({ residual.row(i).data(), cols }, norm);
  return z;
}

std::vector<double> residual_norms(const FunctionalSeries& series,
                                   const Estimate& smoothed,
                                   Norm norm)
{
  return residual_norms(series.values(), smoothed.mu_hat, norm);
}

CusumResult cusum(std::span<const double> z)
{
  const std::size_t n = z.size();
  if (n < 2)
    throw InputTooShort("CUSUM needs at least two observations");
  double total = 0.0;
  for (double v : z)
    total += v;
  const double mean = total / static_cast<double>(n);

  // cumulative sums of centered values equal S_k - (k/n) S_n
  CusumResult result;
  result.process.resize(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  double partial = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    partial += z[k - 1] - mean;
    const double value = k == n ? 0.0 : scale * partial;
    result.process[k - 1] = value;
    if (std::abs(value) > result.max_value) {
      result.max_value = std::abs(value);
      result.argmax_index = k;
    }
  }
  return result;
}

std::vector<IndexRange> detect_peaks(std::span<const double> z,
                                     double threshold_multiplier)
{
  if (z.size() < 3)
    throw InputTooShort("peak detection needs at least three observations");
  const std::vector<double> values(z.begin(), z.end());
  const double center = median(values);
  std::vector<double> deviations(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    deviations[i] = std::abs(values[i] - center);
  const double spread = mad_consistency * median(std::move(deviations));
  const double threshold = center + threshold_multiplier * spread;

  std::vector<IndexRange> ranges;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (!(z[i] > threshold))
      continue;
    if (!ranges.empty() && ranges.back().second + 1 == i)
      ranges.back().second = i;
    else
      ranges.emplace_back(i, i);
  }
  return ranges;
}

FunctionalSeries sliding_embed(const RowMatrix& raw,
                               std::size_t stride,
                               std::size_t m)
{
  if (stride == 0 || m == 0)
    throw InvalidArgument("stride and window length must be positive");
  const auto total = static_cast<std::size_t>(raw.rows());
  const auto channels = static_cast<std::size_t>(raw.cols());
  if (channels == 0 || total < stride + m - 1 || total / stride < m)
    throw InputTooShort("signal of length " + std::to_string(total) +
                        " is too short for stride " + std::to_string(stride) +
                        " and window " + std::to_string(m));
  const std::size_t n = total / stride - (m - 1);

  RowMatrix values(static_cast<Eigen::Index>(n),
                   static_cast<Eigen::Index>(channels * m));
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t c = 0; c < channels; ++c)
      for (std::size_t j = 0; j < m; ++j)
        values(static_cast<Eigen::Index>(i - 1),
               static_cast<Eigen::Index>(c * m + j)) =
          raw(static_cast<Eigen::Index>(stride * i + j - 1),
              static_cast<Eigen::Index>(c));
  return FunctionalSeries::equidistant(std::move(values), { channels, m });
}

} // namespace fts
