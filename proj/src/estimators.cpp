#include "fts/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "fts/errors.hpp"
#include "fts/parallel.hpp"

namespace fts {

namespace {

// Evaluation points per fit below which the loop stays on one thread.
constexpr std::size_t parallel_grain = 512;

struct DesignSums
{
  double s0{ 0.0 };
  double s1{ 0.0 };
  double s2{ 0.0 };
  double s3{ 0.0 };
  std::size_t support{ 0 };
};

//! Unscaled kernel sums over the window |t_i - t| <= h. Response sums are
//! written to r0 (and r1 when WithSlope).
template<bool WithSlope>
DesignSums accumulate(const FunctionalSeries& series,
                      double t,
                      double h,
                      const Kernel& kernel,
                      double* r0,
                      double* r1)
{
  const auto& times = series.times();
  const auto& values = series.values();
  const auto cols = static_cast<std::size_t>(values.cols());
  std::fill(r0, r0 + cols, 0.0);
  if constexpr (WithSlope)
    std::fill(r1, r1 + cols, 0.0);

  DesignSums sums;
  auto first = std::lower_bound(times.begin(), times.end(), t - h);
  for (auto i = static_cast<std::size_t>(first - times.begin());
       i < times.size() && times[i] <= t + h;
       ++i) {
    const double u = (times[i] - t) / h;
    const double w = kernel.eval(u);
    if (w <= 0.0)
      continue;
    ++sums.support;
    const double wu = w * u;
    sums.s0 += w;
    sums.s1 += wu;
    sums.s2 += wu * u;
    sums.s3 += wu * u * u;
    const double* x = values.data() + i * cols;
    for (std::size_t j = 0; j < cols; ++j)
      r0[j] += w * x[j];
    if constexpr (WithSlope)
      for (std::size_t j = 0; j < cols; ++j)
        r1[j] += wu * x[j];
  }
  return sums;
}

void check_bandwidth(const FunctionalSeries& series, double h)
{
  if (!(h > 0.0 && h <= 1.0) || !std::isfinite(h))
    throw InvalidArgument("bandwidth must lie in (0, 1]");
  if (static_cast<double>(series.size()) * h < 2.0)
    throw BandwidthTooSmall("n * h = " +
                            std::to_string(series.size() * h) +
                            " is below 2 for bandwidth " + std::to_string(h));
}

std::vector<std::uint8_t> interior_mask(std::span<const double> times, double h)
{
  std::vector<std::uint8_t> mask(times.size());
  for (std::size_t i = 0; i < times.size(); ++i)
    mask[i] = (times[i] >= h && times[i] <= 1.0 - h) ? 1 : 0;
  return mask;
}

Estimate make_estimate(std::span<const double> eval_times,
                       double h,
                       Eigen::Index cols,
                       bool with_derivative)
{
  Estimate est;
  est.times.assign(eval_times.begin(), eval_times.end());
  est.bandwidth = h;
  const auto rows = static_cast<Eigen::Index>(eval_times.size());
  est.mu_hat = RowMatrix(rows, cols);
  if (with_derivative)
    est.dmu_hat = RowMatrix(rows, cols);
  est.interior_mask = interior_mask(eval_times, h);
  return est;
}

void check_eval_times(std::span<const double> eval_times)
{
  for (double t : eval_times)
    if (!(t >= 0.0 && t <= 1.0))
      throw InvalidArgument("evaluation points must lie in [0, 1]");
}

std::span<const double> own_times(const FunctionalSeries& series)
{
  return { series.times().data(), series.times().size() };
}

} // namespace

WeightStats weight_stats(const FunctionalSeries& series,
                         double t,
                         const SmoothConfig& cfg)
{
  if (!(t >= 0.0 && t <= 1.0))
    throw InvalidArgument("evaluation point must lie in [0, 1]");
  if (!(cfg.bandwidth > 0.0))
    throw InvalidArgument("bandwidth must be positive");
  WeightStats stats;
  stats.r0 = Eigen::VectorXd::Zero(series.values().cols());
  stats.r1 = Eigen::VectorXd::Zero(series.values().cols());
  const DesignSums sums = accumulate<true>(
    series, t, cfg.bandwidth, cfg.kernel, stats.r0.data(), stats.r1.data());
  const double scale =
    1.0 / (static_cast<double>(series.size()) * cfg.bandwidth);
  stats.s0 = sums.s0 * scale;
  stats.s1 = sums.s1 * scale;
  stats.s2 = sums.s2 * scale;
  stats.s3 = sums.s3 * scale;
  stats.r0 *= scale;
  stats.r1 *= scale;
  stats.support = sums.support;
  return stats;
}

Estimate local_linear(const FunctionalSeries& series, const SmoothConfig& cfg)
{
  return local_linear(series, cfg, own_times(series));
}

Estimate local_linear(const FunctionalSeries& series,
                      const SmoothConfig& cfg,
                      std::span<const double> eval_times)
{
  const double h = cfg.bandwidth;
  check_bandwidth(series, h);
  check_eval_times(eval_times);
  const auto cols = series.values().cols();
  Estimate est = make_estimate(eval_times, h, cols, true);
  RowMatrix& mu = est.mu_hat;
  RowMatrix& dmu = *est.dmu_hat;

  parallel_for(
    eval_times.size(),
    [&](std::size_t k) {
      const double t = eval_times[k];
      const auto row = static_cast<Eigen::Index>(k);
      double* r0 = mu.row(row).data();
      double* r1 = dmu.row(row).data();
      const DesignSums s = accumulate<true>(series, t, h, cfg.kernel, r0, r1);
      if (s.support < 2)
        throw BandwidthTooSmall("fewer than two observations in the window "
                                "at t=" + std::to_string(t) +
                                " for bandwidth " + std::to_string(h));
      const double denom = s.s0 * s.s2 - s.s1 * s.s1;
      if (!(denom > 1e-12 * s.s0 * s.s0))
        throw SingularFit(t, h);
      for (Eigen::Index j = 0; j < cols; ++j) {
        const double a = r0[j];
        const double b = r1[j];
        r0[j] = (s.s2 * a - s.s1 * b) / denom;
        r1[j] = (s.s0 * b - s.s1 * a) / (h * denom);
      }
    },
    parallel_grain);
  return est;
}

Estimate nadaraya_watson(const FunctionalSeries& series,
                         const SmoothConfig& cfg)
{
  return nadaraya_watson(series, cfg, own_times(series));
}

Estimate nadaraya_watson(const FunctionalSeries& series,
                         const SmoothConfig& cfg,
                         std::span<const double> eval_times)
{
  const double h = cfg.bandwidth;
  if (!(h > 0.0 && h <= 1.0))
    throw InvalidArgument("bandwidth must lie in (0, 1]");
  check_eval_times(eval_times);
  const auto cols = series.values().cols();
  Estimate est = make_estimate(eval_times, h, cols, false);
  RowMatrix& mu = est.mu_hat;

  parallel_for(
    eval_times.size(),
    [&](std::size_t k) {
      const double t = eval_times[k];
      double* r0 = mu.row(static_cast<Eigen::Index>(k)).data();
      const DesignSums s =
        accumulate<false>(series, t, h, cfg.kernel, r0, nullptr);
      if (!(s.s0 > 0.0))
        throw EmptyWindow(t, h);
      for (Eigen::Index j = 0; j < cols; ++j)
        r0[j] /= s.s0;
    },
    parallel_grain);
  return est;
}

Estimate nw_derivative(Estimate est, std::size_t n)
{
  const std::size_t rows = est.times.size();
  if (n == 0 || rows < 2)
    throw InvalidArgument("finite differences need n > 0 and two points");
  const double step = 1.0 / static_cast<double>(n);
  for (std::size_t i = 1; i < rows; ++i) {
    const double gap = est.times[i] - est.times[i - 1];
    if (std::abs(gap - step) > 1e-9 * step)
      throw NonEquidistant("evaluation points are not spaced by 1/" +
                           std::to_string(n));
  }

  const RowMatrix& mu = est.mu_hat;
  const auto last = static_cast<Eigen::Index>(rows) - 1;
  const double scale = static_cast<double>(n);
  RowMatrix dmu(mu.rows(), mu.cols());
  dmu.row(0) = scale * (mu.row(1) - mu.row(0));
  for (Eigen::Index i = 1; i < last; ++i)
    dmu.row(i) = 0.5 * scale * (mu.row(i + 1) - mu.row(i - 1));
  dmu.row(last) = scale * (mu.row(last) - mu.row(last - 1));
  est.dmu_hat = std::move(dmu);
  return est;
}

Estimate jackknife_mean(const FunctionalSeries& series, const SmoothConfig& cfg)
{
  return jackknife_mean(series, cfg, own_times(series));
}

Estimate jackknife_mean(const FunctionalSeries& series,
                        const SmoothConfig& cfg,
                        std::span<const double> eval_times)
{
  Estimate est = jackknife_derivative(series, cfg, eval_times);
  est.dmu_hat.reset();
  return est;
}

Estimate jackknife_derivative(const FunctionalSeries& series,
                              const SmoothConfig& cfg)
{
  return jackknife_derivative(series, cfg, own_times(series));
}

Estimate jackknife_derivative(const FunctionalSeries& series,
                              const SmoothConfig& cfg,
                              std::span<const double> eval_times)
{
  SmoothConfig narrow = cfg;
  narrow.bandwidth = cfg.bandwidth * jackknife_shrink;
  const Estimate small = local_linear(series, narrow, eval_times);
  Estimate est = local_linear(series, cfg, eval_times);
  est.mu_hat = 2.0 * small.mu_hat - est.mu_hat;
  *est.dmu_hat =
    jackknife_dmu_small * *small.dmu_hat - jackknife_dmu_large * *est.dmu_hat;
  return est;
}

Estimate smooth_mean(EstimatorKind kind,
                     const FunctionalSeries& series,
                     const SmoothConfig& cfg,
                     std::span<const double> eval_times)
{
  switch (kind) {
    case EstimatorKind::LocalLinear:
      return local_linear(series, cfg, eval_times);
    case EstimatorKind::Jackknife:
      return jackknife_mean(series, cfg, eval_times);
    case EstimatorKind::NadarayaWatson:
      return nadaraya_watson(series, cfg, eval_times);
  }
  throw InvalidArgument("unknown estimator");
}

Estimate smooth_full(EstimatorKind kind,
                     const FunctionalSeries& series,
                     const SmoothConfig& cfg)
{
  switch (kind) {
    case EstimatorKind::LocalLinear:
      return local_linear(series, cfg);
    case EstimatorKind::Jackknife:
      return jackknife_derivative(series, cfg);
    case EstimatorKind::NadarayaWatson:
      return nw_derivative(nadaraya_watson(series, cfg), series.size());
  }
  throw InvalidArgument("unknown estimator");
}

const char* to_string(EstimatorKind kind)
{
  switch (kind) {
    case EstimatorKind::LocalLinear:
      return "LL";
    case EstimatorKind::Jackknife:
      return "JK";
    case EstimatorKind::NadarayaWatson:
      return "NW";
  }
  return "?";
}

EstimatorKind parse_estimator(const std::string& name)
{
  if (name == "ll" || name == "LL" || name == "local-linear")
    return EstimatorKind::LocalLinear;
  if (name == "jk" || name == "JK" || name == "jackknife")
    return EstimatorKind::Jackknife;
  if (name == "nw" || name == "NW" || name == "nadaraya-watson")
    return EstimatorKind::NadarayaWatson;
  throw InvalidArgument("unknown estimator '" + name +
                        "' (expected ll, jackknife or nw)");
}

} // namespace fts
