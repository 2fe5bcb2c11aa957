#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fts/kernel.hpp"
#include "fts/series.hpp"
#include "fts/types.hpp"

namespace fts {

struct SmoothConfig
{
  double bandwidth{ 0.1 };
  Kernel kernel{ Kernel::quartic() };
};

//! Kernel-weighted design moments S_l and response moments R_l at one
//! evaluation point, scaled by 1/(n h).
struct WeightStats
{
  double s0{ 0.0 };
  double s1{ 0.0 };
  double s2{ 0.0 };
  double s3{ 0.0 };
  Eigen::VectorXd r0;
  Eigen::VectorXd r1;
  //! Number of observations with positive kernel weight.
  std::size_t support{ 0 };

  double denom() const { return s0 * s2 - s1 * s1; }
};

struct Estimate
{
  std::vector<double> times;
  double bandwidth{ 0.0 };
  RowMatrix mu_hat;
  std::optional<RowMatrix> dmu_hat;
  //! 1 where bandwidth <= t <= 1 - bandwidth.
  std::vector<std::uint8_t> interior_mask;
};

enum class EstimatorKind
{
  LocalLinear,
  Jackknife,
  NadarayaWatson
};

WeightStats weight_stats(const FunctionalSeries& series,
                         double t,
                         const SmoothConfig& cfg);

//! Local linear fit of mean and derivative at every evaluation point.
//! Evaluation points default to the series' own time stamps.
//!
//! Throws BandwidthTooSmall when n*h < 2 or a window holds fewer than two
//! weighted observations, SingularFit when S0*S2 - S1^2 <= 1e-12 * S0^2.
Estimate local_linear(const FunctionalSeries& series, const SmoothConfig& cfg);
Estimate local_linear(const FunctionalSeries& series,
                      const SmoothConfig& cfg,
                      std::span<const double> eval_times);

//! Local constant fit R0/S0; dmu_hat is left empty. Throws EmptyWindow.
Estimate nadaraya_watson(const FunctionalSeries& series,
                         const SmoothConfig& cfg);
Estimate nadaraya_watson(const FunctionalSeries& series,
                         const SmoothConfig& cfg,
                         std::span<const double> eval_times);

//! Fills dmu_hat by finite differences of mu_hat on a grid of step 1/n:
//! central inside, one-sided at both ends. Throws NonEquidistant.
Estimate nw_derivative(Estimate est, std::size_t n);

inline constexpr double jackknife_shrink = 0.70710678118654752440;
//! sqrt(2)/(sqrt(2)-1) and 1/(sqrt(2)-1).
inline constexpr double jackknife_dmu_small = 3.41421356237309504880;
inline constexpr double jackknife_dmu_large = 2.41421356237309504880;

//! 2 * mu(h/sqrt 2) - mu(h); dmu_hat is left empty.
Estimate jackknife_mean(const FunctionalSeries& series,
                        const SmoothConfig& cfg);
Estimate jackknife_mean(const FunctionalSeries& series,
                        const SmoothConfig& cfg,
                        std::span<const double> eval_times);

//! Bias-reduced mean and derivative from the same pair of local linear fits.
Estimate jackknife_derivative(const FunctionalSeries& series,
                              const SmoothConfig& cfg);
Estimate jackknife_derivative(const FunctionalSeries& series,
                              const SmoothConfig& cfg,
                              std::span<const double> eval_times);

//! Mean estimate of the given kind (used by cross-validation).
Estimate smooth_mean(EstimatorKind kind,
                     const FunctionalSeries& series,
                     const SmoothConfig& cfg,
                     std::span<const double> eval_times);

//! Mean and derivative estimate of the given kind on the series' own time
//! stamps; Nadaraya-Watson derivatives come from nw_derivative and so need
//! an equidistant series at i/n.
Estimate smooth_full(EstimatorKind kind,
                     const FunctionalSeries& series,
                     const SmoothConfig& cfg);

const char* to_string(EstimatorKind kind);
EstimatorKind parse_estimator(const std::string& name);

} // namespace fts
