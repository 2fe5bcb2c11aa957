#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fts/bandwidth.hpp"
#include "fts/estimators.hpp"
#include "fts/kernel.hpp"
#include "fts/series.hpp"
#include "fts/types.hpp"

namespace fts {

enum class MeanKind
{
  Mu1,
  Mu2,
  Custom
};

//! Time-varying mean curve mu(t)(x) on [0, 1]^2 with its analytic time
//! derivative.
class MeanOperator
{
public:
  using Surface = std::function<double(double t, double x)>;

  //! sin(2 pi x) + t^2
  static MeanOperator mu1();
  //! phi(x) + (t - 1/2)^2 + sin(10 pi t)/10 + 3/4,
  //! phi(x) = -8x^4 + 16x^3 - 11x^2 + 3x + 1
  static MeanOperator mu2();
  static MeanOperator custom(std::string name, Surface value, Surface time_derivative);

  MeanKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  double eval(double t, double x) const { return value_(t, x); }
  double d_eval(double t, double x) const { return derivative_(t, x); }

private:
  MeanOperator(MeanKind kind, std::string name, Surface value, Surface derivative);

  MeanKind kind_;
  std::string name_;
  Surface value_;
  Surface derivative_;
};

enum class ErrorKind
{
  BM,
  BB,
  FarBM,
  FarBB,
  TvBM,
  TvFAR1,
  TvFAR2,
  Zero  //!< no noise, for debugging and exactness checks
};

struct ErrorProcess
{
  ErrorKind kind{ ErrorKind::BM };
  //! Discarded warm-up steps of the autoregressive variants.
  int burn_in{ 50 };
};

struct SimSpec
{
  MeanOperator mean{ MeanOperator::mu1() };
  ErrorProcess errors{};
  std::size_t n{ 100 };
  std::size_t m{ 100 };
  std::size_t reps{ 1 };
  std::uint64_t master_seed{ 0 };

  void validate() const;
};

using Rng = std::mt19937_64;

//! Seed of an independent stream, a fixed function of its three inputs.
std::uint64_t derive_seed(std::uint64_t master,
                          std::uint64_t rep,
                          std::uint64_t stream);

//! Brownian motion on the grid j/(m-1), j = 0, ..., m-1.
Eigen::VectorXd sample_bm(std::size_t m, Rng& rng);
//! Brownian bridge W(t) - t W(1) on the same grid.
Eigen::VectorXd sample_bb(std::size_t m, Rng& rng);

//! Integral operator with kernel 0.3 sqrt(6) min(x, y), trapezoidal rule on
//! the grid j/(m-1).
Eigen::VectorXd apply_rho(std::span<const double> f);
inline Eigen::VectorXd apply_rho(const Eigen::VectorXd& f)
{
  return apply_rho(std::span<const double>(f.data(), static_cast<std::size_t>(f.size())));
}

//! n x m error matrix; row i-1 holds epsilon_i, i = 1, ..., n.
RowMatrix gen_errors(const ErrorProcess& process,
                     std::size_t n,
                     std::size_t m,
                     std::uint64_t seed);

struct SimulatedSeries
{
  FunctionalSeries series;
  RowMatrix truth_mu;
  RowMatrix truth_dmu;
};

//! One replication: X_i = mu(i/n) + epsilon_i on the m-point grid.
SimulatedSeries gen_series(const SimSpec& spec, std::size_t rep);

enum class Target
{
  Mean,
  Derivative
};

struct ResultRow
{
  EstimatorKind estimator;
  Target target;
  std::size_t n;
  std::size_t m;
  std::size_t reps;
  double mean_mse;
  double sd_mse;
  double mean_mae;
  double sd_mae;
  //! Mean wall-clock milliseconds of the final fit (mean and derivative).
  double mean_fit_ms;
  //! Mean cross-validated bandwidth.
  double mean_bandwidth;
  std::size_t failures;
};

struct ResultsTable
{
  std::vector<ResultRow> rows;
  std::vector<std::string> failure_messages;
};

//! Seeded Monte Carlo study. Every replication draws a series, selects a
//! bandwidth per estimator by cross-validation of the mean, fits mean and
//! derivative and scores both against the truth. Replications whose fit
//! throws are excluded from that estimator's aggregates and counted.
ResultsTable monte_carlo(const SimSpec& spec,
                         std::span<const EstimatorKind> estimators,
                         const CvConfig& cv,
                         const Kernel& kernel = Kernel::quartic());

const char* to_string(ErrorKind kind);
const char* to_string(Target target);
ErrorKind parse_error_kind(const std::string& name);
MeanOperator parse_mean(const std::string& name);

} // namespace fts
