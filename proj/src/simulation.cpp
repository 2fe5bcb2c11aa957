#include "fts/simulation.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <utility>

#include "fts/analysis.hpp"
#include "fts/errors.hpp"
#include "fts/parallel.hpp"

namespace fts {

namespace {

constexpr double pi = std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t z)
{
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double phi(double x)
{
  return (((-8.0 * x + 16.0) * x - 11.0) * x + 3.0) * x + 1.0;
}

//! Time-varying scale x + 1/2.
double sigma(double x)
{
  return x + 0.5;
}

double grid_point(std::size_t j, std::size_t m)
{
  return static_cast<double>(j) / static_cast<double>(m - 1);
}

} // namespace

MeanOperator::MeanOperator(MeanKind kind,
                           std::string name,
                           Surface value,
                           Surface derivative)
  : kind_(kind)
  , name_(std::move(name))
  , value_(std::move(value))
  , derivative_(std::move(derivative))
{}

MeanOperator MeanOperator::mu1()
{
  return { MeanKind::Mu1, "mu1",
           [](double t, double x) { return std::sin(2.0 * pi * x) + t * t; },
           [](double t, double) { return 2.0 * t; } };
}

MeanOperator MeanOperator::mu2()
{
  return { MeanKind::Mu2, "mu2",
           [](double t, double x) {
             const double c = t - 0.5;
             return phi(x) + c * c + 0.1 * std::sin(10.0 * pi * t) + 0.75;
           },
           [](double t, double) {
             return 2.0 * (t - 0.5) + pi * std::cos(10.0 * pi * t);
           } };
}

MeanOperator MeanOperator::custom(std::string name,
                                  Surface value,
                                  Surface time_derivative)
{
  if (!value || !time_derivative)
    throw InvalidArgument("custom mean operator needs both surfaces");
  return { MeanKind::Custom, std::move(name), std::move(value),
           std::move(time_derivative) };
}

void SimSpec::validate() const
{
  if (n < 10)
    throw InvalidArgument("simulation needs n >= 10");
  if (m < 2)
    throw InvalidArgument("simulation needs m >= 2");
  if (reps < 1)
    throw InvalidArgument("simulation needs reps >= 1");
  if (errors.burn_in < 0)
    throw InvalidArgument("burn-in must be non-negative");
}

std::uint64_t derive_seed(std::uint64_t master,
                          std::uint64_t rep,
                          std::uint64_t stream)
{
  return splitmix64(splitmix64(splitmix64(master) ^ rep) ^
                    splitmix64(stream + 0x5851f42d4c957f2dULL));
}

Eigen::VectorXd sample_bm(std::size_t m, Rng& rng)
{
  if (m < 2)
    throw InvalidArgument("Brownian motion needs m >= 2");
  std::normal_distribution<double> increment(
    0.0, std::sqrt(1.0 / static_cast<double>(m - 1)));
  Eigen::VectorXd path(static_cast<Eigen::Index>(m));
  path[0] = 0.0;
  for (Eigen::Index j = 1; j < path.size(); ++j)
    path[j] = path[j - 1] + increment(rng);
  return path;
}

Eigen::VectorXd sample_bb(std::size_t m, Rng& rng)
{
  Eigen::VectorXd path = sample_bm(m, rng);
  const double end = path[path.size() - 1];
  for (Eigen::Index j = 0; j < path.size(); ++j)
    path[j] -= grid_point(static_cast<std::size_t>(j), m) * end;
  path[path.size() - 1] = 0.0;
  return path;
}

Eigen::VectorXd apply_rho(std::span<const double> f)
{
  const std::size_t m = f.size();
  if (m < 2)
    throw InvalidArgument("integral operator needs m >= 2");
  const double coef = 0.3 * std::sqrt(6.0);
  const double step = 1.0 / static_cast<double>(m - 1);
  auto weight = [&](std::size_t k) {
    return (k == 0 || k == m - 1) ? 0.5 * step : step;
  };

  // min(x_k, y_j) splits the sum into x_k <= y_j (prefix) and x_k > y_j
  // (suffix) parts.
  std::vector<double> suffix(m + 1, 0.0);
  for (std::size_t k = m; k-- > 0;)
    suffix[k] = suffix[k + 1] + weight(k) * f[k];

  Eigen::VectorXd out(static_cast<Eigen::Index>(m));
  double prefix = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double y = grid_point(j, m);
    prefix += weight(j) * grid_point(j, m) * f[j];
    out[static_cast<Eigen::Index>(j)] = coef * (prefix + y * suffix[j + 1]);
  }
  return out;
}

RowMatrix gen_errors(const ErrorProcess& process,
                     std::size_t n,
                     std::size_t m,
                     std::uint64_t seed)
{
  if (n < 1 || m < 2)
    throw InvalidArgument("error process needs n >= 1 and m >= 2");
  if (process.burn_in < 0)
    throw InvalidArgument("burn-in must be non-negative");
  RowMatrix eps = RowMatrix::Zero(static_cast<Eigen::Index>(n),
                                  static_cast<Eigen::Index>(m));
  if (process.kind == ErrorKind::Zero)
    return eps;

  Rng rng(seed);
  const bool bridge =
    process.kind == ErrorKind::BB || process.kind == ErrorKind::FarBB;
  auto innovation = [&] { return bridge ? sample_bb(m, rng) : sample_bm(m, rng); };
  auto time = [&](std::size_t i) {
    return static_cast<double>(i) / static_cast<double>(n);
  };

  switch (process.kind) {
    case ErrorKind::BM:
    case ErrorKind::BB:
      for (std::size_t i = 1; i <= n; ++i)
        eps.row(static_cast<Eigen::Index>(i - 1)) = innovation().transpose();
      return eps;
    case ErrorKind::TvBM:
      for (std::size_t i = 1; i <= n; ++i)
        eps.row(static_cast<Eigen::Index>(i - 1)) =
          sigma(time(i)) * innovation().transpose();
      return eps;
    default:
      break;
  }

  // Autoregressive variants. Index i <= 0 is warm-up, where the
  // time-varying scale is frozen at sigma(1/n).
  auto step = [&](const Eigen::VectorXd& previous, std::size_t i) {
    const double s = sigma(time(std::max<std::size_t>(i, 1)));
    switch (process.kind) {
      case ErrorKind::FarBM:
      case ErrorKind::FarBB:
        return Eigen::VectorXd(apply_rho(previous) + innovation());
      case ErrorKind::TvFAR1:
        return Eigen::VectorXd(apply_rho(previous) + s * innovation());
      case ErrorKind::TvFAR2:
        return Eigen::VectorXd(s * apply_rho(previous) + innovation());
      default:
        throw InvalidArgument("not an autoregressive error process");
    }
  };

  const double initial_scale =
    process.kind == ErrorKind::TvFAR1 ? sigma(time(1)) : 1.0;
  Eigen::VectorXd current = initial_scale * innovation();
  for (int b = 0; b < process.burn_in; ++b)
    current = step(current, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    current = step(current, i);
    eps.row(static_cast<Eigen::Index>(i - 1)) = current.transpose();
  }
  return eps;
}

SimulatedSeries gen_series(const SimSpec& spec, std::size_t rep)
{
  spec.validate();
  if (rep >= spec.reps)
    throw InvalidArgument("replication index out of range");
  const auto n = static_cast<Eigen::Index>(spec.n);
  const auto m = static_cast<Eigen::Index>(spec.m);
  RowMatrix values = gen_errors(spec.errors, spec.n, spec.m,
                                derive_seed(spec.master_seed, rep, 0));
  RowMatrix mu(n, m);
  RowMatrix dmu(n, m);
  const auto times = equidistant_times(spec.n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const double x = grid_point(static_cast<std::size_t>(j), spec.m);
      mu(i, j) = spec.mean.eval(times[i], x);
      dmu(i, j) = spec.mean.d_eval(times[i], x);
    }
  }
  values += mu;
  return { FunctionalSeries(times, std::move(values), { 1, spec.m }),
           std::move(mu), std::move(dmu) };
}

namespace {

struct FitOutcome
{
  bool ok{ false };
  double mse_mu{ 0.0 };
  double mae_mu{ 0.0 };
  double mse_dmu{ 0.0 };
  double mae_dmu{ 0.0 };
  double fit_ms{ 0.0 };
  double bandwidth{ 0.0 };
  std::string message;
};

struct Moments
{
  double mean;
  double sd;
};

Moments summarize(const std::vector<double>& values)
{
  if (values.empty())
    return { std::numeric_limits<double>::quiet_NaN(),
             std::numeric_limits<double>::quiet_NaN() };
  double sum = 0.0;
  for (double v : values)
    sum += v;
  const double mean = sum / static_cast<double>(values.size());
  if (values.size() < 2)
    return { mean, 0.0 };
  double sq = 0.0;
  for (double v : values)
    sq += (v - mean) * (v - mean);
  return { mean, std::sqrt(sq / static_cast<double>(values.size() - 1)) };
}

} // namespace

ResultsTable monte_carlo(const SimSpec& spec,
                         std::span<const EstimatorKind> estimators,
                         const CvConfig& cv,
                         const Kernel& kernel)
{
  spec.validate();
  if (estimators.empty())
    throw InvalidArgument("no estimators selected");
  const std::size_t count = estimators.size();
  std::vector<FitOutcome> outcomes(spec.reps * count);

  parallel_for(spec.reps, [&](std::size_t rep) {
    const SimulatedSeries sim = gen_series(spec, rep);
    for (std::size_t e = 0; e < count; ++e) {
      FitOutcome& out = outcomes[rep * count + e];
      try {
        CvConfig local = cv;
        local.estimator = estimators[e];
        const double h = cross_validate(sim.series, local, kernel).best_h;
        const auto start = std::chrono::steady_clock::now();
        const Estimate est =
          smooth_full(estimators[e], sim.series, { h, kernel });
        const auto stop = std::chrono::steady_clock::now();
        out.fit_ms =
          std::chrono::duration<double, std::milli>(stop - start).count();
        out.bandwidth = h;
        out.mse_mu = mse(est.mu_hat, sim.truth_mu);
        out.mae_mu = mae(est.mu_hat, sim.truth_mu);
        out.mse_dmu = mse(*est.dmu_hat, sim.truth_dmu);
        out.mae_dmu = mae(*est.dmu_hat, sim.truth_dmu);
        out.ok = true;
      } catch (const Error& err) {
        out.message = "replication " + std::to_string(rep) + ", " +
                      to_string(estimators[e]) + ": " + err.what();
      }
    }
  }, 1);

  ResultsTable table;
  for (std::size_t e = 0; e < count; ++e) {
    std::vector<double> mse_mu, mae_mu, mse_dmu, mae_dmu, ms, hs;
    std::size_t failures = 0;
    for (std::size_t rep = 0; rep < spec.reps; ++rep) {
      const FitOutcome& out = outcomes[rep * count + e];
      if (!out.ok) {
        ++failures;
        table.failure_messages.push_back(out.message);
        continue;
      }
      mse_mu.push_back(out.mse_mu);
      mae_mu.push_back(out.mae_mu);
      mse_dmu.push_back(out.mse_dmu);
      mae_dmu.push_back(out.mae_dmu);
      ms.push_back(out.fit_ms);
      hs.push_back(out.bandwidth);
    }
    const double mean_ms = summarize(ms).mean;
    const double mean_h = summarize(hs).mean;
    auto row = [&](Target target,
                   const std::vector<double>& sq,
                   const std::vector<double>& abs) {
      const Moments a = summarize(sq);
      const Moments b = summarize(abs);
      return ResultRow{ estimators[e], target, spec.n, spec.m,
                        spec.reps, a.mean, a.sd, b.mean, b.sd,
                        mean_ms, mean_h, failures };
    };
    table.rows.push_back(row(Target::Mean, mse_mu, mae_mu));
    table.rows.push_back(row(Target::Derivative, mse_dmu, mae_dmu));
  }
  return table;
}

const char* to_string(ErrorKind kind)
{
  switch (kind) {
    case ErrorKind::BM: return "bm";
    case ErrorKind::BB: return "bb";
    case ErrorKind::FarBM: return "far-bm";
    case ErrorKind::FarBB: return "far-bb";
    case ErrorKind::TvBM: return "tvbm";
    case ErrorKind::TvFAR1: return "tvfar1";
    case ErrorKind::TvFAR2: return "tvfar2";
    case ErrorKind::Zero: return "zero";
  }
  return "?";
}

const char* to_string(Target target)
{
  return target == Target::Mean ? "mu" : "dmu";
}

ErrorKind parse_error_kind(const std::string& name)
{
  for (ErrorKind kind : { ErrorKind::BM, ErrorKind::BB, ErrorKind::FarBM,
                          ErrorKind::FarBB, ErrorKind::TvBM, ErrorKind::TvFAR1,
                          ErrorKind::TvFAR2, ErrorKind::Zero })
    if (name == to_string(kind))
      return kind;
  throw InvalidArgument("unknown error process '" + name + "'");
}

MeanOperator parse_mean(const std::string& name)
{
  if (name == "mu1")
    return MeanOperator::mu1();
  if (name == "mu2")
    return MeanOperator::mu2();
  throw InvalidArgument("unknown mean operator '" + name +
                        "' (expected mu1 or mu2)");
}

} // namespace fts
