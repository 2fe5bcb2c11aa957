#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "fts/errors.hpp"
#include "fts/estimators.hpp"
#include "fts/parallel.hpp"
#include "fts/series.hpp"
#include "oracles.hpp"

using namespace fts;

namespace {

FunctionalSeries affine_series(const std::vector<double>& times,
                               const Eigen::RowVectorXd& a,
                               const Eigen::RowVectorXd& b)
{
  RowMatrix values(static_cast<Eigen::Index>(times.size()), a.size());
  for (std::size_t i = 0; i < times.size(); ++i)
    values.row(static_cast<Eigen::Index>(i)) = a + b * times[i];
  return { times, values };
}

FunctionalSeries scalar_series(std::size_t n, double (*f)(double))
{
  RowMatrix values(static_cast<Eigen::Index>(n), 1);
  const auto times = equidistant_times(n);
  for (std::size_t i = 0; i < n; ++i)
    values(static_cast<Eigen::Index>(i), 0) = f(times[i]);
  return { times, values };
}

std::vector<double> sorted_random_times(std::size_t n, std::mt19937_64& rng)
{
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> times;
  while (times.size() < n) {
    times.push_back(unif(rng));
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
  }
  return times;
}

double square(double t) { return t * t; }
double cube(double t) { return t * t * t; }
double wave(double t) { return std::sin(2.0 * 3.141592653589793 * t); }

std::size_t index_of(const std::vector<double>& times, double t)
{
  const auto it = std::min_element(times.begin(), times.end(), [&](double a, double b) {
    return std::abs(a - t) < std::abs(b - t);
  });
  return static_cast<std::size_t>(it - times.begin());
}

} // namespace

TEST_CASE("weight_stats on a symmetric window")
{
  const RowMatrix values = RowMatrix::Constant(5, 2, 3.0);
  const auto series = FunctionalSeries::equidistant(values);
  const WeightStats s = weight_stats(series, 0.5, { 0.5, Kernel::quartic() });
  CHECK(std::abs(s.s1) < 1e-15);
  CHECK(s.s0 > 0.0);
  CHECK(s.denom() > 0.0);
  // constant data: R0 = c * S0 coordinate-wise
  CHECK(s.r0[0] == doctest::Approx(3.0 * s.s0).epsilon(1e-14));
  CHECK(s.r0[1] == doctest::Approx(3.0 * s.s0).epsilon(1e-14));

  // brute-force sum over all five points
  double s0 = 0.0, s2 = 0.0;
  for (int i = 1; i <= 5; ++i) {
    const double u = (i / 5.0 - 0.5) / 0.5;
    s0 += oracle::quartic(u);
    s2 += u * u * oracle::quartic(u);
  }
  CHECK(s.s0 == doctest::Approx(s0 / 2.5).epsilon(1e-14));
  CHECK(s.s2 == doctest::Approx(s2 / 2.5).epsilon(1e-14));
}

TEST_CASE("weight_stats converge to kernel moments")
{
  const auto series = scalar_series(10000, square);
  const WeightStats s = weight_stats(series, 0.5, { 0.1, Kernel::quartic() });
  CHECK(std::abs(s.s0 - 1.0) < 1e-3);
  CHECK(std::abs(s.s2 - 1.0 / 7.0) < 1e-3);
  CHECK(std::abs(s.s1) < 1e-3);
  CHECK(std::abs(s.s3) < 1e-3);
}

TEST_CASE("empty window gives zero statistics")
{
  const auto series = FunctionalSeries({ 0.0, 0.1, 0.9, 1.0 }, RowMatrix::Ones(4, 1));
  const WeightStats s = weight_stats(series, 0.5, { 0.2, Kernel::quartic() });
  CHECK(s.s0 == 0.0);
  CHECK(s.support == 0);
  CHECK(s.r0.isZero());
}

TEST_CASE("local linear reproduces affine data everywhere")
{
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t dim = 1 + trial % 4;
    Eigen::RowVectorXd a(dim), b(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      a[j] = 3.0 * normal(rng);
      b[j] = 3.0 * normal(rng);
    }
    const bool equidistant = trial % 2 == 0;
    const auto times =
      equidistant ? equidistant_times(40 + trial) : sorted_random_times(60, rng);
    const double h = 0.15 + 0.02 * trial;
    const auto series = affine_series(times, a, b);
    const Estimate est = local_linear(series, { h, Kernel::quartic() });
    for (std::size_t i = 0; i < times.size(); ++i) {
      const auto row = static_cast<Eigen::Index>(i);
      const Eigen::RowVectorXd truth = a + b * times[i];
      CHECK((est.mu_hat.row(row) - truth).cwiseAbs().maxCoeff() < 1e-10);
      CHECK((est.dmu_hat->row(row) - b).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("local linear matches a weighted least squares oracle")
{
  std::mt19937_64 rng(17);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 50;
    const auto times = trial % 2 ? equidistant_times(n) : sorted_random_times(n, rng);
    RowMatrix values(static_cast<Eigen::Index>(n), 3);
    for (Eigen::Index i = 0; i < values.size(); ++i)
      values.data()[i] = normal(rng);
    const FunctionalSeries series(times, values);
    const double h = 0.2 + 0.01 * trial;
    const Estimate est = local_linear(series, { h, Kernel::quartic() });
    double worst = 0.0;
    for (Eigen::Index j = 0; j < 3; ++j) {
      const auto x = oracle::column(values, j);
      for (std::size_t i = 0; i < n; ++i) {
        const auto fit = oracle::wls(times, x, times[i], h, Kernel::quartic());
        const auto row = static_cast<Eigen::Index>(i);
        worst = std::max(worst, std::abs(est.mu_hat(row, j) - fit.intercept));
        worst = std::max(worst, std::abs((*est.dmu_hat)(row, j) - fit.slope));
      }
    }
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("local linear bias on a quadratic matches h^2 kappa2")
{
  const auto series = scalar_series(500, square);
  const double h = 0.1;
  const Estimate est = local_linear(series, { h, Kernel::quartic() });
  const std::size_t mid = index_of(series.times(), 0.5);
  const double error = est.mu_hat(static_cast<Eigen::Index>(mid), 0) - 0.25;
  CHECK(error == doctest::Approx(h * h / 7.0).epsilon(0.1));
}

TEST_CASE("local linear errors")
{
  const auto series = scalar_series(20, square);
  SUBCASE("n h below two")
  {
    CHECK_THROWS_AS(local_linear(series, { 0.09, Kernel::quartic() }),
                    BandwidthTooSmall);
  }
  SUBCASE("window with one observation")
  {
    const FunctionalSeries gappy({ 0.0, 0.05, 0.1, 0.15, 0.8, 0.85, 0.9, 0.95 },
                                 RowMatrix::Ones(8, 1));
    const std::vector<double> at{ 0.5 };
    CHECK_THROWS_AS(local_linear(gappy, { 0.3, Kernel::quartic() }, at),
                    BandwidthTooSmall);
  }
  SUBCASE("bandwidth outside (0, 1]")
  {
    CHECK_THROWS_AS(local_linear(series, { 0.0, Kernel::quartic() }),
                    InvalidArgument);
    CHECK_THROWS_AS(local_linear(series, { 1.5, Kernel::quartic() }),
                    InvalidArgument);
  }
}

TEST_CASE("interior mask marks [h, 1-h]")
{
  const auto series = scalar_series(100, square);
  const Estimate est = local_linear(series, { 0.1, Kernel::quartic() });
  for (std::size_t i = 0; i < est.times.size(); ++i) {
    const double t = est.times[i];
    CHECK(static_cast<bool>(est.interior_mask[i]) == (t >= 0.1 && t <= 0.9));
  }
}

TEST_CASE("explicit evaluation grid")
{
  const auto series = scalar_series(200, square);
  const std::vector<double> grid{ 0.0, 0.123, 0.5, 0.777, 1.0 };
  const Estimate est = local_linear(series, { 0.2, Kernel::quartic() }, grid);
  REQUIRE(est.mu_hat.rows() == 5);
  const auto x = oracle::column(series.values(), 0);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto fit = oracle::wls(series.times(), x, grid[k], 0.2, Kernel::quartic());
    CHECK(est.mu_hat(static_cast<Eigen::Index>(k), 0) ==
          doctest::Approx(fit.intercept).epsilon(1e-12));
  }
  CHECK_THROWS_AS(local_linear(series, { 0.2, Kernel::quartic() },
                               std::vector<double>{ 1.5 }),
                  InvalidArgument);
}

TEST_CASE("nadaraya-watson")
{
  SUBCASE("constant series")
  {
    const auto series = FunctionalSeries::equidistant(RowMatrix::Constant(30, 4, -2.5));
    const Estimate est = nadaraya_watson(series, { 0.1, Kernel::quartic() });
    CHECK((est.mu_hat.array() + 2.5).abs().maxCoeff() < 1e-14);
    CHECK_FALSE(est.dmu_hat.has_value());
  }
  SUBCASE("three point example")
  {
    RowMatrix values(3, 1);
    values << 0.0, 1.0, 2.0;
    const FunctionalSeries series({ 0.0, 0.5, 1.0 }, values);
    const Estimate est = nadaraya_watson(series, { 0.6, Kernel::quartic() },
                                         std::vector<double>{ 0.5 });
    const double k_side = oracle::quartic(5.0 / 6.0);
    const double k_mid = oracle::quartic(0.0);
    const double expected = (k_side * 0.0 + k_mid * 1.0 + k_side * 2.0) /
                            (2.0 * k_side + k_mid);
    CHECK(expected == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(est.mu_hat(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("direct formula oracle on random data")
  {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> normal;
    const auto times = sorted_random_times(80, rng);
    RowMatrix values(80, 2);
    for (Eigen::Index i = 0; i < values.size(); ++i)
      values.data()[i] = normal(rng);
    const FunctionalSeries series(times, values);
    const Estimate est = nadaraya_watson(series, { 0.17, Kernel::quartic() });
    for (Eigen::Index j = 0; j < 2; ++j) {
      const auto x = oracle::column(values, j);
      for (std::size_t i = 0; i < times.size(); ++i)
        CHECK(std::abs(est.mu_hat(static_cast<Eigen::Index>(i), j) -
                       oracle::nw(times, x, times[i], 0.17, Kernel::quartic())) <
              1e-12);
    }
  }
  SUBCASE("empty window")
  {
    const FunctionalSeries series({ 0.0, 0.1, 0.9, 1.0 }, RowMatrix::Ones(4, 1));
    CHECK_THROWS_AS(nadaraya_watson(series, { 0.2, Kernel::quartic() },
                                    std::vector<double>{ 0.5 }),
                    EmptyWindow);
  }
}

TEST_CASE("finite-difference derivative")
{
  const std::size_t n = 100;
  Estimate est;
  est.times.resize(n + 1);
  est.mu_hat = RowMatrix(static_cast<Eigen::Index>(n + 1), 2);
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    est.times[i] = t;
    est.mu_hat(static_cast<Eigen::Index>(i), 0) = 1.5 - 0.75 * t;
    est.mu_hat(static_cast<Eigen::Index>(i), 1) = t * t;
  }
  est.interior_mask.assign(n + 1, 1);
  const Estimate d = nw_derivative(est, n);
  REQUIRE(d.dmu_hat.has_value());
  for (std::size_t i = 0; i <= n; ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    CHECK((*d.dmu_hat)(row, 0) == doctest::Approx(-0.75).epsilon(1e-10));
    if (i > 0 && i < n)
      CHECK((*d.dmu_hat)(row, 1) ==
            doctest::Approx(2.0 * static_cast<double>(i) / n).epsilon(1e-10));
  }
  CHECK((*d.dmu_hat)(0, 1) == doctest::Approx(1.0 / n).epsilon(1e-10));
  CHECK((*d.dmu_hat)(static_cast<Eigen::Index>(n), 1) ==
        doctest::Approx(2.0 - 1.0 / n).epsilon(1e-10));

  est.times[50] += 1e-4;
  CHECK_THROWS_AS(nw_derivative(est, n), NonEquidistant);
}

TEST_CASE("jackknife mean")
{
  SUBCASE("affine data")
  {
    Eigen::RowVectorXd a(2), b(2);
    a << 0.3, -1.0;
    b << 2.0, 0.5;
    const auto series = affine_series(equidistant_times(120), a, b);
    const Estimate est = jackknife_mean(series, { 0.2, Kernel::quartic() });
    CHECK_FALSE(est.dmu_hat.has_value());
    for (std::size_t i = 0; i < 120; ++i)
      CHECK((est.mu_hat.row(static_cast<Eigen::Index>(i)) -
             (a + b * series.times()[i]))
              .cwiseAbs()
              .maxCoeff() < 1e-10);
  }
  SUBCASE("constant data")
  {
    const auto series = FunctionalSeries::equidistant(RowMatrix::Constant(50, 3, 4.0));
    const Estimate est = jackknife_mean(series, { 0.2, Kernel::quartic() });
    CHECK((est.mu_hat.array() - 4.0).abs().maxCoeff() < 1e-12);
  }
  SUBCASE("second order bias cancels on a quadratic")
  {
    const auto series = scalar_series(500, square);
    const SmoothConfig cfg{ 0.1, Kernel::quartic() };
    const Estimate jk = jackknife_mean(series, cfg);
    const Estimate ll = local_linear(series, cfg);
    for (std::size_t i = 0; i < series.size(); ++i) {
      if (!jk.interior_mask[i])
        continue;
      const auto row = static_cast<Eigen::Index>(i);
      const double truth = square(series.times()[i]);
      CHECK(std::abs(jk.mu_hat(row, 0) - truth) * 10.0 <
            std::abs(ll.mu_hat(row, 0) - truth));
    }
  }
  SUBCASE("narrow fit failure names its bandwidth")
  {
    const auto series = scalar_series(20, square);
    try {
      jackknife_mean(series, { 0.12, Kernel::quartic() });
      FAIL("expected BandwidthTooSmall");
    } catch (const BandwidthTooSmall& err) {
      CHECK(std::string(err.what()).find("0.0848") != std::string::npos);
    }
  }
}

TEST_CASE("jackknife derivative")
{
  SUBCASE("coefficients")
  {
    CHECK(jackknife_dmu_small ==
          doctest::Approx(std::sqrt(2.0) / (std::sqrt(2.0) - 1.0)).epsilon(1e-15));
    CHECK(jackknife_dmu_large ==
          doctest::Approx(1.0 / (std::sqrt(2.0) - 1.0)).epsilon(1e-15));
    CHECK(jackknife_dmu_small - jackknife_dmu_large ==
          doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("definitional combination")
  {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> normal;
    RowMatrix values(90, 2);
    for (Eigen::Index i = 0; i < values.size(); ++i)
      values.data()[i] = normal(rng);
    const auto series = FunctionalSeries::equidistant(values);
    const double h = 0.25;
    const Estimate jk = jackknife_derivative(series, { h, Kernel::quartic() });
    const Estimate narrow =
      local_linear(series, { h / std::sqrt(2.0), Kernel::quartic() });
    const Estimate wide = local_linear(series, { h, Kernel::quartic() });
    const RowMatrix expected = 3.414213562373095 * *narrow.dmu_hat -
                               2.414213562373095 * *wide.dmu_hat;
    CHECK((*jk.dmu_hat - expected).cwiseAbs().maxCoeff() < 1e-12);
    const RowMatrix mean = 2.0 * narrow.mu_hat - wide.mu_hat;
    CHECK((jk.mu_hat - mean).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("affine slope")
  {
    Eigen::RowVectorXd a(1), b(1);
    a << 1.0;
    b << -3.25;
    const auto series = affine_series(equidistant_times(60), a, b);
    const Estimate jk = jackknife_derivative(series, { 0.3, Kernel::quartic() });
    CHECK((jk.dmu_hat->array() + 3.25).abs().maxCoeff() < 1e-10);
  }
  SUBCASE("cubic derivative bias shrinks")
  {
    const auto series = scalar_series(500, cube);
    const SmoothConfig cfg{ 0.15, Kernel::quartic() };
    const Estimate jk = jackknife_derivative(series, cfg);
    const Estimate ll = local_linear(series, cfg);
    for (double t : { 0.3, 0.5, 0.7 }) {
      const auto row = static_cast<Eigen::Index>(index_of(series.times(), t));
      const double tt = series.times()[static_cast<std::size_t>(row)];
      CHECK(std::abs((*jk.dmu_hat)(row, 0) - 3.0 * tt * tt) <
            std::abs((*ll.dmu_hat)(row, 0) - 3.0 * tt * tt));
    }
  }
}

TEST_CASE("shift and scale equivariance")
{
  std::mt19937_64 rng(21);
  std::normal_distribution<double> normal;
  RowMatrix values(64, 3);
  for (Eigen::Index i = 0; i < values.size(); ++i)
    values.data()[i] = normal(rng);
  const auto base = FunctionalSeries::equidistant(values);
  const double alpha = -1.75;
  const double shift = 2.5;
  const auto moved =
    FunctionalSeries::equidistant((alpha * values.array() + shift).matrix());
  const SmoothConfig cfg{ 0.2, Kernel::quartic() };
  for (auto kind : { EstimatorKind::LocalLinear, EstimatorKind::Jackknife,
                     EstimatorKind::NadarayaWatson }) {
    const Estimate a = smooth_full(kind, base, cfg);
    const Estimate b = smooth_full(kind, moved, cfg);
    CHECK(((alpha * a.mu_hat.array() + shift) - b.mu_hat.array()).abs().maxCoeff() <
          1e-12);
    CHECK((alpha * *a.dmu_hat - *b.dmu_hat).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("local linear and nadaraya-watson approach each other")
{
  const double h = 0.1;
  std::vector<double> grid;
  for (int k = 0; k <= 100; ++k)
    grid.push_back(h + (1.0 - 2.0 * h) * k / 100.0);
  auto gap = [&](std::size_t n) {
    const auto series = scalar_series(n, wave);
    const Estimate ll = local_linear(series, { h, Kernel::quartic() }, grid);
    const Estimate nw = nadaraya_watson(series, { h, Kernel::quartic() }, grid);
    return (ll.mu_hat - nw.mu_hat).cwiseAbs().maxCoeff();
  };
  const double coarse = gap(200);
  const double fine = gap(2000);
  CHECK(fine < coarse);
}

TEST_CASE("jackknife error decays faster than h^2")
{
  auto interior_error = [](double (*f)(double), double h) {
    const auto series = scalar_series(500, f);
    const Estimate jk = jackknife_mean(series, { h, Kernel::quartic() });
    double worst = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i)
      if (jk.interior_mask[i])
        worst = std::max(worst, std::abs(jk.mu_hat(static_cast<Eigen::Index>(i), 0) -
                                         f(series.times()[i])));
    return worst;
  };

  // t^2 has no third derivative: only the O(1/n^2) design error is left
  for (double h : { 0.1, 0.2 })
    CHECK(interior_error(square, h) < 1e-6);

  // sin(2 pi t): the h^2 term cancels and the remainder is O(h^4)
  const double narrow = interior_error(wave, 0.1);
  const double wide = interior_error(wave, 0.2);
  MESSAGE("jackknife interior error on sin: h=0.1 " << narrow << ", h=0.2 " << wide);
  CHECK(narrow < wide * 0.125);
}

TEST_CASE("estimates do not depend on the thread count")
{
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal;
  RowMatrix values(3000, 2);
  for (Eigen::Index i = 0; i < values.size(); ++i)
    values.data()[i] = normal(rng);
  const auto series = FunctionalSeries::equidistant(values);
  set_max_threads(1);
  const Estimate serial = local_linear(series, { 0.05, Kernel::quartic() });
  set_max_threads(4);
  const Estimate threaded = local_linear(series, { 0.05, Kernel::quartic() });
  set_max_threads(0);
  CHECK(serial.mu_hat == threaded.mu_hat);
  CHECK(*serial.dmu_hat == *threaded.dmu_hat);
}
