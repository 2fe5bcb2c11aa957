#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "fts/errors.hpp"
#include "fts/kernel.hpp"
#include "oracles.hpp"

using fts::Kernel;

TEST_CASE("quartic kernel values")
{
  const Kernel k = Kernel::quartic();
  CHECK(k.eval(0.0) == 0.9375);
  CHECK(k.eval(1.0) == 0.0);
  CHECK(k.eval(-1.0) == 0.0);
  CHECK(k.eval(0.5) == doctest::Approx(0.52734375).epsilon(1e-15));
  CHECK(k.eval(1.0001) == 0.0);
  CHECK(k.eval(-7.0) == 0.0);
}

TEST_CASE("jackknife kernel values")
{
  const Kernel k = Kernel::quartic();
  const double at_zero = 15.0 / 16.0 * (2.0 * std::numbers::sqrt2 - 1.0);
  CHECK(k.eval_star(0.0) == doctest::Approx(at_zero).epsilon(1e-15));
  CHECK(k.eval_star(0.0) == doctest::Approx(1.7141504294495533).epsilon(1e-14));
  // sqrt(2) * 0.9 > 1, so only -K(0.9) remains
  CHECK(k.eval_star(0.9) == doctest::Approx(-0.03384375).epsilon(1e-13));
  CHECK(k.eval_star(1.5) == 0.0);
  CHECK(k.eval_star(-1.01) == 0.0);
}

TEST_CASE("kernel invariants on random points")
{
  const Kernel k = Kernel::quartic();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = unif(rng);
    CHECK(k.eval(x) == k.eval(-x));
    CHECK(k.eval(x) >= 0.0);
    if (std::abs(x) > 1.0)
      CHECK(k.eval(x) == 0.0);
    const double expected =
      2.0 * std::numbers::sqrt2 * k.eval(std::numbers::sqrt2 * x) - k.eval(x);
    CHECK(k.eval_star(x) == expected);
  }
}

TEST_CASE("quartic moments match closed form")
{
  const Kernel k = Kernel::quartic();
  for (int ell = 0; ell <= 8; ell += 2)
    CHECK(std::abs(k.moment(ell) - oracle::quartic_moment(ell)) < 1e-10);
  CHECK(std::abs(k.moment(0) - 1.0) < 1e-10);
  CHECK(std::abs(k.moment(2) - 1.0 / 7.0) < 1e-10);
  for (int ell = 1; ell <= 7; ell += 2)
    CHECK(std::abs(k.moment(ell)) < 1e-12);
  const auto mom = k.moments();
  CHECK(mom.kappa2 > 0.0);
  CHECK(std::abs(mom.kappa3) < 1e-12);
}

TEST_CASE("jackknife kernel moments")
{
  const Kernel k = Kernel::quartic();
  CHECK(std::abs(k.moment_star(0) - 1.0) < 1e-9);
  CHECK(std::abs(k.moment_star(1)) < 1e-12);
  CHECK(std::abs(k.moment_star(2)) < 1e-9);
  // substitution: int x^l K(sqrt2 x) dx = 2^{-(l+1)/2} kappa_l
  for (int ell = 0; ell <= 6; ell += 2) {
    const double sub = std::pow(2.0, 1.0 - ell / 2.0) * oracle::quartic_moment(ell) -
                       oracle::quartic_moment(ell);
    CHECK(std::abs(k.moment_star(ell) - sub) < 1e-9);
  }
}

TEST_CASE("moment order must be non-negative")
{
  CHECK_THROWS_AS(Kernel::quartic().moment(-1), fts::InvalidArgument);
}

TEST_CASE("tabulated kernel")
{
  // triangular kernel 1 - |x| is normalized and exactly piecewise linear
  std::vector<double> table(41);
  for (std::size_t i = 0; i < table.size(); ++i) {
    const double x = -1.0 + 2.0 * i / 40.0;
    table[i] = 1.0 - std::abs(x);
  }
  const Kernel k = Kernel::tabulated(table);
  CHECK(k.shape() == fts::KernelShape::Custom);
  CHECK(k.eval(0.0) == doctest::Approx(1.0));
  CHECK(k.eval(0.33) == doctest::Approx(0.67).epsilon(1e-12));
  CHECK(k.eval(-0.33) == k.eval(0.33));
  CHECK(k.eval(1.2) == 0.0);
  CHECK(std::abs(k.moment(0) - 1.0) < 1e-6);
  CHECK(k.moment(2) == doctest::Approx(1.0 / 6.0).epsilon(1e-5));
  CHECK(std::abs(k.moment_star(2)) < 1e-5);

  SUBCASE("rejects asymmetric tables")
  {
    auto bad = table;
    bad[3] += 0.01;
    bad[5] -= 0.01;
    CHECK_THROWS_AS(Kernel::tabulated(bad), fts::InvalidArgument);
  }
  SUBCASE("rejects unnormalized tables instead of rescaling")
  {
    auto bad = table;
    for (auto& v : bad)
      v *= 1.1;
    CHECK_THROWS_AS(Kernel::tabulated(bad), fts::InvalidArgument);
  }
  SUBCASE("rejects negative values")
  {
    std::vector<double> bad{ -0.5, 1.5, 1.5, -0.5 };
    CHECK_THROWS_AS(Kernel::tabulated(bad), fts::InvalidArgument);
  }
}
