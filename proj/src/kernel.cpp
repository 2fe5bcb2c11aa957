#include "fts/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "fts/errors.hpp"

namespace fts {

namespace {

double quartic_value(double x)
{
  const double a = 1.0 - x * x;
  return 15.0 / 16.0 * a * a;
}

//! Exact integral of the piecewise linear interpolant.
double table_integral(const std::vector<double>& table)
{
  const double step = 2.0 / static_cast<double>(table.size() - 1);
  double sum = 0.5 * (table.front() + table.back());
  for (std::size_t i = 1; i + 1 < table.size(); ++i)
    sum += table[i];
  return sum * step;
}

} // namespace

Kernel Kernel::quartic()
{
  return Kernel{};
}

Kernel Kernel::tabulated(std::vector<double> values)
{
  if (values.size() < 2)
    throw InvalidArgument("kernel table needs at least two nodes");
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    if (!std::isfinite(v) || v < 0.0)
      throw InvalidArgument("kernel table values must be finite and >= 0");
    const double mirror = values[values.size() - 1 - i];
    if (std::abs(v - mirror) > 1e-12 * std::max(1.0, std::abs(v)))
      throw InvalidArgument("kernel table is not symmetric");
  }
  const double mass = table_integral(values);
  if (std::abs(mass - 1.0) > 1e-9)
    throw InvalidArgument("kernel table does not integrate to one (got " +
                          std::to_string(mass) + ")");

  Kernel k;
  k.shape_ = KernelShape::Custom;
  k.table_ = std::move(values);
  return k;
}

double Kernel::eval(double x) const
{
  if (!(std::abs(x) <= 1.0))
    return 0.0;
  if (shape_ == KernelShape::Quartic)
    return quartic_value(x);

  // evaluate at |x| so the interpolant is exactly symmetric
  const double pos = (1.0 + std::abs(x)) * 0.5 * (table_.size() - 1);
  const auto left = std::min(static_cast<std::size_t>(pos), table_.size() - 2);
  const double frac = pos - static_cast<double>(left);
  return (1.0 - frac) * table_[left] + frac * table_[left + 1];
}

double Kernel::eval_star(double x) const
{
  constexpr double root2 = std::numbers::sqrt2;
  return 2.0 * root2 * eval(root2 * x) - eval(x);
}

double Kernel::moment(int ell) const
{
  if (ell < 0)
    throw InvalidArgument("moment order must be non-negative");
  return simpson([&](double x) { return std::pow(x, ell) * eval(x); },
                 -1.0,
                 1.0);
}

double Kernel::moment_star(int ell) const
{
  if (ell < 0)
    throw InvalidArgument("moment order must be non-negative");
  // K* has kinks at +-1/sqrt(2), so integrate piecewise
  constexpr double inner = std::numbers::sqrt2 / 2.0;
  auto f = [&](double x) { return std::pow(x, ell) * eval_star(x); };
  return simpson(f, -1.0, -inner) + simpson(f, -inner, inner) +
         simpson(f, inner, 1.0);
}

KernelMoments Kernel::moments() const
{
  return { moment(2), moment(3) };
}

} // namespace fts
