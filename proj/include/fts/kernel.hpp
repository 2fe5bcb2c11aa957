#pragma once

#include <vector>

namespace fts {

enum class KernelShape
{
  Quartic,
  Custom
};

struct KernelMoments
{
  double kappa2;
  double kappa3;
};

//! Symmetric kernel supported on [-1, 1].
//!
//! Custom kernels are given as values on equally spaced nodes covering
//! [-1, 1] and are linearly interpolated between nodes. The table must be
//! non-negative, symmetric and integrate to one; it is checked, never
//! rescaled.
class Kernel
{
public:
  static Kernel quartic();
  static Kernel tabulated(std::vector<double> values);

  KernelShape shape() const { return shape_; }
  const std::vector<double>& table() const { return table_; }

  double eval(double x) const;
  double operator()(double x) const { return eval(x); }

  //! Jackknife kernel 2*sqrt(2)*K(sqrt(2)*x) - K(x).
  double eval_star(double x) const;

  //! Integral of x^ell K(x) over [-1, 1] (composite Simpson, 2049 nodes).
  double moment(int ell) const;
  double moment_star(int ell) const;
  KernelMoments moments() const;

private:
  Kernel() = default;

  KernelShape shape_{ KernelShape::Quartic };
  std::vector<double> table_;
};

//! Composite Simpson rule on [a, b] with `nodes` (odd) equally spaced nodes.
template<class F>
double simpson(F&& f, double a, double b, int nodes = 2049)
{
  const int intervals = nodes - 1;
  const double step = (b - a) / intervals;
  double sum = f(a) + f(b);
  for (int i = 1; i < intervals; ++i)
    sum += (i % 2 == 1 ? 4.0 : 2.0) * f(a + i * step);
  return sum * step / 3.0;
}

} // namespace fts
