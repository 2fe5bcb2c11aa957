#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fts/types.hpp"

namespace fts {

//! Discretization of the norm on the value space.
enum class Norm
{
  L1,
  L2,
  Sup
};

//! Layout of one observation: `curves` functions sampled on `points` grid
//! points j/(points-1), flattened curve-major.
struct ValueGrid
{
  std::size_t curves{ 1 };
  std::size_t points{ 1 };

  std::size_t dim() const { return curves * points; }
  bool operator==(const ValueGrid&) const = default;
};

//! Time series of discretized functional observations.
class FunctionalSeries
{
public:
  //! Throws InvalidArgument unless `times` is strictly increasing in [0, 1],
  //! has one entry per row of `values`, and all values are finite. A
  //! default-constructed grid means a single curve with values.cols() points.
  FunctionalSeries(std::vector<double> times,
                   RowMatrix values,
                   ValueGrid grid = {},
                   Norm norm = Norm::L2);

  //! Observations at i/n, i = 1, ..., n.
  static FunctionalSeries equidistant(RowMatrix values,
                                      ValueGrid grid = {},
                                      Norm norm = Norm::L2);

  std::size_t size() const { return times_.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(values_.cols()); }
  const std::vector<double>& times() const { return times_; }
  const RowMatrix& values() const { return values_; }
  const ValueGrid& grid() const { return grid_; }
  Norm norm() const { return norm_; }

  //! Rows selected by strictly increasing indices.
  FunctionalSeries subset(std::span<const std::size_t> rows) const;

private:
  std::vector<double> times_;
  RowMatrix values_;
  ValueGrid grid_;
  Norm norm_;
};

std::vector<double> equidistant_times(std::size_t n);

} // namespace fts
